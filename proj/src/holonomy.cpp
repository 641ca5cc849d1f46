#include "nagp/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>

#include "nagp/errors.hpp"

namespace nagp {
namespace {

// Midpoint-rule ordered product over one segment, n equal steps, later
// parameter values multiplying on the left.
Matrix4cd segment_product(const Path& path, const PathSegment& seg, long n,
                          const Matrix4cd& basis) {
    double len = seg.s_end - seg.s_start;
    double dt = len / double(n);
    Matrix4cd w = Matrix4cd::Identity();
    for (long j = 0; j < n; ++j) {
        double s = seg.s_start + (double(j) + 0.5) * dt;
        Matrix4cd a = gauge_potential(path, s, basis);
        w = Matrix4cd(expm_hermitian(a, dt)) * w;
    }
    return w;
}

}  // namespace

Path::Path(std::vector<PathSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw OutOfRange("path needs at least one segment");
    }
    if (segments_.front().s_start != 0.0) {
        throw OutOfRange("path must start at s = 0");
    }
    double cursor = 0.0;
    prefix_.reserve(segments_.size());
    Matrix4cd value = Matrix4cd::Identity();
    for (const PathSegment& seg : segments_) {
        if (seg.s_start != cursor) {
            throw OutOfRange("segments do not tile the parameter range");
        }
        if (seg.s_end < seg.s_start) {
            throw InvalidLength("segment runs backwards");
        }
        if ((seg.generator - seg.generator.adjoint()).norm() > 1e-8) {
            throw NonHermitianInput("segment generator is not Hermitian");
        }
        prefix_.push_back(value);
        value = Matrix4cd(expm_hermitian(seg.generator,
                                         seg.s_end - seg.s_start)) *
                value;
        cursor = seg.s_end;
    }
}

double Path::s_end() const { return segments_.back().s_end; }

int Path::segment_index(double s) const {
    if (s < 0.0 || s > s_end()) {
        throw OutOfRange("parameter outside the path range");
    }
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (s < segments_[k].s_end) return int(k);
    }
    return int(segments_.size()) - 1;
}

Matrix4cd Path::at(double s) const {
    int k = segment_index(s);
    const PathSegment& seg = segments_[k];
    return Matrix4cd(expm_hermitian(seg.generator, s - seg.s_start)) *
           prefix_[k];
}

Matrix10cd cumulative(const Path& path, double s) {
    // The two-photon image is multiplicative, so lifting the accumulated
    // product equals accumulating lifted factors.
    return lift(path.at(s));
}

Matrix4cd gauge_potential(const Path& path, double s) {
    int k = path.segment_index(s);
    Matrix10cd j2 = rep_two_photon(path.segments()[k].generator);
    Matrix10cd g = cumulative(path, s);
    Matrix4cd a = -project_h11(g.adjoint() * j2 * g);
    return 0.5 * (a + a.adjoint().eval());
}

Matrix4cd gauge_potential(const Path& path, double s, const Matrix4cd& basis) {
    return basis.adjoint() * gauge_potential(path, s) * basis;
}

Holonomy wilson_loop(const Path& path, const WilsonOptions& opts) {
    Holonomy result;
    result.classification = classify_closing(path.endpoint(), opts.closure_tol);
    if (result.classification == Closing::kNotClosing) {
        throw NotClosed("path endpoint is neither local nor swap times local");
    }

    const auto& segs = path.segments();
    std::vector<Matrix4cd> constant_factor;
    std::vector<bool> exact(segs.size(), false);
    constant_factor.resize(segs.size(), Matrix4cd::Identity());

    for (std::size_t k = 0; k < segs.size(); ++k) {
        double len = segs[k].s_end - segs[k].s_start;
        if (len == 0.0) {
            exact[k] = true;
            continue;
        }
        if (!opts.constant_shortcut) continue;
        Matrix4cd a1 = gauge_potential(path, segs[k].s_start + 0.25 * len,
                                       opts.basis);
        Matrix4cd a2 = gauge_potential(path, segs[k].s_start + 0.5 * len,
                                       opts.basis);
        Matrix4cd a3 = gauge_potential(path, segs[k].s_start + 0.75 * len,
                                       opts.basis);
        if ((a1 - a2).norm() <= 1e-12 && (a2 - a3).norm() <= 1e-12) {
            exact[k] = true;
            constant_factor[k] = expm_hermitian(a2, len);
        }
    }

    auto assemble = [&](long n) {
        Matrix4cd w = Matrix4cd::Identity();
        for (std::size_t k = 0; k < segs.size(); ++k) {
            Matrix4cd f = exact[k] ? constant_factor[k]
                                   : segment_product(path, segs[k], n,
                                                     opts.basis);
            w = f * w;
        }
        return w;
    };

    bool all_exact =
        std::all_of(exact.begin(), exact.end(), [](bool b) { return b; });
    if (all_exact) {
        result.matrix = assemble(1);
        return result;
    }

    long n = 16;
    Matrix4cd w = assemble(n);
    while (true) {
        if (2 * n > opts.max_steps) {
            throw NoConvergence("ordered product did not settle within " +
                                std::to_string(opts.max_steps) + " steps");
        }
        n *= 2;
        Matrix4cd refined = assemble(n);
        result.residual = (refined - w).norm();
        w = refined;
        if (result.residual <= opts.tol) break;
    }
    result.matrix = w;
    result.steps = n;
    return result;
}

Holonomy wilson_loop(const Path& path, double tol) {
    WilsonOptions opts;
    opts.tol = tol;
    return wilson_loop(path, opts);
}

TotalTransformation total_transformation(const Path& path) {
    TotalTransformation t;
    t.full = cumulative(path, path.s_end());
    t.restricted = project_h11(t.full);
    t.classification = classify_closing(path.endpoint());
    return t;
}

TwoQubitState apply_cycle(const TwoQubitState& state, const Path& path) {
    TotalTransformation t = total_transformation(path);
    if (t.classification == Closing::kNotClosing) {
        throw NotClosed("path endpoint is neither local nor swap times local");
    }
    // Closing endpoints preserve the qubit block, so the restricted total
    // transformation is unitary and conjugation keeps the state valid.
    return TwoQubitState(t.restricted * state.rho() * t.restricted.adjoint());
}

ClosureSolution solve_closure(double theta, double phi, double s1_end,
                              int max_mn) {
    constexpr double kPi = std::numbers::pi;
    if (theta < 0.0 || theta > kPi / 2.0 || phi < 0.0 || phi > kPi / 2.0) {
        throw OutOfRange("mixing angles must lie in [0, pi/2]");
    }
    if (s1_end < 0.0) {
        throw InvalidLength("first-leg length must be nonnegative");
    }
    double c1 = std::cos(theta) * std::cos(theta);
    double c3 = std::cos(phi) * std::cos(phi);
    for (int total = 0; total <= max_mn; ++total) {
        double s3 = double(total) * kPi - s1_end;
        if (s3 < -1e-12) continue;
        s3 = std::max(s3, 0.0);
        double m_real = (s1_end * c1 + s3 * c3) / kPi;
        int m = int(std::llround(m_real));
        if (std::abs(m_real - double(m)) * kPi > 1e-10) continue;
        int n = total - m;
        if (m < 0 || n < 0) continue;
        if (m % 2 != n % 2) continue;
        return ClosureSolution{m, n, s3};
    }
    throw NoSolution("no closing third leg with m + n <= " +
                     std::to_string(max_mn));
}

Path build_triangle_path(double theta, double phi, double s1_end,
                         const GeneratorCombo& kbar_generator, double s2_end) {
    if (!kbar_generator.is_local()) {
        throw OutOfRange("middle-leg generator must use local labels only");
    }
    if (s2_end < 0.0) {
        throw InvalidLength("middle-leg length must be nonnegative");
    }
    ClosureSolution closure = solve_closure(theta, phi, s1_end);

    GeneratorCombo mix1{{GeneratorLabel::kJHHx, std::cos(theta) * std::cos(theta)},
                        {GeneratorLabel::kJVVx, std::sin(theta) * std::sin(theta)}};
    GeneratorCombo mix3{{GeneratorLabel::kJHHx, std::cos(phi) * std::cos(phi)},
                        {GeneratorLabel::kJVVx, std::sin(phi) * std::sin(phi)}};

    Matrix4cd j2 = kbar_generator.fundamental();
    Matrix4cd kbar_end = expm_hermitian(j2, s2_end);
    Matrix4cd j3 = kbar_end * mix3.fundamental() * kbar_end.adjoint();

    std::vector<PathSegment> segs(3);
    segs[0] = PathSegment{mix1, mix1.fundamental(), 0.0, s1_end};
    segs[1] = PathSegment{kbar_generator, j2, s1_end, s1_end + s2_end};
    // The conjugated generator generally leaves the label span, so the
    // third segment carries only the dense matrix.
    segs[2] = PathSegment{GeneratorCombo{}, j3, s1_end + s2_end,
                          s1_end + s2_end + closure.s3_end};
    return Path(std::move(segs));
}

Matrix4cd nagp_example_closed_form(double s2_end) {
    double s = std::sin(s2_end / 2.0) / 2.0;
    double cp = (1.0 + std::cos(s2_end / 2.0)) / 2.0;
    double cm = (1.0 - std::cos(s2_end / 2.0)) / 2.0;
    Matrix4cd k;
    k << cp, -s, -s, cm,
         s, cp, -cm, -s,
         s, -cm, cp, -s,
         cm, s, s, cp;
    return k;
}

}  // namespace nagp
