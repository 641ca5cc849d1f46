#include "nagp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nagp/errors.hpp"

namespace nagp {
namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unitary(const Matrix4cd& g, double tol) {
    double defect = (g.adjoint() * g - Matrix4cd::Identity()).norm();
    if (!(defect <= tol)) {
        throw NonUnitaryInput("matrix is not unitary: ||g'g - 1|| = " +
                              std::to_string(defect));
    }
}

// Rotate each column's leading nonzero entry to the positive real axis.
// Applying the same phases to a partner matrix preserves a C r' product.
void phase_fix_columns(Matrix2cd& m, Matrix2cd& partner) {
    for (int k = 0; k < 2; ++k) {
        int lead = std::abs(m(0, k)) > 1e-9 ? 0 : 1;
        complex<double> z = m(lead, k);
        if (std::abs(z) <= 1e-9) continue;
        complex<double> phase = std::conj(z) / std::abs(z);
        m.col(k) *= phase;
        partner.col(k) *= phase;
    }
}

// Unit vector orthogonal to u (2-dimensional complement is a line).
Eigen::Vector2cd orthogonal_unit(const Eigen::Vector2cd& u) {
    Eigen::Vector2cd v;
    v(0) = -std::conj(u(1));
    v(1) = std::conj(u(0));
    return v;
}

Matrix4cd block_diag(const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd m = Matrix4cd::Zero();
    m.topLeftCorner<2, 2>() = a;
    m.bottomRightCorner<2, 2>() = b;
    return m;
}

}  // namespace

Matrix4cd CSDFactors::recompose() const {
    return block_diag(u1, u2) * p0(2.0 * d(0), 2.0 * d(1)) *
           block_diag(v1, v2).adjoint();
}

CSDFactors cs_decompose(const Matrix4cd& g, double tol) {
    require_unitary(g, tol);

    Matrix2cd g00 = g.topLeftCorner<2, 2>();
    Matrix2cd g01 = g.topRightCorner<2, 2>();
    Matrix2cd g10 = g.bottomLeftCorner<2, 2>();
    Matrix2cd g11 = g.bottomRightCorner<2, 2>();

    // Singular values of the upper-left block are the cosines. Descending
    // singular values give ascending angles d in [0, pi/2].
    Eigen::JacobiSVD<Matrix2cd> svd(g00,
                                    Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix2cd l0 = svd.matrixU();
    Matrix2cd r0 = svd.matrixV();
    phase_fix_columns(l0, r0);

    CSDFactors f;
    for (int k = 0; k < 2; ++k) {
        f.d(k) = std::acos(std::clamp(svd.singularValues()(k), 0.0, 1.0));
    }

    // Lower-left columns in the r0 frame are orthogonal with norms sin d.
    // Peeling off the conventional factor i aligns them into l1; vanished
    // columns are completed orthonormally.
    Matrix2cd b = g10 * r0;
    Matrix2cd l1;
    std::array<bool, 2> assigned{false, false};
    for (int k = 0; k < 2; ++k) {
        double nk = b.col(k).norm();
        if (nk > 1e-9) {
            l1.col(k) = -kI * b.col(k) / nk;
            assigned[k] = true;
        }
    }
    if (!assigned[0] && !assigned[1]) {
        l1 = Matrix2cd::Identity();
    } else if (!assigned[0]) {
        l1.col(0) = orthogonal_unit(l1.col(1));
    } else if (!assigned[1]) {
        l1.col(1) = orthogonal_unit(l1.col(0));
    }

    // Rows of the right factor come from whichever of the two coupled block
    // equations is better conditioned at this angle.
    Matrix2cd w;
    for (int k = 0; k < 2; ++k) {
        double sk = std::sin(f.d(k));
        double ck = std::cos(f.d(k));
        if (sk >= ck) {
            w.row(k) = (l0.col(k).adjoint() * g01) / (kI * sk);
        } else {
            w.row(k) = (l1.col(k).adjoint() * g11) / ck;
        }
    }

    f.u1 = l0;
    f.u2 = l1;
    f.v1 = r0;
    f.v2 = w.adjoint();
    return f;
}

Matrix4cd CartanFactors::recompose() const {
    return euler_to_unitary(kbar) * p0(x_h, x_v) * kprime;
}

CartanFactors cartan_kpk(const Matrix4cd& g, double tol) {
    CSDFactors f = cs_decompose(g, tol);

    CartanFactors out;
    out.x_h = 2.0 * f.d(0);
    out.x_v = 2.0 * f.d(1);
    out.degenerate_angles = std::abs(out.x_h - out.x_v) <= tol;

    // The left local factor carries a residual right action of the subgroup
    // commuting with the middle factor: equal z-rotations and equal phases
    // in both channels. That action shifts gamma and delta of each channel
    // together, so it can zero the channel-b pair; the compensating element
    // folds into the right factor.
    EulerParamsLO left =
        unitary_to_euler(block_diag(f.u1, f.u2), std::sqrt(tol));
    double theta = left.gamma_b;
    double phi = left.delta_b;

    out.kbar = left;
    out.kbar.gamma_b = 0.0;
    out.kbar.delta_b = 0.0;
    // Shifting delta alone by 2 pi flips the channel sign; only the joint
    // shift of gamma and delta is a symmetry. Reduce delta with paired
    // turns on gamma first, then reduce gamma by its own period of 4 pi.
    double gamma = left.gamma_a - theta;
    double delta = left.delta_a - phi;
    while (delta < 0.0) {
        delta += kTwoPi;
        gamma += kTwoPi;
    }
    while (delta >= kTwoPi) {
        delta -= kTwoPi;
        gamma -= kTwoPi;
    }
    gamma = std::fmod(gamma, 2.0 * kTwoPi);
    if (gamma < 0.0) gamma += 2.0 * kTwoPi;
    out.kbar.gamma_a = gamma;
    out.kbar.delta_a = delta;

    Eigen::Vector4cd z;
    z(0) = std::exp(kI * ((theta + phi) / 2.0));
    z(1) = std::exp(kI * ((phi - theta) / 2.0));
    z(2) = z(0);
    z(3) = z(1);
    out.kprime = z.asDiagonal() * block_diag(f.v1, f.v2).adjoint();
    return out;
}

bool is_local(const Matrix4cd& g, double tol) {
    return g.topRightCorner<2, 2>().norm() +
               g.bottomLeftCorner<2, 2>().norm() <=
           tol;
}

const char* to_string(Closing c) {
    switch (c) {
        case Closing::kStrictlyLocal: return "StrictlyLocal";
        case Closing::kSwapTimesLocal: return "SwapTimesLocal";
        case Closing::kNotClosing: return "NotClosing";
    }
    return "NotClosing";
}

Closing classify_closing(const Matrix4cd& g, double tol) {
    if (is_local(g, tol)) return Closing::kStrictlyLocal;
    if (is_local(swap_channels() * g, tol)) return Closing::kSwapTimesLocal;
    return Closing::kNotClosing;
}

Matrix4cd CompiledSubgroup::element(double s) const {
    Eigen::Vector4cd ph;
    for (int k = 0; k < 4; ++k) ph(k) = std::exp(kI * (s * c(k)));
    return v.adjoint() * ph.asDiagonal() * v;
}

Matrix4cd CompiledSubgroup::mesh() const {
    Matrix4cd m = Matrix4cd::Identity();
    for (const TwoModeRotation& r : rotations) {
        Matrix4cd full = Matrix4cd::Identity();
        full.block<2, 2>(r.lo, r.lo) = r.block.adjoint();
        m = m * full;
    }
    return m * Matrix4cd(phases.asDiagonal());
}

CompiledSubgroup compile_one_param(const Matrix4cd& j, double tol) {
    if ((j - j.adjoint()).norm() > tol) {
        throw NonHermitianInput("generator is not Hermitian");
    }

    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(j);

    CompiledSubgroup out;
    Matrix4cd q;
    // Eigen returns ascending eigenvalues; the convention here is descending.
    for (int k = 0; k < 4; ++k) {
        out.c(k) = es.eigenvalues()(3 - k);
        q.col(k) = es.eigenvectors().col(3 - k);
    }
    out.v = q.adjoint();
    for (int r = 0; r < 4; ++r) {
        int lead = 0;
        while (lead < 3 && std::abs(out.v(r, lead)) <= 1e-9) ++lead;
        complex<double> z = out.v(r, lead);
        if (std::abs(z) > 1e-9) out.v.row(r) *= std::conj(z) / std::abs(z);
    }

    // Factor v into adjacent-pair rotations by eliminating subdiagonal
    // entries bottom-up; what remains of a unitary upper triangle is a
    // diagonal of phases.
    Matrix4cd m = out.v;
    for (int col = 0; col < 3; ++col) {
        for (int row = 3; row > col; --row) {
            complex<double> a = m(row - 1, col);
            complex<double> b = m(row, col);
            double rho = std::sqrt(std::norm(a) + std::norm(b));
            if (rho <= 1e-14) continue;
            Matrix2cd rot;
            rot << std::conj(a) / rho, std::conj(b) / rho,
                   -b / rho, a / rho;
            m.block<2, 4>(row - 1, 0) = rot * m.block<2, 4>(row - 1, 0);
            m(row, col) = 0.0;
            out.rotations.push_back(TwoModeRotation{row - 1, rot});
        }
    }
    out.phases = m.diagonal();
    return out;
}

CompiledSubgroup compile_one_param(const GeneratorCombo& combo, double tol) {
    return compile_one_param(combo.fundamental(), tol);
}

}  // namespace nagp
