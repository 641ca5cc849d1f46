#include "nagp/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "nagp/errors.hpp"

namespace nagp {
namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    // fmod can land exactly on the excluded endpoint after the correction.
    if (y >= kTwoPi) y = 0.0;
    return y;
}

// Euler angles of one 2x2 unitary block. The z-y-z product
//   e^{i a sz/2} e^{i b sy/2} e^{i g sz/2} e^{i d/2}
// has entries
//   [ e^{i(a+g)/2} cos(b/2)   e^{i(a-g)/2} sin(b/2) ]
//   [ -e^{-i(a-g)/2} sin(b/2) e^{-i(a+g)/2} cos(b/2)] * e^{i d/2}.
struct BlockAngles {
    double alpha, beta, gamma, delta;
};

BlockAngles block_to_angles(const Matrix2cd& u) {
    BlockAngles r{};
    r.delta = wrap_2pi(std::arg(u.determinant()));
    Matrix2cd v = u * std::exp(-kI * (r.delta / 2.0));
    double c = std::abs(v(0, 0));
    double s = std::abs(v(0, 1));
    r.beta = 2.0 * std::atan2(s, c);

    // mu and nu are the phases of the two top-row entries. At the ties
    // beta = 0 or pi one of them is unconstrained; copying the other keeps
    // gamma = 0 there whenever the ranges permit.
    double mu, nu;
    if (s <= 1e-12) {
        mu = nu = std::arg(v(0, 0));
    } else if (c <= 1e-12) {
        mu = nu = std::arg(v(0, 1));
    } else {
        mu = std::arg(v(0, 0));
        nu = std::arg(v(0, 1));
    }

    // alpha and gamma enter through half angles, so each is only defined
    // modulo 4 pi and a joint shift of 2 pi is a symmetry. Normalize alpha
    // into [0, 2 pi) with joint shifts; whatever 4 pi residue is left on
    // gamma stays there ([0, 4 pi) covers the half of U(2) that
    // [0, 2 pi)^2 cannot express).
    double alpha = mu + nu;
    double gamma = mu - nu;
    if (alpha < 0.0) {
        alpha += 2.0 * std::numbers::pi;
        gamma += 2.0 * std::numbers::pi;
    }
    if (alpha >= 2.0 * std::numbers::pi) {
        alpha -= 2.0 * std::numbers::pi;
        gamma -= 2.0 * std::numbers::pi;
    }
    if (gamma < 0.0) gamma += 4.0 * std::numbers::pi;
    if (gamma >= 4.0 * std::numbers::pi) gamma -= 4.0 * std::numbers::pi;
    r.alpha = alpha;
    r.gamma = gamma;
    return r;
}

Matrix2cd angles_to_block(double alpha, double beta, double gamma, double delta) {
    double c = std::cos(beta / 2.0);
    double s = std::sin(beta / 2.0);
    Matrix2cd u;
    u(0, 0) = std::exp(kI * ((alpha + gamma) / 2.0)) * c;
    u(0, 1) = std::exp(kI * ((alpha - gamma) / 2.0)) * s;
    u(1, 0) = -std::exp(-kI * ((alpha - gamma) / 2.0)) * s;
    u(1, 1) = std::exp(-kI * ((alpha + gamma) / 2.0)) * c;
    return u * std::exp(kI * (delta / 2.0));
}

// One channel's share of the closed-form Maurer-Cartan pullback, expressed
// in the su(2) + u(1) coefficients (x, y, z, 0).
std::array<double, 4> channel_theta(double beta, double gamma,
                                    double dalpha, double dbeta,
                                    double dgamma, double ddelta) {
    double sb = std::sin(beta), cb = std::cos(beta);
    double sg = std::sin(gamma), cg = std::cos(gamma);
    return {
        -(cg * sb * dalpha - sg * dbeta),  // J_x
        -(sg * sb * dalpha + cg * dbeta),  // J_y
        -(cb * dalpha + dgamma),           // J_z
        -ddelta,                           // J_0
    };
}

}  // namespace

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double s, double tol) {
    if ((h - h.adjoint()).norm() > tol) {
        throw NonHermitianInput("exponent is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases =
        (kI * s * es.eigenvalues().cast<complex<double>>().array()).exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix4cd p0(double x_h, double x_v) {
    // exp(i x J_x) on a mode pair is [[cos x/2, i sin x/2], [i sin x/2, cos x/2]].
    Matrix4cd g = Matrix4cd::Identity();
    auto fill = [&g](int p, int q, double x) {
        g(p, p) = g(q, q) = std::cos(x / 2.0);
        g(p, q) = g(q, p) = kI * std::sin(x / 2.0);
    };
    fill(kModeAH, kModeBH, x_h);
    fill(kModeAV, kModeBV, x_v);
    return g;
}

Matrix4cd euler_to_unitary(const EulerParamsLO& p) {
    Matrix4cd k = Matrix4cd::Zero();
    k.topLeftCorner<2, 2>() =
        angles_to_block(p.alpha_a, p.beta_a, p.gamma_a, p.delta_a);
    k.bottomRightCorner<2, 2>() =
        angles_to_block(p.alpha_b, p.beta_b, p.gamma_b, p.delta_b);
    return k;
}

EulerParamsLO unitary_to_euler(const Matrix4cd& k, double tol) {
    double off = k.topRightCorner<2, 2>().norm() + k.bottomLeftCorner<2, 2>().norm();
    if (off > tol) {
        throw NotBlockDiagonal("matrix mixes the channels; off-block norm " +
                               std::to_string(off));
    }
    BlockAngles a = block_to_angles(k.topLeftCorner<2, 2>());
    BlockAngles b = block_to_angles(k.bottomRightCorner<2, 2>());
    EulerParamsLO p;
    p.alpha_a = a.alpha;
    p.beta_a = a.beta;
    p.gamma_a = a.gamma;
    p.delta_a = a.delta;
    p.alpha_b = b.alpha;
    p.beta_b = b.beta;
    p.gamma_b = b.gamma;
    p.delta_b = b.delta;
    return p;
}

std::optional<Eigen::MatrixXcd> UnitaryCurve::derivative(double) const {
    return std::nullopt;
}

ExponentialCurve::ExponentialCurve(Eigen::MatrixXcd j, Eigen::MatrixXcd base)
    : j_(std::move(j)), base_(std::move(base)) {
    if ((j_ - j_.adjoint()).norm() > 1e-8) {
        throw NonHermitianInput("curve generator is not Hermitian");
    }
}

Eigen::MatrixXcd ExponentialCurve::value(double s) const {
    Eigen::MatrixXcd g = expm_hermitian(j_, s);
    return base_.size() == 0 ? g : g * base_;
}

std::optional<Eigen::MatrixXcd> ExponentialCurve::derivative(double s) const {
    return kI * j_ * value(s);
}

CallableCurve::CallableCurve(std::function<Eigen::MatrixXcd(double)> fn)
    : fn_(std::move(fn)) {}

Eigen::MatrixXcd CallableCurve::value(double s) const { return fn_(s); }

Eigen::MatrixXcd maurer_cartan(const UnitaryCurve& curve, double s,
                               DerivativeMode mode, double fd_step) {
    Eigen::MatrixXcd dg;
    if (mode == DerivativeMode::kAnalytic) {
        auto d = curve.derivative(s);
        if (!d) {
            throw InputError("curve provides no analytic derivative");
        }
        dg = *std::move(d);
    } else {
        double h = fd_step * std::max(1.0, std::abs(s));
        dg = (curve.value(s + h) - curve.value(s - h)) / (2.0 * h);
    }
    Eigen::MatrixXcd theta = kI * curve.value(s).adjoint() * dg;
    return 0.5 * (theta + theta.adjoint().eval());
}

Matrix4cd euler_maurer_cartan(const EulerParamsLO& value,
                              const EulerParamsLO& velocity) {
    auto a = channel_theta(value.beta_a, value.gamma_a, velocity.alpha_a,
                           velocity.beta_a, velocity.gamma_a, velocity.delta_a);
    auto b = channel_theta(value.beta_b, value.gamma_b, velocity.alpha_b,
                           velocity.beta_b, velocity.gamma_b, velocity.delta_b);
    Matrix4cd theta = Matrix4cd::Zero();
    const GeneratorLabel la[4] = {GeneratorLabel::kJax, GeneratorLabel::kJay,
                                  GeneratorLabel::kJaz, GeneratorLabel::kJa0};
    const GeneratorLabel lb[4] = {GeneratorLabel::kJbx, GeneratorLabel::kJby,
                                  GeneratorLabel::kJbz, GeneratorLabel::kJb0};
    for (int i = 0; i < 4; ++i) {
        theta += a[i] * generator_fundamental(la[i]);
        theta += b[i] * generator_fundamental(lb[i]);
    }
    return theta;
}

}  // namespace nagp
