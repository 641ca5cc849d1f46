#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "nagp/fockspace.hpp"

namespace nagp {

// exp(i s h) of a Hermitian matrix, via its eigendecomposition.
// Throws NonHermitianInput when ||h - h'||_F exceeds tol.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double s = 1.0,
                                double tol = 1e-8);

// The polarization-preserving nonlocal element
// exp(i x_h J_HHx) exp(i x_v J_VVx): independent beam-splitter rotations
// on the H pair and the V pair of modes.
Matrix4cd p0(double x_h, double x_v);

// Euler angles of a local unitary, one z-y-z triple plus a phase per channel:
//   k = exp(i a_z J_az) exp(i b_a J_ay) exp(i g_a J_az) exp(i d_a J_a0) * (same for b).
// Canonical ranges: alpha, delta in [0, 2 pi), beta in [0, pi], gamma in
// [0, 4 pi). The angles enter through half angles, so [0, 2 pi)^2 for the
// pair (alpha, gamma) reaches only half of U(2); the second turn on gamma
// covers the rest.
struct EulerParamsLO {
    double alpha_a = 0.0, beta_a = 0.0, gamma_a = 0.0, delta_a = 0.0;
    double alpha_b = 0.0, beta_b = 0.0, gamma_b = 0.0, delta_b = 0.0;

    bool operator==(const EulerParamsLO&) const = default;
};

Matrix4cd euler_to_unitary(const EulerParamsLO& p);

// Inverse of euler_to_unitary on local unitaries: euler_to_unitary of the
// result reproduces k. At beta = 0 or pi the z-rotations merge; the tie
// resolves to gamma = 0 (gamma = 2 pi on the half the canonical square
// cannot reach). Throws NotBlockDiagonal when k mixes the channels
// beyond tol.
EulerParamsLO unitary_to_euler(const Matrix4cd& k, double tol = 1e-8);

// A differentiable one-parameter family of unitaries.
class UnitaryCurve {
public:
    virtual ~UnitaryCurve() = default;
    virtual Eigen::MatrixXcd value(double s) const = 0;
    // Analytic derivative when available; integrators fall back to central
    // differences otherwise.
    virtual std::optional<Eigen::MatrixXcd> derivative(double s) const;
};

// s -> exp(i s j) * base for a fixed Hermitian generator j.
class ExponentialCurve : public UnitaryCurve {
public:
    explicit ExponentialCurve(Eigen::MatrixXcd j,
                              Eigen::MatrixXcd base = Eigen::MatrixXcd());
    Eigen::MatrixXcd value(double s) const override;
    std::optional<Eigen::MatrixXcd> derivative(double s) const override;

private:
    Eigen::MatrixXcd j_;
    Eigen::MatrixXcd base_;  // identity when empty
};

class CallableCurve : public UnitaryCurve {
public:
    explicit CallableCurve(std::function<Eigen::MatrixXcd(double)> fn);
    Eigen::MatrixXcd value(double s) const override;

private:
    std::function<Eigen::MatrixXcd(double)> fn_;
};

enum class DerivativeMode { kAnalytic, kFiniteDifference };

// Maurer-Cartan pullback i G(s)' dG/ds, Hermitian for unitary G.
// kAnalytic requires the curve to provide a derivative.
Eigen::MatrixXcd maurer_cartan(const UnitaryCurve& curve, double s,
                               DerivativeMode mode = DerivativeMode::kAnalytic,
                               double fd_step = 1e-6);

// Closed form of the pullback for a curve of local unitaries given by Euler
// angles: with primes denoting d/ds, per channel
//   i k' dk/ds = -(cos b a' + g') J_z - (cos g sin b a' - sin g b') J_x
//                - (sin g sin b a' + cos g b') J_y - d' J_0.
Matrix4cd euler_maurer_cartan(const EulerParamsLO& value,
                              const EulerParamsLO& velocity);

}  // namespace nagp
