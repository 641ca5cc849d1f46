#pragma once

#include <Eigen/Dense>

#include <vector>

#include "nagp/fockspace.hpp"
#include "nagp/lie.hpp"

namespace nagp {

// Cosine-sine decomposition of a 4x4 unitary split into 2x2 channel blocks:
//   g = [u1 0; 0 u2] * [cos D, i sin D; i sin D, cos D] * [v1 0; 0 v2]'
// with D = diag(d1, d2), 0 <= d1 <= d2 <= pi/2.
struct CSDFactors {
    Matrix2cd u1, u2, v1, v2;
    Eigen::Vector2d d;

    Matrix4cd recompose() const;
};

CSDFactors cs_decompose(const Matrix4cd& g, double tol = 1e-8);

// Cartan-style factorization g = kbar * p0(x_h, x_v) * kprime with kbar in
// the gauge slice gamma_b = delta_b = 0 (channel b contributes only its
// z-y half-turn data; the removed freedom is exactly the right isotropy
// action of p0). degenerate_angles flags x_h ~ x_v, where the factors are
// not unique and downstream consumers should not rely on continuity.
struct CartanFactors {
    EulerParamsLO kbar;
    double x_h = 0.0, x_v = 0.0;
    Matrix4cd kprime;
    bool degenerate_angles = false;

    Matrix4cd recompose() const;
};

CartanFactors cartan_kpk(const Matrix4cd& g, double tol = 1e-8);

// True when g is block diagonal in the channel split to within tol.
bool is_local(const Matrix4cd& g, double tol = 1e-8);

// How a cycle's endpoint sits over the initial fiber: a local unitary, the
// channel swap times a local unitary, or neither.
enum class Closing { kStrictlyLocal, kSwapTimesLocal, kNotClosing };

const char* to_string(Closing c);

Closing classify_closing(const Matrix4cd& g, double tol = 1e-8);

// Optical realization of exp(i s j) for fixed Hermitian j: a diagonal phase
// layer conjugated by a static mesh of two-mode rotations,
//   exp(i s j) = V' diag(exp(i s c)) V,   V = R_1 ... R_r P
// with each R_k acting on an adjacent mode pair and P a diagonal phase.
struct TwoModeRotation {
    int lo = 0;  // acts on modes lo, lo+1
    Matrix2cd block;
};

struct CompiledSubgroup {
    Eigen::Vector4d c;  // eigenvalues of j, descending
    Matrix4cd v;
    std::vector<TwoModeRotation> rotations;
    Eigen::Vector4cd phases;  // diagonal of P

    Matrix4cd element(double s) const;  // exp(i s j)
    Matrix4cd mesh() const;             // rotations and phases recomposed to V
};

CompiledSubgroup compile_one_param(const Matrix4cd& j, double tol = 1e-8);
CompiledSubgroup compile_one_param(const GeneratorCombo& combo, double tol = 1e-8);

}  // namespace nagp
