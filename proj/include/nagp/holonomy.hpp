#pragma once

#include <Eigen/Dense>

#include <vector>

#include "nagp/decompose.hpp"
#include "nagp/fockspace.hpp"
#include "nagp/lie.hpp"

namespace nagp {

// One leg of a piecewise-exponential path in U(4): the curve
// s -> exp(i (s - s_start) generator) * (value at s_start).
// combo is empty when the generator was given as a dense matrix (conjugated
// generators generally leave the span of the 16 labels).
struct PathSegment {
    GeneratorCombo combo;
    Matrix4cd generator = Matrix4cd::Zero();
    double s_start = 0.0;
    double s_end = 0.0;
};

// Contiguous piecewise-exponential path starting at the identity at s = 0.
// Segments must tile [0, s_end()] without gaps; zero-length segments are
// permitted (they contribute nothing but keep leg indices stable).
class Path {
public:
    explicit Path(std::vector<PathSegment> segments);

    const std::vector<PathSegment>& segments() const { return segments_; }
    double s_end() const;

    // Value of the path in the defining representation at parameter s.
    Matrix4cd at(double s) const;
    Matrix4cd endpoint() const { return at(s_end()); }

    // Index of the segment whose interior evaluation applies at s:
    // right-continuous at interior boundaries, left-sided at the path end.
    int segment_index(double s) const;

    // Path value at the start of segment k.
    const Matrix4cd& base(int k) const { return prefix_[k]; }

private:
    std::vector<PathSegment> segments_;
    std::vector<Matrix4cd> prefix_;
};

// Two-photon image of the path value at s.
Matrix10cd cumulative(const Path& path, double s);

// Gauge potential on the qubit block: the H(1,1) compression of the
// two-photon pullback along the path,
//   A(s) = -P G(s)' J2 G(s) P,  J2 the two-photon generator of the leg at s.
// Constant within each leg, because the leg's generator commutes with its
// own flow. Hermitian.
Matrix4cd gauge_potential(const Path& path, double s);

// Same, expressed relative to the rotated qubit frame given by a 4x4
// unitary basis: returns basis' A(s) basis.
Matrix4cd gauge_potential(const Path& path, double s, const Matrix4cd& basis);

struct WilsonOptions {
    double tol = 1e-10;            // Frobenius distance between refinements
    long max_steps = 1L << 22;     // refinement cap
    Matrix4cd basis = Matrix4cd::Identity();
    bool constant_shortcut = true; // integrate exp(i A len) exactly on legs
                                   // where three sampled A values coincide
    double closure_tol = 1e-8;
};

struct Holonomy {
    Matrix4cd matrix;       // path-ordered exp of i A ds over the cycle
    long steps = 0;         // finest subdivision used, 0 when exact
    double residual = 0.0;  // distance between the last two refinements
    Closing classification = Closing::kNotClosing;
};

// Path-ordered integral of the gauge potential over a cycle, midpoint
// product with step doubling, later parameter values multiplying on the
// left. The endpoint must close up to a local or swap-times-local unitary
// (throws NotClosed otherwise); refinement past max_steps without meeting
// tol throws NoConvergence.
Holonomy wilson_loop(const Path& path, const WilsonOptions& opts);
Holonomy wilson_loop(const Path& path, double tol = 1e-10);

// Cycle transport of a two-qubit state by the restricted total
// transformation: rho -> T rho T'. Throws NotClosed on open paths.
TwoQubitState apply_cycle(const TwoQubitState& state, const Path& path);

// Endpoint data of a path: two-photon image, qubit-block restriction, and
// the closing classification of the defining-representation endpoint.
struct TotalTransformation {
    Matrix10cd full;
    Matrix4cd restricted;
    Closing classification = Closing::kNotClosing;
};

TotalTransformation total_transformation(const Path& path);

// Smallest closure of the polarization-mixing triangle: given channel
// mixing angles theta, phi in [0, pi/2] and first-leg length s1, find the
// third-leg length with
//   s1 cos^2(theta) + s3 cos^2(phi) = m pi,
//   s1 sin^2(theta) + s3 sin^2(phi) = n pi,
// m, n nonnegative integers of equal parity, minimizing m + n (search
// backbone s1 + s3 = (m + n) pi). Throws NoSolution when no pair with
// m + n <= max_mn exists.
struct ClosureSolution {
    int m = 0, n = 0;
    double s3_end = 0.0;
};

ClosureSolution solve_closure(double theta, double phi, double s1_end,
                              int max_mn = 16);

// Three-leg cycle through the coset space:
//   leg 1: cos^2(theta) J_HHx + sin^2(theta) J_VVx, length s1
//   leg 2: the given local combo, length s2
//   leg 3: the leg-2 flow at s2 conjugating cos^2(phi) J_HHx
//          + sin^2(phi) J_VVx, length from solve_closure.
// The conjugated third generator is stored densely on its segment.
Path build_triangle_path(double theta, double phi, double s1_end,
                         const GeneratorCombo& kbar_generator, double s2_end);

// Closed-form holonomy of the reference triangle (theta = phi = pi/4,
// s1 = s3 = pi, middle generator (J_ay + J_by)/2) as a function of the
// middle-leg length: entries built from sin(s2/2)/2 and (1 +- cos(s2/2))/2.
Matrix4cd nagp_example_closed_form(double s2_end);

}  // namespace nagp
