#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace nagp {

using Matrix4cd = Eigen::Matrix4cd;
using Matrix2cd = Eigen::Matrix2cd;
using Matrix10cd = Eigen::Matrix<std::complex<double>, 10, 10>;

// Mode order used everywhere: channel a first, horizontal before vertical.
enum Mode : int { kModeAH = 0, kModeAV = 1, kModeBH = 2, kModeBV = 3 };

// Hermitian u(4) basis. The first eight act within a single channel (local),
// the remaining eight couple the channels. Serialized tokens are
// "J_ax" ... "J_VVy"; see label_token.
enum class GeneratorLabel : int {
    kJax = 0, kJay, kJaz, kJa0,
    kJbx, kJby, kJbz, kJb0,
    kJHHx, kJHHy, kJHVx, kJHVy,
    kJVHx, kJVHy, kJVVx, kJVVy,
};

inline constexpr int kGeneratorCount = 16;
inline constexpr int kLocalGeneratorCount = 8;

const std::string& label_token(GeneratorLabel label);
GeneratorLabel token_to_label(const std::string& token);  // throws UnknownGenerator
bool label_is_local(GeneratorLabel label);

// Occupation numbers per mode. This library only populates the two-photon
// sector, so total() is 2 for every state handed out by basis_h2().
struct FockState {
    std::array<int, 4> n{};
    int total() const { return n[0] + n[1] + n[2] + n[3]; }
    bool operator==(const FockState&) const = default;
};

// Canonical two-photon basis: the one-photon-per-channel states
// |HH>, |HV>, |VH>, |VV> first (they carry the qubit pair), then the six
// remaining occupations in ascending lexicographic order.
const std::vector<FockState>& basis_h2();

// Real linear combination of the sixteen labelled generators.
class GeneratorCombo {
public:
    GeneratorCombo() = default;
    GeneratorCombo(std::initializer_list<std::pair<GeneratorLabel, double>> terms);

    double coefficient(GeneratorLabel label) const;
    void set(GeneratorLabel label, double value);
    const std::array<double, kGeneratorCount>& coefficients() const { return coeff_; }

    bool is_zero() const;
    bool is_local() const;  // no weight on channel-coupling labels

    Matrix4cd fundamental() const;

    bool operator==(const GeneratorCombo&) const = default;

private:
    std::array<double, kGeneratorCount> coeff_{};
};

// Single-photon (defining) representation of a labelled generator.
Matrix4cd generator_fundamental(GeneratorLabel label);

// Two-photon representation on the canonical 10-dimensional basis.
Matrix10cd generator_two_photon(GeneratorLabel label);

// Two-photon representation of an arbitrary one-photon Hermitian matrix,
// i.e. of the mode bilinear with that coefficient matrix.
Matrix10cd rep_two_photon(const Matrix4cd& m);

// Multiplicative lift of a mode unitary to the two-photon sector, via
// permanents of 2x2 submatrices. lift(g h) = lift(g) lift(h).
// Throws NonUnitaryInput when ||g'g - 1||_F exceeds tol.
Matrix10cd lift(const Matrix4cd& g, double tol = 1e-8);

// Restriction of a two-photon operator to the qubit block H(1,1).
Matrix4cd project_h11(const Matrix10cd& m);

// The channel-exchange permutation aH<->bH, aV<->bV.
Matrix4cd swap_channels();

// Density matrix of the two polarization qubits, validated on construction:
// Hermitian, unit trace, positive semidefinite (eigenvalues >= -1e-12).
class TwoQubitState {
public:
    explicit TwoQubitState(const Matrix4cd& rho);

    static TwoQubitState phi_plus();   // (|HH> + |VV>)/sqrt(2)
    static TwoQubitState phi_minus();  // (|HH> - |VV>)/sqrt(2)
    static TwoQubitState psi_plus();   // (|HV> + |VH>)/sqrt(2)
    static TwoQubitState psi_minus();  // (|HV> - |VH>)/sqrt(2)

    const Matrix4cd& rho() const { return rho_; }

private:
    Matrix4cd rho_;
};

}  // namespace nagp
