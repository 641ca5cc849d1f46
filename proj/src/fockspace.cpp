#include "nagp/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nagp/errors.hpp"

namespace nagp {
namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};

const std::array<std::string, kGeneratorCount>& tokens() {
    static const std::array<std::string, kGeneratorCount> t = {
        "J_ax", "J_ay", "J_az", "J_a0", "J_bx", "J_by", "J_bz", "J_b0",
        "J_HHx", "J_HHy", "J_HVx", "J_HVy", "J_VHx", "J_VHy", "J_VVx", "J_VVy",
    };
    return t;
}

// Mode pair each label acts on. Local labels span one channel; the
// channel-coupling labels pair one a-mode with one b-mode.
std::pair<int, int> label_modes(GeneratorLabel label) {
    switch (label) {
        case GeneratorLabel::kJax:
        case GeneratorLabel::kJay:
        case GeneratorLabel::kJaz:
        case GeneratorLabel::kJa0:
            return {kModeAH, kModeAV};
        case GeneratorLabel::kJbx:
        case GeneratorLabel::kJby:
        case GeneratorLabel::kJbz:
        case GeneratorLabel::kJb0:
            return {kModeBH, kModeBV};
        case GeneratorLabel::kJHHx:
        case GeneratorLabel::kJHHy:
            return {kModeAH, kModeBH};
        case GeneratorLabel::kJHVx:
        case GeneratorLabel::kJHVy:
            return {kModeAH, kModeBV};
        case GeneratorLabel::kJVHx:
        case GeneratorLabel::kJVHy:
            return {kModeAV, kModeBH};
        case GeneratorLabel::kJVVx:
        case GeneratorLabel::kJVVy:
            return {kModeAV, kModeBV};
    }
    throw OutOfRange("invalid generator label");
}

enum class PauliKind { kX, kY, kZ, k0 };

PauliKind label_kind(GeneratorLabel label) {
    switch (label) {
        case GeneratorLabel::kJax:
        case GeneratorLabel::kJbx:
            return PauliKind::kX;
        case GeneratorLabel::kJay:
        case GeneratorLabel::kJby:
            return PauliKind::kY;
        case GeneratorLabel::kJaz:
        case GeneratorLabel::kJbz:
            return PauliKind::kZ;
        case GeneratorLabel::kJa0:
        case GeneratorLabel::kJb0:
            return PauliKind::k0;
        default:
            break;
    }
    // Channel couplers only come in x and y flavours.
    int idx = static_cast<int>(label) - kLocalGeneratorCount;
    return (idx % 2 == 0) ? PauliKind::kX : PauliKind::kY;
}

int factorial_occupations(const FockState& s) {
    int f = 1;
    for (int k : s.n) {
        for (int j = 2; j <= k; ++j) f *= j;
    }
    return f;
}

// Modes of a two-photon state listed with multiplicity, ascending.
std::array<int, 2> occupied_pair(const FockState& s) {
    std::array<int, 2> modes{};
    int w = 0;
    for (int mode = 0; mode < 4; ++mode) {
        for (int c = 0; c < s.n[mode]; ++c) modes[w++] = mode;
    }
    return modes;
}

}  // namespace

const std::string& label_token(GeneratorLabel label) {
    return tokens()[static_cast<int>(label)];
}

GeneratorLabel token_to_label(const std::string& token) {
    const auto& t = tokens();
    auto it = std::find(t.begin(), t.end(), token);
    if (it == t.end()) {
        throw UnknownGenerator("unknown generator token \"" + token + "\"");
    }
    return static_cast<GeneratorLabel>(it - t.begin());
}

bool label_is_local(GeneratorLabel label) {
    return static_cast<int>(label) < kLocalGeneratorCount;
}

const std::vector<FockState>& basis_h2() {
    static const std::vector<FockState> basis = [] {
        std::vector<FockState> qubit = {
            FockState{{1, 0, 1, 0}},  // |HH>
            FockState{{1, 0, 0, 1}},  // |HV>
            FockState{{0, 1, 1, 0}},  // |VH>
            FockState{{0, 1, 0, 1}},  // |VV>
        };
        std::vector<FockState> rest;
        for (int n0 = 0; n0 <= 2; ++n0)
            for (int n1 = 0; n1 + n0 <= 2; ++n1)
                for (int n2 = 0; n2 + n1 + n0 <= 2; ++n2) {
                    FockState s{{n0, n1, n2, 2 - n0 - n1 - n2}};
                    if (std::find(qubit.begin(), qubit.end(), s) == qubit.end())
                        rest.push_back(s);
                }
        std::sort(rest.begin(), rest.end(),
                  [](const FockState& a, const FockState& b) { return a.n < b.n; });
        qubit.insert(qubit.end(), rest.begin(), rest.end());
        return qubit;
    }();
    return basis;
}

GeneratorCombo::GeneratorCombo(
    std::initializer_list<std::pair<GeneratorLabel, double>> terms) {
    for (const auto& [label, value] : terms) coeff_[static_cast<int>(label)] = value;
}

double GeneratorCombo::coefficient(GeneratorLabel label) const {
    return coeff_[static_cast<int>(label)];
}

void GeneratorCombo::set(GeneratorLabel label, double value) {
    coeff_[static_cast<int>(label)] = value;
}

bool GeneratorCombo::is_zero() const {
    return std::all_of(coeff_.begin(), coeff_.end(),
                       [](double c) { return c == 0.0; });
}

bool GeneratorCombo::is_local() const {
    return std::all_of(coeff_.begin() + kLocalGeneratorCount, coeff_.end(),
                       [](double c) { return c == 0.0; });
}

Matrix4cd GeneratorCombo::fundamental() const {
    Matrix4cd m = Matrix4cd::Zero();
    for (int i = 0; i < kGeneratorCount; ++i) {
        if (coeff_[i] != 0.0)
            m += coeff_[i] * generator_fundamental(static_cast<GeneratorLabel>(i));
    }
    return m;
}

Matrix4cd generator_fundamental(GeneratorLabel label) {
    auto [p, q] = label_modes(label);
    Matrix4cd m = Matrix4cd::Zero();
    switch (label_kind(label)) {
        case PauliKind::kX:
            m(p, q) = 0.5;
            m(q, p) = 0.5;
            break;
        case PauliKind::kY:
            m(p, q) = -0.5 * kI;
            m(q, p) = 0.5 * kI;
            break;
        case PauliKind::kZ:
            m(p, p) = 0.5;
            m(q, q) = -0.5;
            break;
        case PauliKind::k0:
            m(p, p) = 0.5;
            m(q, q) = 0.5;
            break;
    }
    return m;
}

Matrix10cd rep_two_photon(const Matrix4cd& m) {
    const auto& basis = basis_h2();
    std::map<std::array<int, 4>, int> index;
    for (int k = 0; k < 10; ++k) index[basis[k].n] = k;

    // Matrix elements of the mode bilinear sum_ij m_ij c_i' c_j:
    // c_i' c_j |n> = sqrt(n_j (n_i + 1 - [i = j])) |n - e_j + e_i>.
    Matrix10cd out = Matrix10cd::Zero();
    for (int col = 0; col < 10; ++col) {
        const FockState& n = basis[col];
        for (int j = 0; j < 4; ++j) {
            if (n.n[j] == 0) continue;
            for (int i = 0; i < 4; ++i) {
                if (m(i, j) == 0.0) continue;
                FockState target = n;
                --target.n[j];
                ++target.n[i];
                double amp = std::sqrt(double(n.n[j]) *
                                       (n.n[i] + (i == j ? 0 : 1)));
                out(index.at(target.n), col) += m(i, j) * amp;
            }
        }
    }
    return out;
}

Matrix10cd generator_two_photon(GeneratorLabel label) {
    return rep_two_photon(generator_fundamental(label));
}

Matrix10cd lift(const Matrix4cd& g, double tol) {
    double defect = (g.adjoint() * g - Matrix4cd::Identity()).norm();
    if (!(defect <= tol)) {
        throw NonUnitaryInput("matrix is not unitary: ||g'g - 1|| = " +
                              std::to_string(defect));
    }
    const auto& basis = basis_h2();
    Matrix10cd out;
    for (int r = 0; r < 10; ++r) {
        auto [i1, i2] = occupied_pair(basis[r]);
        double nr = std::sqrt(double(factorial_occupations(basis[r])));
        for (int c = 0; c < 10; ++c) {
            auto [j1, j2] = occupied_pair(basis[c]);
            double nc = std::sqrt(double(factorial_occupations(basis[c])));
            // Permanent of the 2x2 submatrix with rows (i1, i2), cols (j1, j2).
            std::complex<double> per =
                g(i1, j1) * g(i2, j2) + g(i1, j2) * g(i2, j1);
            out(r, c) = per / (nr * nc);
        }
    }
    return out;
}

Matrix4cd project_h11(const Matrix10cd& m) {
    return m.topLeftCorner<4, 4>();
}

Matrix4cd swap_channels() {
    Matrix4cd p = Matrix4cd::Zero();
    p(kModeBH, kModeAH) = 1.0;
    p(kModeAH, kModeBH) = 1.0;
    p(kModeBV, kModeAV) = 1.0;
    p(kModeAV, kModeBV) = 1.0;
    return p;
}

TwoQubitState::TwoQubitState(const Matrix4cd& rho) : rho_(rho) {
    if ((rho - rho.adjoint()).norm() > 1e-10) {
        throw NonHermitianInput("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - std::complex<double>(1.0)) > 1e-10) {
        throw OutOfRange("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        throw OutOfRange("density matrix has a negative eigenvalue");
    }
}

namespace {

TwoQubitState bell(int i, int j, double sign) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(i) = 1.0 / std::sqrt(2.0);
    v(j) = sign / std::sqrt(2.0);
    return TwoQubitState(v * v.adjoint());
}

}  // namespace

// Qubit-block basis order |HH>, |HV>, |VH>, |VV>.
TwoQubitState TwoQubitState::phi_plus() { return bell(0, 3, 1.0); }
TwoQubitState TwoQubitState::phi_minus() { return bell(0, 3, -1.0); }
TwoQubitState TwoQubitState::psi_plus() { return bell(1, 2, 1.0); }
TwoQubitState TwoQubitState::psi_minus() { return bell(1, 2, -1.0); }

}  // namespace nagp
