#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "nagp/decompose.hpp"
#include "nagp/errors.hpp"
#include "nagp/lie.hpp"
#include "test_util.hpp"

using namespace nagp;
using testutil::haar_u4;
using testutil::random_hermitian;
using testutil::random_local;
using testutil::random_local_combo;
using testutil::uniform;

namespace {
const std::complex<double> kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("cosine-sine factors recompose and sit in their ranges") {
    for (int t = 0; t < 300; ++t) {
        Matrix4cd g = haar_u4();
        CSDFactors f = cs_decompose(g);
        CHECK((f.recompose() - g).norm() <= 1e-12);
        CHECK(f.d(0) >= 0.0);
        CHECK(f.d(0) <= f.d(1) + 1e-15);
        CHECK(f.d(1) <= kPi / 2.0 + 1e-15);
        CHECK((f.u1.adjoint() * f.u1 - Matrix2cd::Identity()).norm() <= 1e-13);
        CHECK((f.u2.adjoint() * f.u2 - Matrix2cd::Identity()).norm() <= 1e-13);
        CHECK((f.v1.adjoint() * f.v1 - Matrix2cd::Identity()).norm() <= 1e-13);
        CHECK((f.v2.adjoint() * f.v2 - Matrix2cd::Identity()).norm() <= 1e-13);
    }
}

TEST_CASE("cosine-sine angles recover the middle factor of a known product") {
    double xh = 0.8, xv = 2.1;
    CSDFactors f = cs_decompose(random_local() * p0(xh, xv) * random_local());
    CHECK(2.0 * f.d(0) == doctest::Approx(xh).epsilon(1e-10));
    CHECK(2.0 * f.d(1) == doctest::Approx(xv).epsilon(1e-10));
}

TEST_CASE("cosine-sine decomposition handles the extreme angles") {
    // Block-diagonal input: both angles vanish.
    Matrix4cd k = random_local();
    CSDFactors local = cs_decompose(k);
    CHECK(local.d.norm() <= 1e-12);
    CHECK((local.recompose() - k).norm() <= 1e-12);

    // Full transfer: both angles reach pi/2.
    Matrix4cd sw = swap_channels();
    CSDFactors full = cs_decompose(sw);
    CHECK(full.d(0) == doctest::Approx(kPi / 2.0));
    CHECK(full.d(1) == doctest::Approx(kPi / 2.0));
    CHECK((full.recompose() - sw).norm() <= 1e-12);
}

TEST_CASE("cs_decompose rejects non-unitary input") {
    CHECK_THROWS_AS(cs_decompose(Matrix4cd(2.0 * Matrix4cd::Identity())),
                    NonUnitaryInput);
}

TEST_CASE("cartan factorization reconstructs with the channel-b gauge fixed") {
    for (int t = 0; t < 500; ++t) {
        Matrix4cd g = haar_u4();
        CartanFactors f = cartan_kpk(g);
        CHECK((f.recompose() - g).norm() <= 1e-10);
        // The pushable parameters are zeroed literally, not to tolerance.
        CHECK(f.kbar.gamma_b == 0.0);
        CHECK(f.kbar.delta_b == 0.0);
        CHECK(f.x_h >= 0.0);
        CHECK(f.x_h <= f.x_v + 1e-15);
        CHECK(f.x_v <= kPi + 1e-15);
        CHECK((euler_to_unitary(f.kbar).topRightCorner<2, 2>()).norm() <=
              1e-14);
    }
}

TEST_CASE("cartan factorization survives tie-angle left factors") {
    // A sigma-x channel block once defeated the Euler extraction; keep it
    // and its quarter-turn partner as regressions.
    Matrix2cd sx;
    sx << 0.0, 1.0, 1.0, 0.0;
    Matrix2cd miy;
    miy << 0.0, -1.0, 1.0, 0.0;
    Matrix4cd left = Matrix4cd::Zero();
    left.topLeftCorner<2, 2>() = sx;
    left.bottomRightCorner<2, 2>() = miy;

    Matrix4cd g = left * p0(0.4, 1.9) * random_local();
    CartanFactors f = cartan_kpk(g);
    CHECK((f.recompose() - g).norm() <= 1e-11);
    CHECK(f.kbar.gamma_b == 0.0);
    CHECK(f.kbar.delta_b == 0.0);

    // Purely local input decomposes with a trivial middle factor.
    CartanFactors lf = cartan_kpk(left);
    CHECK(lf.x_h == doctest::Approx(0.0));
    CHECK(lf.x_v == doctest::Approx(0.0));
    CHECK((lf.recompose() - left).norm() <= 1e-11);
}

TEST_CASE("degenerate_angles flags equal cosine-sine angles") {
    Matrix4cd g = random_local() * p0(1.3, 1.3) * random_local();
    CHECK(cartan_kpk(g).degenerate_angles);
    Matrix4cd h = random_local() * p0(0.4, 2.0) * random_local();
    CHECK(!cartan_kpk(h).degenerate_angles);
}

TEST_CASE("locality test and endpoint classification") {
    CHECK(is_local(random_local()));
    CHECK(!is_local(p0(1.0, 1.0)));

    CHECK(classify_closing(random_local()) == Closing::kStrictlyLocal);
    CHECK(classify_closing(swap_channels() * random_local()) ==
          Closing::kSwapTimesLocal);
    CHECK(classify_closing(p0(kPi / 2.0, kPi / 2.0)) == Closing::kNotClosing);
    // The half-turn pair is the swap up to phase, so it closes.
    CHECK(classify_closing(p0(kPi, kPi)) == Closing::kSwapTimesLocal);

    CHECK(std::string(to_string(Closing::kStrictlyLocal)) == "StrictlyLocal");
    CHECK(std::string(to_string(Closing::kSwapTimesLocal)) ==
          "SwapTimesLocal");
    CHECK(std::string(to_string(Closing::kNotClosing)) == "NotClosing");
}

TEST_CASE("compiled one-parameter subgroup: diagonal generator") {
    CompiledSubgroup c =
        compile_one_param(generator_fundamental(GeneratorLabel::kJaz));
    CHECK(c.c(0) == doctest::Approx(0.5));
    CHECK(c.c(1) == doctest::Approx(0.0));
    CHECK(c.c(2) == doctest::Approx(0.0));
    CHECK(c.c(3) == doctest::Approx(-0.5));
    // Rows of v are basis vectors; the extreme eigenvalues pin rows 0 and 3.
    for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) {
            double m = std::abs(c.v(r, col));
            bool zero_or_one = m <= 1e-12 || std::abs(m - 1.0) <= 1e-12;
            CHECK(zero_or_one);
        }
    }
    CHECK(std::abs(c.v(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(c.v(3, 1)) == doctest::Approx(1.0));

    Matrix4cd quarter = c.element(kPi);
    Eigen::Vector4cd diag;
    diag << std::exp(kI * kPi * 0.5), std::exp(-kI * kPi * 0.5), 1.0, 1.0;
    CHECK((quarter - Matrix4cd(diag.asDiagonal())).norm() <= 1e-13);
}

TEST_CASE("compiled subgroup reproduces the exponential at many lengths") {
    for (int t = 0; t < 50; ++t) {
        GeneratorCombo combo;
        for (int i = 0; i < kGeneratorCount; ++i) {
            combo.set(static_cast<GeneratorLabel>(i), uniform(-1.0, 1.0));
        }
        CompiledSubgroup c = compile_one_param(combo);
        for (int k = 0; k < 20; ++k) {
            double s = uniform(-8.0, 8.0);
            Eigen::MatrixXcd direct = expm_hermitian(combo.fundamental(), s);
            CHECK((Eigen::MatrixXcd(c.element(s)) - direct).norm() <= 1e-10);
        }
        CHECK(std::is_sorted(c.c.data(), c.c.data() + 4,
                             std::greater<double>()));
    }
}

TEST_CASE("compiled mesh: adjacent rotations and phases rebuild v") {
    for (int t = 0; t < 20; ++t) {
        CompiledSubgroup c = compile_one_param(random_hermitian());
        CHECK((c.mesh() - c.v).norm() <= 1e-10);
        CHECK(c.rotations.size() <= 6);
        for (const TwoModeRotation& r : c.rotations) {
            CHECK(r.lo >= 0);
            CHECK(r.lo <= 2);
            CHECK((r.block.adjoint() * r.block - Matrix2cd::Identity())
                      .norm() <= 1e-13);
        }
        for (int k = 0; k < 4; ++k) {
            CHECK(std::abs(std::abs(c.phases(k)) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("compile_one_param rejects a non-Hermitian generator") {
    Matrix4cd m = Matrix4cd::Zero();
    m(0, 3) = 1.0;
    CHECK_THROWS_AS(compile_one_param(m), NonHermitianInput);
}
