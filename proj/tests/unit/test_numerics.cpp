#include <doctest.h>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "vcsra/errors.hpp"
#include "vcsra/numerics.hpp"

using namespace vcsra;
using namespace vcsra::numerics;

TEST_CASE("hadamard small orders") {
    CHECK(hadamard(1).matrix == Eigen::MatrixXi::Ones(1, 1));
    Eigen::MatrixXi h2(2, 2);
    h2 << 1, 1, 1, -1;
    CHECK(hadamard(2).matrix == h2);
}

TEST_CASE("hadamard orthogonality is exact") {
    for (int n = 1; n <= 256; n *= 2) {
        const auto S = hadamard(n).matrix;
        CHECK((S.transpose() * S) == n * Eigen::MatrixXi::Identity(n, n));
        CHECK(S.cwiseAbs() == Eigen::MatrixXi::Ones(n, n));
    }
}

TEST_CASE("hadamard rejects other orders") {
    CHECK_THROWS_AS(hadamard(6), NonPowerOfTwo);
    CHECK_THROWS_AS(hadamard(0), NonPowerOfTwo);
    CHECK_THROWS_AS(hadamard(-4), NonPowerOfTwo);
}

TEST_CASE("upper incomplete gamma") {
    CHECK(upper_incomplete_gamma_int(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(upper_incomplete_gamma_int(1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(upper_incomplete_gamma_int(3, 1.0) ==
          doctest::Approx(oracle::upper_gamma_quadrature(3, 1.0)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma_int(3, 1.0) == doctest::Approx(5.0 / std::exp(1.0)).epsilon(1e-14));

    SUBCASE("Gamma(s, 0) = (s-1)!") {
        double fact = 1.0;
        for (int s = 1; s <= 15; ++s) {
            CHECK(upper_incomplete_gamma_int(s, 0.0) == doctest::Approx(fact).epsilon(1e-14));
            fact *= s;
        }
    }
    SUBCASE("agrees with quadrature on s <= 12, x <= 50") {
        for (int s = 1; s <= 12; ++s) {
            for (double x : {0.01, 0.3, 1.0, 2.5, 7.0, 13.0, 25.0, 50.0}) {
                const double ref = oracle::upper_gamma_quadrature(s, x);
                const double got = upper_incomplete_gamma_int(s, x);
                INFO("s=" << s << " x=" << x);
                CHECK(std::abs(got - ref) / ref < 1e-10);
            }
        }
    }
    SUBCASE("large arguments underflow to zero, not NaN") {
        CHECK(upper_incomplete_gamma_int(5, 1e4) == 0.0);
        CHECK(upper_incomplete_gamma_int(5, INFINITY) == 0.0);
    }
}

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(4.0) == doctest::Approx(2.51188643150958).epsilon(1e-13));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(linear_to_db(db_to_linear(-7.3)) == doctest::Approx(-7.3).epsilon(1e-13));
    CHECK_THROWS_AS(linear_to_db(0.0), DomainError);
    CHECK_THROWS_AS(linear_to_db(-1.0), DomainError);
}

TEST_CASE("complex Gaussian moments") {
    RngStream rng(2024, 7);
    const int n = 100000;
    cdouble mean = 0.0;
    double power = 0.0;
    std::vector<double> re(n);
    for (int i = 0; i < n; ++i) {
        const cdouble z = sample_complex_gaussian(rng, 1)(0);
        mean += z;
        power += std::norm(z);
        re[i] = z.real();
    }
    mean /= n;
    power /= n;
    CHECK(std::abs(mean) < 0.02);
    CHECK(power > 0.98);
    CHECK(power < 1.02);
    // KS against N(0, 1/2) at significance 0.01.
    const double d = oracle::ks_distance(re, [](double x) { return oracle::phi(x * std::sqrt(2.0)); });
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("streams are deterministic and addressable") {
    RngStream a(99, 3), b(99, 3), c(99, 4);
    const ComplexVector x = sample_complex_gaussian(a, 64);
    const ComplexVector y = sample_complex_gaussian(b, 64);
    CHECK(x == y);
    CHECK(x != sample_complex_gaussian(c, 64));

    RngStream fresh(99, 3);
    const RngStream child_before = fresh.split(11);
    fresh.next_u64();
    fresh.normal();
    const RngStream child_after = fresh.split(11);
    RngStream p = child_before, q = child_after;
    for (int i = 0; i < 16; ++i) CHECK(p.next_u64() == q.next_u64());
}

TEST_CASE("uniform index stays in range") {
    RngStream rng(5, 5);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("orthonormal real basis") {
    RngStream rng(1, 1);
    const RealMatrix A4 = orthonormal_real_basis(4, 4, rng);
    CHECK((A4.transpose() * A4 - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    const RealMatrix A = orthonormal_real_basis(100, 50, rng);
    CHECK((A * A.transpose()).trace() == doctest::Approx(50.0).epsilon(1e-10));
    CHECK((A.transpose() * A - RealMatrix::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
    const RealMatrix a = orthonormal_real_basis(2, 1, rng);
    CHECK(a.col(0).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(orthonormal_real_basis(3, 4, rng), DimensionError);
}

TEST_CASE("left pseudo-inverse") {
    const ComplexMatrix I = ComplexMatrix::Identity(6, 6).leftCols(3);
    CHECK((pseudo_inverse_left(I) - ComplexMatrix::Identity(6, 6).topRows(3)).norm() < 1e-14);

    RngStream rng(8, 8);
    const ComplexMatrix H = sample_complex_gaussian(rng, 16, 4);
    const ComplexMatrix P = pseudo_inverse_left(H);
    CHECK((P * H - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);

    ComplexMatrix D(16, 2);
    D.col(0) = H.col(0);
    D.col(1) = H.col(0);
    CHECK_THROWS_AS(pseudo_inverse_left(D), SingularMatrix);
    CHECK_THROWS_AS(pseudo_inverse_left(ComplexMatrix(3, 4)), DimensionError);
}
