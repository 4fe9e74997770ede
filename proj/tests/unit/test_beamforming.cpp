#include <doctest.h>

#include <cmath>

#include "vcsra/beamforming.hpp"
#include "vcsra/channel.hpp"
#include "vcsra/errors.hpp"

using namespace vcsra;
using namespace vcsra::beamforming;

namespace {

ComplexMatrix random_channels(int M, int n, std::uint64_t seed) {
    numerics::RngStream rng(seed, 0);
    return numerics::sample_complex_gaussian(rng, M, n);
}

}  // namespace

TEST_CASE("CB rows are conjugate channels") {
    const ComplexMatrix e1 = ComplexMatrix::Identity(5, 5).leftCols(1);
    const auto B1 = cb_beamformers(e1);
    CHECK(B1.rows == e1.adjoint());
    CHECK((B1.rows * e1)(0, 0) == cdouble(1.0, 0.0));

    const ComplexMatrix H = random_channels(32, 4, 1);
    const auto B = cb_beamformers(H);
    CHECK(B.kind == BeamformerKind::CB);
    CHECK(B.rows == H.adjoint());
    CHECK(B.pinv_row_norms.size() == 0);
    const ComplexMatrix G = B.rows * H;
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(G(i, i).imag()) < 1e-12);
        CHECK(G(i, i).real() >= 0.0);
    }
    CHECK(std::abs(G(0, 1)) > 1e-3);
    CHECK(B.source_fingerprint == fingerprint(H));
}

TEST_CASE("ZF rows null the other assigned UEs") {
    const ComplexMatrix H = random_channels(64, 8, 2);
    const auto B = zf_beamformers(H);
    CHECK(B.kind == BeamformerKind::ZF);
    const ComplexMatrix G = B.rows * H;
    double off = 0.0;
    for (int i = 0; i < 8; ++i) {
        CHECK(B.rows.row(i).norm() == doctest::Approx(8.0).epsilon(1e-10));
        for (int j = 0; j < 8; ++j) {
            if (i != j) off = std::max(off, std::abs(G(i, j)));
        }
    }
    CHECK(off / 8.0 < 1e-8);

    const ComplexMatrix pinv = numerics::pseudo_inverse_left(H);
    for (int i = 0; i < 8; ++i) {
        CHECK(B.pinv_row_norms(i) == doctest::Approx(pinv.row(i).norm()).epsilon(1e-12));
    }
}

TEST_CASE("ZF on orthogonal channels is a scaled CB") {
    ComplexMatrix H = ComplexMatrix::Zero(6, 2);
    H(0, 0) = cdouble(2.0, 1.0);
    H(3, 1) = cdouble(0.0, -3.0);
    const auto cb = cb_beamformers(H);
    const auto zf = zf_beamformers(H);
    for (int i = 0; i < 2; ++i) {
        const cdouble ratio = zf.rows(i, i == 0 ? 0 : 3) / cb.rows(i, i == 0 ? 0 : 3);
        CHECK(std::abs(ratio.imag()) < 1e-14);
        CHECK((zf.rows.row(i) - ratio * cb.rows.row(i)).norm() < 1e-14);
    }
}

TEST_CASE("ZF rejects degenerate inputs") {
    CHECK_THROWS_AS(zf_beamformers(random_channels(4, 6, 3)), DimensionError);
    ComplexMatrix H = random_channels(10, 3, 4);
    H.col(2) = 2.0 * H.col(0);
    CHECK_THROWS_AS(zf_beamformers(H), SingularMatrix);
}

TEST_CASE("orthogonal complement projector") {
    SUBCASE("empty H_A gives the identity") {
        const auto P = orthogonal_complement(ComplexMatrix(7, 0));
        CHECK(P.matrix == ComplexMatrix::Identity(7, 7));
    }
    SUBCASE("identity columns") {
        const auto P = orthogonal_complement(ComplexMatrix::Identity(6, 6).leftCols(2));
        ComplexMatrix expected = ComplexMatrix::Zero(6, 6);
        for (int m = 2; m < 6; ++m) expected(m, m) = 1.0;
        CHECK((P.matrix - expected).norm() < 1e-14);
    }
    SUBCASE("random draw invariants") {
        const ComplexMatrix H = random_channels(40, 8, 5);
        const auto P = orthogonal_complement(H);
        const ComplexMatrix& Pm = P.matrix;
        CHECK((Pm - Pm.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((Pm * Pm - Pm).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(Pm.trace() - cdouble(32.0, 0.0)) < 1e-6);
        for (int i = 0; i < 8; ++i) CHECK(P.apply(H.col(i)).norm() < 1e-8 * H.col(i).norm());

        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(Pm);
        int zeros = 0;
        for (int k = 0; k < 40; ++k) {
            const double ev = eig.eigenvalues()(k);
            const bool zero = std::abs(ev) < 1e-6;
            CHECK((zero || std::abs(ev - 1.0) < 1e-6));
            zeros += zero;
        }
        CHECK(zeros == 8);
    }
}

TEST_CASE("ZF inverse-norm moment under the simplified model") {
    const channel::SimplifiedChannelModel model({100, 50, 21});
    numerics::RngStream rng(21, 1);
    const int n = 5000;
    double mean = 0.0;
    for (int t = 0; t < n; ++t) {
        const auto B = zf_beamformers(model.draw(8, rng));
        mean += 1.0 / (B.pinv_row_norms(0) * B.pinv_row_norms(0));
    }
    mean /= n;
    CHECK(std::abs(mean - 86.0) / 86.0 < 0.02);
}
