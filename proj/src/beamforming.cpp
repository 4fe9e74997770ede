#include "vcsra/beamforming.hpp"

#include <cmath>
#include <cstring>

#include <Eigen/SVD>

#include "vcsra/errors.hpp"

namespace vcsra::beamforming {

std::uint64_t fingerprint(const ComplexMatrix& H) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    auto feed = [&hash](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash ^= bytes[i];
            hash *= 0x100000001B3ULL;
        }
    };
    const auto rows = static_cast<std::int64_t>(H.rows());
    const auto cols = static_cast<std::int64_t>(H.cols());
    feed(&rows, sizeof rows);
    feed(&cols, sizeof cols);
    feed(H.data(), sizeof(cdouble) * static_cast<std::size_t>(H.size()));
    return hash;
}

BeamformerSet cb_beamformers(const ComplexMatrix& H_A) {
    BeamformerSet set;
    set.rows = H_A.adjoint();
    set.kind = BeamformerKind::CB;
    set.source_fingerprint = fingerprint(H_A);
    return set;
}

BeamformerSet zf_beamformers(const ComplexMatrix& H_A) {
    const ComplexMatrix pinv = numerics::pseudo_inverse_left(H_A);
    BeamformerSet set;
    set.kind = BeamformerKind::ZF;
    set.source_fingerprint = fingerprint(H_A);
    set.pinv_row_norms = pinv.rowwise().norm();
    const double root_m = std::sqrt(static_cast<double>(H_A.rows()));
    set.rows = pinv;
    for (Eigen::Index i = 0; i < pinv.rows(); ++i) set.rows.row(i) *= root_m / set.pinv_row_norms(i);
    return set;
}

BeamformerSet make_beamformers(BeamformerKind kind, const ComplexMatrix& H_A) {
    return kind == BeamformerKind::CB ? cb_beamformers(H_A) : zf_beamformers(H_A);
}

BeamformerSet zf_beamformers_truncated(const ComplexMatrix& H, double rcond) {
    if (H.rows() < H.cols()) throw DimensionError("ZF needs M >= number of UEs");
    const Eigen::JacobiSVD<ComplexMatrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    if (sigma.size() == 0 || !(sigma(0) > 0.0)) throw SingularMatrix("channel matrix is zero");
    RealVector inverse = RealVector::Zero(sigma.size());
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) > rcond * sigma(0)) inverse(k) = 1.0 / sigma(k);
    }
    const ComplexMatrix pinv = svd.matrixV() * inverse.asDiagonal() * svd.matrixU().adjoint();

    BeamformerSet set;
    set.kind = BeamformerKind::ZF;
    set.source_fingerprint = fingerprint(H);
    set.pinv_row_norms = pinv.rowwise().norm();
    const double root_m = std::sqrt(static_cast<double>(H.rows()));
    set.rows = pinv;
    for (Eigen::Index i = 0; i < pinv.rows(); ++i) {
        if (set.pinv_row_norms(i) > 0.0) {
            set.rows.row(i) *= root_m / set.pinv_row_norms(i);
        } else {
            set.rows.row(i) = H.col(i).adjoint() * (root_m / H.col(i).norm());
        }
    }
    return set;
}

OrthogonalComplementProjector orthogonal_complement(const ComplexMatrix& H_A) {
    const auto M = H_A.rows();
    ComplexMatrix P = ComplexMatrix::Identity(M, M);
    if (H_A.cols() == 0) return {std::move(P)};
    P.noalias() -= H_A * numerics::pseudo_inverse_left(H_A);
    // Symmetrise away rounding.
    P = 0.5 * (P + P.adjoint()).eval();
    return {std::move(P)};
}

}  // namespace vcsra::beamforming
