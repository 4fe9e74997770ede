#pragma once

#include <cstdint>

#include "vcsra/numerics.hpp"

namespace vcsra::beamforming {

enum class BeamformerKind { CB, ZF };

/// Beamformer rows b_i^T for the assigned UEs, shared between the downlink
/// virtual carriers and the uplink receive filters.
///
/// CB rows are the raw conjugate channels h_i^H (not normalised). ZF rows are
/// sqrt(M) a_i^T / ||a_i|| with a_i^T the i-th row of the left pseudo-inverse;
/// `pinv_row_norms` keeps ||a_i||. For CB it is
/// empty.
struct BeamformerSet {
    ComplexMatrix rows;  ///< N_A x M
    BeamformerKind kind = BeamformerKind::CB;
    std::uint64_t source_fingerprint = 0;
    RealVector pinv_row_norms;

    int size() const noexcept { return static_cast<int>(rows.rows()); }
    int antennas() const noexcept { return static_cast<int>(rows.cols()); }
};

/// FNV-1a over the raw entries of H.
std::uint64_t fingerprint(const ComplexMatrix& H);

BeamformerSet cb_beamformers(const ComplexMatrix& H_A);
/// Throws DimensionError (M < N_A) or SingularMatrix.
BeamformerSet zf_beamformers(const ComplexMatrix& H_A);
BeamformerSet make_beamformers(BeamformerKind kind, const ComplexMatrix& H_A);

/// ZF rows from the truncated-SVD pseudo-inverse: singular values below
/// rcond * sigma_max are dropped, so rank-deficient groups still get rows of
/// norm sqrt(M). Nulling is then only partial.
BeamformerSet zf_beamformers_truncated(const ComplexMatrix& H, double rcond = 1e-6);

/// P = I - H (H^H H)^{-1} H^H. An empty H gives the identity.
struct OrthogonalComplementProjector {
    ComplexMatrix matrix;  ///< M x M

    ComplexMatrix apply(const ComplexMatrix& X) const { return matrix * X; }
};

OrthogonalComplementProjector orthogonal_complement(const ComplexMatrix& H_A);

}  // namespace vcsra::beamforming
