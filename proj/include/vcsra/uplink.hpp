#pragma once

#include <vector>

#include "vcsra/beamforming.hpp"
#include "vcsra/numerics.hpp"

namespace vcsra::uplink {

enum class RaReceiverMode {
    Projected,  ///< RA beamformers on P h_R, P the complement of span(H_A)
    Direct,     ///< RA beamformers on the raw RA channels
};

/// Per-UE SINR terms after normalising the post-beamforming noise to 1.
/// "intra" is interference from the UE's own group, "cross" from the other
/// group (RA UEs for an assigned UE, assigned UEs for an RA UE).
struct SinrBreakdown {
    double signal = 0.0;
    double intra_interference = 0.0;
    double cross_interference = 0.0;
    double noise = 1.0;

    double sinr() const { return signal / (noise + intra_interference + cross_interference); }
};

/// SINR of every UE served by `B` (rows matched to the columns of `own`),
/// with `other` as the foreign group. For CB rows this is the conjugate
/// receiver with the 1/M array normalisation; for ZF rows (norm sqrt(M)) it
/// reduces to rho ||a_i||^{-2} / (1 + sum rho |a_i^T x / ||a_i|| |^2).
std::vector<SinrBreakdown> group_sinr(const beamforming::BeamformerSet& B,
                                      const ComplexMatrix& own, const ComplexMatrix& other,
                                      double rho_u);

std::vector<SinrBreakdown> assigned_sinr_cb(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                             double rho_u);
std::vector<SinrBreakdown> assigned_sinr_zf(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                             double rho_u);

/// RA-side SINRs with perfect RA CSI. In projected mode the cross term is the
/// (numerically zero) leakage of P H_A. Throws SingularMatrix for ZF when the
/// effective RA channels are rank deficient.
std::vector<SinrBreakdown> ra_sinr(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                   double rho_u, beamforming::BeamformerKind kind,
                                   RaReceiverMode mode);

/// log2(1 + sinr). Throws DomainError for negative input.
double instantaneous_rate(double sinr);

double mean_rate(const std::vector<SinrBreakdown>& sinrs);
double sum_rate(const std::vector<SinrBreakdown>& sinrs);

}  // namespace vcsra::uplink
