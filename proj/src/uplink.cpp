#include "vcsra/uplink.hpp"

#include <cmath>

#include "vcsra/errors.hpp"

namespace vcsra::uplink {

std::vector<SinrBreakdown> group_sinr(const beamforming::BeamformerSet& B,
                                      const ComplexMatrix& own, const ComplexMatrix& other,
                                      double rho_u) {
    if (own.cols() != B.size() || own.rows() != B.antennas()) {
        throw DimensionError("beamformers do not match the served channels");
    }
    if (other.cols() > 0 && other.rows() != B.antennas()) {
        throw DimensionError("interfering channels have the wrong length");
    }
    if (!(rho_u >= 0.0)) throw DomainError("uplink SNR must be >= 0");
    const double scale = rho_u / B.antennas();
    const RealMatrix own_gain = (B.rows * own).cwiseAbs2();
    RealVector cross = RealVector::Zero(B.size());
    if (other.cols() > 0) cross = (B.rows * other).cwiseAbs2().rowwise().sum();

    std::vector<SinrBreakdown> out(B.size());
    for (int i = 0; i < B.size(); ++i) {
        out[i].signal = scale * own_gain(i, i);
        out[i].intra_interference = scale * (own_gain.row(i).sum() - own_gain(i, i));
        out[i].cross_interference = scale * cross(i);
    }
    return out;
}

std::vector<SinrBreakdown> assigned_sinr_cb(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                             double rho_u) {
    return group_sinr(beamforming::cb_beamformers(H_A), H_A, H_R, rho_u);
}

std::vector<SinrBreakdown> assigned_sinr_zf(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                             double rho_u) {
    return group_sinr(beamforming::zf_beamformers(H_A), H_A, H_R, rho_u);
}

std::vector<SinrBreakdown> ra_sinr(const ComplexMatrix& H_A, const ComplexMatrix& H_R,
                                   double rho_u, beamforming::BeamformerKind kind,
                                   RaReceiverMode mode) {
    if (H_R.cols() == 0) return {};
    if (mode == RaReceiverMode::Direct) {
        return group_sinr(beamforming::make_beamformers(kind, H_R), H_R, H_A, rho_u);
    }
    const auto P = beamforming::orthogonal_complement(H_A);
    const ComplexMatrix effective = P.apply(H_R);
    const ComplexMatrix leakage = P.apply(H_A);
    return group_sinr(beamforming::make_beamformers(kind, effective), effective, leakage, rho_u);
}

double instantaneous_rate(double sinr) {
    if (!(sinr >= 0.0)) throw DomainError("SINR must be >= 0");
    return std::log2(1.0 + sinr);
}

double mean_rate(const std::vector<SinrBreakdown>& sinrs) {
    if (sinrs.empty()) return 0.0;
    return sum_rate(sinrs) / static_cast<double>(sinrs.size());
}

double sum_rate(const std::vector<SinrBreakdown>& sinrs) {
    double total = 0.0;
    for (const auto& s : sinrs) total += instantaneous_rate(s.sinr());
    return total;
}

}  // namespace vcsra::uplink
