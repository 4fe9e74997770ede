#include "vcsra/vcs.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vcsra/errors.hpp"

namespace vcsra::vcs {

VcsSignal build_virtual_carrier(const beamforming::BeamformerSet& B,
                                const numerics::OrthogonalCode& S, double p_v) {
    const int n_a = B.size();
    if (n_a > S.length()) {
        throw CodeTooShort("code length " + std::to_string(S.length()) + " cannot carry " +
                           std::to_string(n_a) + " virtual carriers");
    }
    if (!(p_v > 0.0)) throw DomainError("virtual-carrier power must be positive");
    const ComplexMatrix codes = S.matrix.leftCols(n_a).cast<cdouble>();
    VcsSignal signal;
    signal.samples = std::sqrt(p_v) * (codes * B.rows);
    signal.transmit_power = p_v;
    signal.code = S;
    signal.carriers = n_a;
    return signal;
}

ComplexVector ra_receive(const VcsSignal& V, const ComplexVector& h_R, double rho_v_db,
                         NoiseMode noise, numerics::RngStream& rng) {
    if (h_R.size() != V.samples.cols()) {
        throw DimensionError("RA channel length does not match the antenna count");
    }
    ComplexVector w = V.samples * h_R;
    if (noise == NoiseMode::On && !(std::isinf(rho_v_db) && rho_v_db > 0)) {
        if (std::isnan(rho_v_db)) throw DomainError("virtual-carrier SNR is NaN");
        const double sigma2 = V.transmit_power / numerics::db_to_linear(rho_v_db);
        const double scale = std::sqrt(sigma2);
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) += scale * rng.complex_normal();
    }
    return w;
}

double sensing_strength(const ComplexVector& w, const numerics::OrthogonalCode& S, int M,
                        double p_v_received) {
    if (!(p_v_received > 0.0)) throw DomainError("received virtual-carrier power must be positive");
    if (w.size() != S.length()) throw DimensionError("received block length differs from the code length");
    const ComplexVector t = S.matrix.transpose().cast<cdouble>() * w;
    const double n_l = S.length();
    return t.squaredNorm() / (M * p_v_received * n_l * n_l);
}

RealVector noiseless_strength(const beamforming::BeamformerSet& B, const ComplexMatrix& H) {
    if (H.rows() != B.antennas()) throw DimensionError("channel length does not match beamformers");
    return (B.rows * H).cwiseAbs2().colwise().sum().transpose() / static_cast<double>(B.antennas());
}

double noiseless_strength(const beamforming::BeamformerSet& B, const ComplexVector& h) {
    if (h.size() != B.antennas()) throw DimensionError("channel length does not match beamformers");
    return (B.rows * h).squaredNorm() / static_cast<double>(B.antennas());
}

bool decide(double y_linear, double lambda_db) {
    if (y_linear <= 0.0) return true;
    return numerics::linear_to_db(y_linear) <= lambda_db;
}

SensingOutcome sense(double y_linear, double lambda_db) {
    SensingOutcome out;
    out.y_linear = y_linear;
    out.y_db = y_linear > 0.0 ? numerics::linear_to_db(y_linear)
                              : -std::numeric_limits<double>::infinity();
    out.available = decide(y_linear, lambda_db);
    return out;
}

std::optional<int> multi_channel_select(const std::vector<bool>& decisions,
                                        numerics::RngStream& rng) {
    std::vector<int> open;
    for (std::size_t c = 0; c < decisions.size(); ++c) {
        if (decisions[c]) open.push_back(static_cast<int>(c));
    }
    if (open.empty()) return std::nullopt;
    return open[rng.uniform_index(open.size())];
}

AdmittedSample sample_admitted_ra_ues(const beamforming::BeamformerSet& B, int n_r,
                                      double lambda_db,
                                      const channel::ChannelGenerator& generator,
                                      numerics::RngStream& rng, long max_attempts_per_ue) {
    if (n_r < 0) throw DomainError("RA UE count must be >= 0");
    if (std::isnan(lambda_db)) throw DomainError("threshold is NaN");
    AdmittedSample out;
    out.channels.resize(generator.antennas(), n_r);
    for (int k = 0; k < n_r; ++k) {
        long tries = 0;
        for (;;) {
            if (tries == max_attempts_per_ue) {
                throw AdmissionExhausted("no admissible RA channel after " + std::to_string(tries) +
                                         " draws at Lambda = " + std::to_string(lambda_db) +
                                         " dB; threshold too small for this scenario");
            }
            ++tries;
            ComplexMatrix candidate = generator.draw(1, rng);
            if (decide(noiseless_strength(B, ComplexVector(candidate.col(0))), lambda_db)) {
                out.channels.col(k) = candidate.col(0);
                break;
            }
        }
        out.attempts += tries;
    }
    return out;
}

}  // namespace vcsra::vcs
