#pragma once

#include <optional>
#include <vector>

#include "vcsra/beamforming.hpp"
#include "vcsra/channel.hpp"
#include "vcsra/numerics.hpp"

namespace vcsra::vcs {

/// Virtual-carrier block V = sqrt(p_v) * sum_i s_i b_i^T, N_L x M.
struct VcsSignal {
    ComplexMatrix samples;
    double transmit_power = 1.0;
    numerics::OrthogonalCode code;
    int carriers = 0;  ///< N_A, number of code columns in use
};

/// Throws CodeTooShort when N_A > N_L and DomainError when p_v <= 0.
VcsSignal build_virtual_carrier(const beamforming::BeamformerSet& B,
                                const numerics::OrthogonalCode& S, double p_v);

enum class NoiseMode { Off, On };

/// w = V h_R + n with n ~ CN(0, sigma^2 I) and sigma^2 = p_v / rho_V (unit
/// large-scale gain). rho_v_db = +inf behaves like NoiseMode::Off.
ComplexVector ra_receive(const VcsSignal& V, const ComplexVector& h_R, double rho_v_db,
                         NoiseMode noise, numerics::RngStream& rng);

/// Y = ||S^T w||^2 / (M p_v N_L^2).
double sensing_strength(const ComplexVector& w, const numerics::OrthogonalCode& S, int M,
                        double p_v_received);

/// Noise-free strength sum_i |b_i^T h|^2 / M, one value per column of H.
RealVector noiseless_strength(const beamforming::BeamformerSet& B, const ComplexMatrix& H);
double noiseless_strength(const beamforming::BeamformerSet& B, const ComplexVector& h);

/// Inclusive comparison in dB. y = 0 counts as -inf dB.
bool decide(double y_linear, double lambda_db);

struct SensingOutcome {
    double y_linear = 0.0;
    double y_db = 0.0;
    bool available = false;
    std::optional<int> channel_index;
};

SensingOutcome sense(double y_linear, double lambda_db);

/// Uniform pick among the available channels; nullopt when none is available.
std::optional<int> multi_channel_select(const std::vector<bool>& decisions,
                                        numerics::RngStream& rng);

struct AdmittedSample {
    ComplexMatrix channels;  ///< M x n_r, every column passes the noiseless test
    long attempts = 0;

    double acceptance_rate() const {
        return attempts > 0 ? static_cast<double>(channels.cols()) / attempts : 1.0;
    }
};

inline constexpr long kDefaultMaxAttemptsPerUe = 10000;

/// Rejection-samples RA channels until n_r of them satisfy Y <= Lambda under
/// the given beamformers. Throws AdmissionExhausted when a single UE needs more
/// than max_attempts_per_ue candidates.
AdmittedSample sample_admitted_ra_ues(const beamforming::BeamformerSet& B, int n_r,
                                      double lambda_db,
                                      const channel::ChannelGenerator& generator,
                                      numerics::RngStream& rng,
                                      long max_attempts_per_ue = kDefaultMaxAttemptsPerUe);

}  // namespace vcsra::vcs
