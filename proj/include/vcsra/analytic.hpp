#pragma once

#include <variant>
#include <vector>

namespace vcsra::analytic {

/// Inputs of the closed-form approximations. They assume the simplified
/// channel model (one shared Phi with tr Phi = M, tr Phi^2 = M^2/Q).
struct AnalyticParams {
    int antennas = 100;     ///< M
    int paths = 50;         ///< Q, must be >= 2
    int assigned = 8;       ///< N_A
    double lambda_db = 0.0; ///< threshold; +inf is accepted
    int channels = 1;       ///< N_C
    double rho_u = 0.1;     ///< uplink SNR, linear
    int ra_ues = 0;         ///< N_R

    /// Throws DomainError.
    void validate() const;

    double beta() const;
    double eta() const;
    /// sqrt(Q) / (sqrt(Q) - 1), the decay rate of the correction terms.
    double decay() const;
    double tr_phi() const { return antennas; }
    double tr_phi2() const { return static_cast<double>(antennas) * antennas / paths; }
    /// Normalised threshold M Lambda / tr(Phi^2) = Q Lambda / M.
    double lambda_bar() const;
};

/// Approximate density of the normalised sensing statistic at y >= 0.
double pdf_ybar(double y, const AnalyticParams& params);

/// Single-channel availability P(Ybar <= lambda_bar), clamped to [0, 1].
double p_av_single(const AnalyticParams& params);
double p_av_single_at(double lambda_bar, const AnalyticParams& params);

/// 1 - (1 - p_sc)^n_c. Throws DomainError for p_sc outside [0,1] or n_c < 1.
double p_av_multi(double p_sc, int n_c);

/// Integral of y f(y) over [0, lambda_bar]; tends to N_A as lambda_bar -> inf.
double truncated_first_moment(double lambda_bar, const AnalyticParams& params);

/// Expected RA-to-assigned interference given VCS admission,
///   tr(Phi^2) n_r rho_u / (N_A M P_sc) * int_0^lambda_bar y f(y) dy.
/// Zero when n_r = 0. Throws DegenerateThreshold when P_sc < 1e-12.
double ra_interference_expectation(const AnalyticParams& params);

/// Large-system SINR of an assigned UE with conjugate beamforming.
double asymptotic_sinr_cb(const AnalyticParams& params);
/// Same for zero forcing, using E||a_i||^{-2} = M - (M/Q)(N_A - 1).
/// Throws DomainError when Q <= N_A - 1.
double asymptotic_sinr_zf(const AnalyticParams& params);
double zf_inverse_norm_mean(const AnalyticParams& params);

/// log2(1 + gamma_bar).
double asymptotic_rate(double gamma_bar);

struct InterferenceBudget {
    double value;  ///< tolerated mean RA interference (noise-normalised)
};
struct AvailabilityTarget {
    double probability;
    int channels;
};
using CalibrationTarget = std::variant<InterferenceBudget, AvailabilityTarget>;

/// Search bracket for the threshold, in dB.
inline constexpr double kCalibrationMinDb = -40.0;
inline constexpr double kCalibrationMaxDb = 40.0;

/// Threshold (dB) meeting the target via bisection on the monotone closed
/// forms. Throws InfeasibleTarget when the target lies outside what the
/// bracket can reach.
double calibrate_lambda(const CalibrationTarget& target, const AnalyticParams& params);

/// Availability curve from simulated sensing strengths (any channel model).
class EmpiricalAvailability {
public:
    explicit EmpiricalAvailability(std::vector<double> strengths_linear);

    double p_single(double lambda_db) const;
    double p_multi(double lambda_db, int n_c) const;
    std::size_t size() const noexcept { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

/// Availability calibration against an empirical single-channel curve.
double calibrate_lambda(const AvailabilityTarget& target, const EmpiricalAvailability& curve);

}  // namespace vcsra::analytic
