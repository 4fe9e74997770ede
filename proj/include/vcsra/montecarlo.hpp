#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vcsra/config.hpp"

namespace vcsra::montecarlo {

enum class Estimator { PAv, AssignedRate, RaSumRate, TotalSumRate };
enum class Baseline { UpperNoRa, LowerUnfiltered };

struct ExperimentSpec {
    ScenarioConfig scenario;
    long trials = 10000;
    std::uint64_t master_seed = 1;
    std::set<Estimator> estimators{Estimator::PAv, Estimator::AssignedRate, Estimator::RaSumRate,
                                   Estimator::TotalSumRate};
    std::set<Baseline> baselines{Baseline::UpperNoRa, Baseline::LowerUnfiltered};
    int threads = 0;  ///< 0: VCSRA_DEFAULT_THREADS, else 1

    /// trials and master_seed taken from the config.
    static ExperimentSpec from_config(const ScenarioConfig& config, int threads = 0);

    /// Throws ConfigError.
    void validate() const;
    int resolved_threads() const;
};

struct Estimate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;  ///< 95 % normal approximation
    long samples = 0;
};

/// Wald interval for a proportion.
Estimate binomial_estimate(long successes, long n);
/// Sample mean with the 1.96 s / sqrt(n) halfwidth, summed in index order.
Estimate mean_estimate(const std::vector<double>& values);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Every index is
/// visited exactly once; the exception of the smallest failing index is
/// rethrown after all workers finish.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

/// Single-channel sensing strengths Y of trials x N_C independent channel
/// draws (fresh assigned UEs, beamformers and RA UE each time). Noise enters
/// through the full virtual-carrier path when rho_v_db is finite.
std::vector<double> simulate_strengths(const ExperimentSpec& spec);

struct AvailabilityPoint {
    double lambda_db = 0.0;
    int n_c = 1;
    Estimate p;
};

/// P_AV for every (lambda, n_c) pair from one set of draws: a trial succeeds
/// at n_c when the smallest strength among its first n_c channels passes.
std::vector<AvailabilityPoint> estimate_availability_curve(const ExperimentSpec& spec,
                                                           const std::vector<double>& lambda_db,
                                                           const std::vector<int>& n_c);

/// P_AV at the scenario's threshold and N_C.
Estimate estimate_p_av(const ExperimentSpec& spec);

inline constexpr const char* kUpperNoRa = "upper_no_ra";
inline constexpr const char* kLowerUnfiltered = "lower_unfiltered";

struct RateReport {
    int ra_ues = 0;
    double rho_u_db = 0.0;
    Estimate per_assigned_rate;  ///< VCS-admitted RA UEs
    Estimate ra_sum_rate;        ///< configured receiver mode
    Estimate ra_sum_rate_direct;
    Estimate ra_sum_rate_projected;
    Estimate total_sum_rate;  ///< N_A * per_assigned_rate + ra_sum_rate, per trial
    std::map<std::string, Estimate> baseline_rates;
    long trials_used = 0;
    long admitted = 0;
    long attempts = 0;
    /// RA receiver sets (direct and projected) built with the truncated ZF
    /// pseudo-inverse because the exact one was ill-conditioned.
    long ra_receiver_fallbacks = 0;
    /// Pooled admitted / attempts over all trials.
    double acceptance_rate() const {
        return attempts > 0 ? static_cast<double>(admitted) / attempts : 1.0;
    }
    /// 1 - per_assigned / upper_no_ra.
    double relative_loss() const;
};

/// Ergodic rates at the scenario's N_R and rho_U.
RateReport estimate_rates(const ExperimentSpec& spec);

/// Reports for every (rho_u_db, N_R) pair, indexed [rho][n_r], from one set of
/// draws. Admitted and unfiltered RA UEs for N_R = n are the first n of the
/// largest requested set, so each entry equals what estimate_rates returns
/// for that N_R and rho_U under the same seed.
std::vector<std::vector<RateReport>> estimate_rate_grid(const ExperimentSpec& spec,
                                                        const std::vector<int>& ra_ues,
                                                        const std::vector<double>& rho_u_db);

/// Threshold in dB reaching `probability` over `n_c` channels on the
/// empirical single-channel curve of simulate_strengths(spec).
double calibrate_lambda_empirical(const ExperimentSpec& spec, double probability, int n_c);

using Cell = std::variant<double, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
    std::string text(std::size_t row, const std::string& column) const;
    /// Every value of a numeric column, in row order.
    std::vector<double> numbers(const std::string& column) const;

    /// Comma-separated with '#'-prefixed metadata lines first.
    void write_csv(std::ostream& out) const;
};

/// Metadata lines for a table produced from one scenario.
std::vector<std::pair<std::string, std::string>> provenance(const ScenarioConfig& config,
                                                            long trials, std::uint64_t seed);

enum class SweepAxis { LambdaDb, NR, M, NC };
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// One row per grid point with all other parameters held. Grids must be
/// nonempty and monotone, and integer axes need integer values; otherwise
/// ConfigError. Rate columns of a point whose admission is exhausted are NaN.
ResultTable sweep(const ExperimentSpec& spec, SweepAxis axis, const std::vector<double>& grid);

inline constexpr long kFigureTrials = 10000;
const std::vector<std::string>& figure_ids();

/// Hard-coded grids of the evaluation figures. trials_scale in (0, 1]
/// multiplies the default trial count. Throws UnknownFigure.
ResultTable reproduce_figure(const std::string& figure_id, double trials_scale,
                             std::uint64_t seed = 1, int threads = 0);

}  // namespace vcsra::montecarlo
