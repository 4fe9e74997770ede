#include "vcsra/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "vcsra/analytic.hpp"
#include "vcsra/errors.hpp"
#include "vcsra/uplink.hpp"
#include "vcsra/vcs.hpp"

namespace vcsra::montecarlo {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream tags below a trial's root stream.
constexpr std::uint64_t kTagAssigned = 1;
constexpr std::uint64_t kTagAdmitted = 2;
constexpr std::uint64_t kTagUnfiltered = 3;
constexpr std::uint64_t kTagChannelBase = 0x1000;
constexpr std::uint64_t kTagRaUe = 2;
constexpr std::uint64_t kTagNoise = 3;

bool wants(const ExperimentSpec& spec, Estimator e) { return spec.estimators.count(e) > 0; }
bool wants(const ExperimentSpec& spec, Baseline b) { return spec.baselines.count(b) > 0; }

bool wants_ra(const ExperimentSpec& spec) {
    return wants(spec, Estimator::RaSumRate) || wants(spec, Estimator::TotalSumRate);
}

// Strength of one freshly drawn channel: assigned UEs, beamformers, one RA UE.
double channel_strength(const ExperimentSpec& spec, const channel::ChannelGenerator& gen,
                        const numerics::OrthogonalCode& code, const numerics::RngStream& root) {
    const auto& sc = spec.scenario;
    auto r_assigned = root.split(kTagAssigned);
    const ComplexMatrix H_A = gen.draw(sc.assigned, r_assigned);
    const auto B = beamforming::make_beamformers(sc.beamformer, H_A);
    auto r_ue = root.split(kTagRaUe);
    const ComplexVector h = gen.draw(1, r_ue).col(0);
    if (std::isinf(sc.rho_v_db)) return vcs::noiseless_strength(B, h);
    const auto V = vcs::build_virtual_carrier(B, code, 1.0);
    auto r_noise = root.split(kTagNoise);
    const ComplexVector w = vcs::ra_receive(V, h, sc.rho_v_db, vcs::NoiseMode::On, r_noise);
    return vcs::sensing_strength(w, code, sc.antennas, 1.0);
}

// trials x n_channels strengths, row-major by trial.
std::vector<double> strengths(const ExperimentSpec& spec, int n_channels) {
    const channel::ChannelGenerator gen(spec.scenario.channel_params());
    const auto code = numerics::hadamard(spec.scenario.code_length);
    std::vector<double> out(static_cast<std::size_t>(spec.trials) * n_channels);
    parallel_for(spec.trials, spec.resolved_threads(), [&](long t) {
        const numerics::RngStream root(spec.master_seed, static_cast<std::uint64_t>(t));
        for (int c = 0; c < n_channels; ++c) {
            out[static_cast<std::size_t>(t) * n_channels + c] =
                channel_strength(spec, gen, code, root.split(kTagChannelBase + c));
        }
    });
    return out;
}

// ZF receivers for an RA group fall back to the truncated pseudo-inverse when
// the admitted channels are too close to collinear for an exact inverse.
beamforming::BeamformerSet ra_receivers(beamforming::BeamformerKind kind, const ComplexMatrix& H,
                                        long& fallbacks) {
    if (kind == beamforming::BeamformerKind::CB) return beamforming::cb_beamformers(H);
    try {
        return beamforming::zf_beamformers(H);
    } catch (const SingularMatrix&) {
        ++fallbacks;
        return beamforming::zf_beamformers_truncated(H);
    }
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string csv_field(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

double analytic_p_multi(const ScenarioConfig& sc) {
    if (sc.model != channel::ModelKind::Simplified) return kNaN;
    try {
        const auto p = sc.analytic_params();
        return analytic::p_av_multi(analytic::p_av_single(p), p.channels);
    } catch (const Error&) {
        return kNaN;
    }
}

double analytic_rate(const ScenarioConfig& sc, int ra_ues) {
    if (sc.model != channel::ModelKind::Simplified) return kNaN;
    try {
        auto p = sc.analytic_params();
        p.ra_ues = ra_ues;
        const double g = sc.beamformer == beamforming::BeamformerKind::CB
                             ? analytic::asymptotic_sinr_cb(p)
                             : analytic::asymptotic_sinr_zf(p);
        return analytic::asymptotic_rate(g);
    } catch (const Error&) {
        return kNaN;
    }
}

long scaled_trials(double trials_scale) {
    if (!(trials_scale > 0.0 && trials_scale <= 1.0)) {
        throw ConfigError("trials_scale must lie in (0, 1]");
    }
    return std::max<long>(1, std::lround(kFigureTrials * trials_scale));
}

}  // namespace

ExperimentSpec ExperimentSpec::from_config(const ScenarioConfig& config, int threads) {
    ExperimentSpec spec;
    spec.scenario = config;
    spec.trials = config.trials;
    spec.master_seed = config.seed;
    spec.threads = threads;
    return spec;
}

void ExperimentSpec::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    try {
        scenario.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

int ExperimentSpec::resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("VCSRA_DEFAULT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

Estimate binomial_estimate(long successes, long n) {
    if (n < 1 || successes < 0 || successes > n) throw DomainError("invalid binomial counts");
    Estimate e;
    e.samples = n;
    e.mean = static_cast<double>(successes) / n;
    e.ci_halfwidth = kZ95 * std::sqrt(e.mean * (1.0 - e.mean) / n);
    return e;
}

Estimate mean_estimate(const std::vector<double>& values) {
    Estimate e;
    e.samples = static_cast<long>(values.size());
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.ci_halfwidth = kZ95 * std::sqrt(ss / (values.size() - 1) / values.size());
    }
    return e;
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::mutex guard;
    long failed_index = n;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    const int count = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (int k = 0; k < count; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> simulate_strengths(const ExperimentSpec& spec) {
    spec.validate();
    return strengths(spec, spec.scenario.channels);
}

std::vector<AvailabilityPoint> estimate_availability_curve(const ExperimentSpec& spec,
                                                           const std::vector<double>& lambda_db,
                                                           const std::vector<int>& n_c) {
    spec.validate();
    if (lambda_db.empty() || n_c.empty()) throw ConfigError("availability grid is empty");
    for (double l : lambda_db) {
        if (std::isnan(l)) throw ConfigError("threshold is NaN");
    }
    for (int c : n_c) {
        if (c < 1) throw ConfigError("N_C must be >= 1");
    }
    const int max_c = *std::max_element(n_c.begin(), n_c.end());
    const auto y = strengths(spec, max_c);

    // Running minimum of each trial over its first c channels.
    std::vector<double> minima(static_cast<std::size_t>(spec.trials) * n_c.size());
    for (long t = 0; t < spec.trials; ++t) {
        const double* row = &y[static_cast<std::size_t>(t) * max_c];
        for (std::size_t k = 0; k < n_c.size(); ++k) {
            minima[t * n_c.size() + k] = *std::min_element(row, row + n_c[k]);
        }
    }

    std::vector<AvailabilityPoint> out;
    out.reserve(lambda_db.size() * n_c.size());
    for (double l : lambda_db) {
        for (std::size_t k = 0; k < n_c.size(); ++k) {
            long hits = 0;
            for (long t = 0; t < spec.trials; ++t) {
                if (vcs::decide(minima[t * n_c.size() + k], l)) ++hits;
            }
            out.push_back({l, n_c[k], binomial_estimate(hits, spec.trials)});
        }
    }
    return out;
}

Estimate estimate_p_av(const ExperimentSpec& spec) {
    return estimate_availability_curve(spec, {spec.scenario.lambda_db}, {spec.scenario.channels})
        .front()
        .p;
}

double RateReport::relative_loss() const {
    const auto it = baseline_rates.find(kUpperNoRa);
    if (it == baseline_rates.end() || it->second.mean == 0.0) return kNaN;
    return 1.0 - per_assigned_rate.mean / it->second.mean;
}

std::vector<std::vector<RateReport>> estimate_rate_grid(const ExperimentSpec& spec,
                                                        const std::vector<int>& ra_ues,
                                                        const std::vector<double>& rho_u_db) {
    spec.validate();
    if (ra_ues.empty() || rho_u_db.empty()) throw ConfigError("rate grid is empty");
    for (int n : ra_ues) {
        if (n < 0) throw ConfigError("N_R must be >= 0");
    }
    for (double r : rho_u_db) {
        if (!std::isfinite(r)) throw ConfigError("rho_u_db must be finite");
    }
    const auto& sc = spec.scenario;
    const int max_nr = *std::max_element(ra_ues.begin(), ra_ues.end());
    const std::size_t n_rho = rho_u_db.size();
    const std::size_t n_nr = ra_ues.size();
    const bool need_lower = wants(spec, Baseline::LowerUnfiltered);
    const bool need_ra = wants_ra(spec);

    enum Field { kUpper, kVcs, kLower, kRaDirect, kRaProjected, kFields };
    const std::size_t per_trial = n_rho * n_nr * kFields;
    std::vector<double> values(static_cast<std::size_t>(spec.trials) * per_trial, 0.0);
    std::vector<long> attempts(static_cast<std::size_t>(spec.trials) * n_nr, 0);
    std::vector<long> singular(static_cast<std::size_t>(spec.trials) * n_nr, 0);

    const channel::ChannelGenerator gen(sc.channel_params());
    std::vector<double> rho(n_rho);
    for (std::size_t r = 0; r < n_rho; ++r) rho[r] = numerics::db_to_linear(rho_u_db[r]);

    parallel_for(spec.trials, spec.resolved_threads(), [&](long t) {
        const numerics::RngStream root(spec.master_seed, static_cast<std::uint64_t>(t));
        auto r_assigned = root.split(kTagAssigned);
        const ComplexMatrix H_A = gen.draw(sc.assigned, r_assigned);
        const auto B = beamforming::make_beamformers(sc.beamformer, H_A);

        ComplexMatrix admitted(sc.antennas, max_nr);
        std::vector<long> cumulative(max_nr + 1, 0);
        auto r_admit = root.split(kTagAdmitted);
        for (int k = 0; k < max_nr; ++k) {
            const auto one =
                vcs::sample_admitted_ra_ues(B, 1, sc.lambda_db, gen, r_admit, sc.max_attempts);
            admitted.col(k) = one.channels.col(0);
            cumulative[k + 1] = cumulative[k] + one.attempts;
        }
        ComplexMatrix unfiltered;
        if (need_lower && max_nr > 0) {
            auto r_unf = root.split(kTagUnfiltered);
            unfiltered = gen.draw(max_nr, r_unf);
        }

        // RA receivers depend on N_R only.
        std::vector<beamforming::BeamformerSet> ra_direct(n_nr), ra_projected(n_nr);
        ComplexMatrix effective, leakage;
        if (need_ra && max_nr > 0) {
            const auto P = beamforming::orthogonal_complement(H_A);
            effective = P.apply(admitted);
            leakage = P.apply(H_A);
            for (std::size_t k = 0; k < n_nr; ++k) {
                const int n = ra_ues[k];
                if (n == 0) continue;
                long& fallbacks = singular[t * n_nr + k];
                ra_direct[k] = ra_receivers(sc.beamformer, admitted.leftCols(n), fallbacks);
                ra_projected[k] = ra_receivers(sc.beamformer, effective.leftCols(n), fallbacks);
            }
        }

        double* out = &values[static_cast<std::size_t>(t) * per_trial];
        const ComplexMatrix none(sc.antennas, 0);
        for (std::size_t r = 0; r < n_rho; ++r) {
            const double upper = uplink::mean_rate(uplink::group_sinr(B, H_A, none, rho[r]));
            for (std::size_t k = 0; k < n_nr; ++k) {
                const int n = ra_ues[k];
                double* cell = out + (r * n_nr + k) * kFields;
                cell[kUpper] = upper;
                cell[kVcs] = n == 0 ? upper
                                    : uplink::mean_rate(uplink::group_sinr(
                                          B, H_A, admitted.leftCols(n), rho[r]));
                if (need_lower) {
                    cell[kLower] = n == 0 ? upper
                                          : uplink::mean_rate(uplink::group_sinr(
                                                B, H_A, unfiltered.leftCols(n), rho[r]));
                }
                if (need_ra && n > 0) {
                    cell[kRaDirect] = uplink::sum_rate(
                        uplink::group_sinr(ra_direct[k], admitted.leftCols(n), H_A, rho[r]));
                    cell[kRaProjected] = uplink::sum_rate(uplink::group_sinr(
                        ra_projected[k], effective.leftCols(n), leakage, rho[r]));
                }
            }
        }
        for (std::size_t k = 0; k < n_nr; ++k) attempts[t * n_nr + k] = cumulative[ra_ues[k]];
    });

    std::vector<std::vector<RateReport>> reports(n_rho, std::vector<RateReport>(n_nr));
    std::vector<double> column(spec.trials), total(spec.trials);
    auto collect = [&](std::size_t r, std::size_t k, int field) {
        for (long t = 0; t < spec.trials; ++t) {
            column[t] = values[t * per_trial + (r * n_nr + k) * kFields + field];
        }
        return mean_estimate(column);
    };
    const int configured = sc.ra_receiver_mode == uplink::RaReceiverMode::Direct ? kRaDirect
                                                                                 : kRaProjected;
    for (std::size_t r = 0; r < n_rho; ++r) {
        for (std::size_t k = 0; k < n_nr; ++k) {
            RateReport& rep = reports[r][k];
            rep.ra_ues = ra_ues[k];
            rep.rho_u_db = rho_u_db[r];
            rep.trials_used = spec.trials;
            rep.per_assigned_rate = collect(r, k, kVcs);
            if (wants(spec, Baseline::UpperNoRa)) rep.baseline_rates[kUpperNoRa] = collect(r, k, kUpper);
            if (need_lower) rep.baseline_rates[kLowerUnfiltered] = collect(r, k, kLower);
            if (need_ra) {
                rep.ra_sum_rate_direct = collect(r, k, kRaDirect);
                rep.ra_sum_rate_projected = collect(r, k, kRaProjected);
                rep.ra_sum_rate = configured == kRaDirect ? rep.ra_sum_rate_direct
                                                          : rep.ra_sum_rate_projected;
                for (long t = 0; t < spec.trials; ++t) {
                    const double* cell = &values[t * per_trial + (r * n_nr + k) * kFields];
                    total[t] = sc.assigned * cell[kVcs] + cell[configured];
                }
                rep.total_sum_rate = mean_estimate(total);
            }
            for (long t = 0; t < spec.trials; ++t) {
                rep.attempts += attempts[t * n_nr + k];
                rep.ra_receiver_fallbacks += singular[t * n_nr + k];
            }
            rep.admitted = static_cast<long>(ra_ues[k]) * spec.trials;
        }
    }
    return reports;
}

RateReport estimate_rates(const ExperimentSpec& spec) {
    return estimate_rate_grid(spec, {spec.scenario.ra_ues}, {spec.scenario.rho_u_db})[0][0];
}

double calibrate_lambda_empirical(const ExperimentSpec& spec, double probability, int n_c) {
    const analytic::EmpiricalAvailability curve(simulate_strengths(spec));
    return analytic::calibrate_lambda(analytic::AvailabilityTarget{probability, n_c}, curve);
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DimensionError("row width does not match the columns");
    rows.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DomainError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::number(std::size_t row, const std::string& column) const {
    const auto& cell = rows.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    throw DomainError("column '" + column + "' is not numeric");
}

std::string ResultTable::text(std::size_t row, const std::string& column) const {
    const auto& cell = rows.at(row).at(column_index(column));
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    return format_number(std::get<double>(cell));
}

std::vector<double> ResultTable::numbers(const std::string& column) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, column));
    return out;
}

void ResultTable::write_csv(std::ostream& out) const {
    for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << '\n';
    }
}

std::vector<std::pair<std::string, std::string>> provenance(const ScenarioConfig& config,
                                                            long trials, std::uint64_t seed) {
    std::vector<std::pair<std::string, std::string>> out{{"vcsra_version", kVersion}};
    for (const auto& kv : config.describe()) {
        if (kv.first != "trials" && kv.first != "seed") out.push_back(kv);
    }
    for (const auto& o : config.overrides) out.emplace_back("override", o);
    out.emplace_back("trials", std::to_string(trials));
    out.emplace_back("master_seed", std::to_string(seed));
    return out;
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "lambda_db") return SweepAxis::LambdaDb;
    if (name == "n_r") return SweepAxis::NR;
    if (name == "m") return SweepAxis::M;
    if (name == "n_c") return SweepAxis::NC;
    throw ConfigError("unknown sweep axis '" + name + "' (expected lambda_db, n_r, m or n_c)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::LambdaDb: return "lambda_db";
        case SweepAxis::NR: return "n_r";
        case SweepAxis::M: return "m";
        case SweepAxis::NC: return "n_c";
    }
    return "?";
}

ResultTable sweep(const ExperimentSpec& spec, SweepAxis axis, const std::vector<double>& grid) {
    spec.validate();
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    const bool up = std::is_sorted(grid.begin(), grid.end());
    const bool down = std::is_sorted(grid.rbegin(), grid.rend());
    if (!up && !down) throw ConfigError("sweep grid must be monotone");
    for (double v : grid) {
        if (std::isnan(v)) throw ConfigError("sweep grid contains NaN");
        if (axis != SweepAxis::LambdaDb && !is_integer(v)) {
            throw ConfigError("axis " + to_string(axis) + " needs integer grid values");
        }
    }

    const auto at = [&](double v) {
        ExperimentSpec s = spec;
        switch (axis) {
            case SweepAxis::LambdaDb: s.scenario.lambda_db = v; break;
            case SweepAxis::NR: s.scenario.ra_ues = static_cast<int>(v); break;
            case SweepAxis::M: s.scenario.antennas = static_cast<int>(v); break;
            case SweepAxis::NC: s.scenario.channels = static_cast<int>(v); break;
        }
        s.validate();
        return s;
    };
    std::vector<ExperimentSpec> points;
    for (double v : grid) points.push_back(at(v));

    const bool p_av = wants(spec, Estimator::PAv);
    const bool assigned = wants(spec, Estimator::AssignedRate);
    const bool upper = wants(spec, Baseline::UpperNoRa);
    const bool lower = wants(spec, Baseline::LowerUnfiltered);
    const bool ra = wants(spec, Estimator::RaSumRate);
    const bool total = wants(spec, Estimator::TotalSumRate);
    const bool rates = assigned || upper || lower || ra || total;

    ResultTable table;
    table.metadata = provenance(spec.scenario, spec.trials, spec.master_seed);
    table.metadata.emplace_back("sweep_axis", to_string(axis));
    table.columns.push_back(to_string(axis));
    if (p_av) table.columns.insert(table.columns.end(), {"p_av", "p_av_ci", "p_av_analytic"});
    if (assigned) {
        table.columns.insert(table.columns.end(),
                             {"per_assigned_rate", "per_assigned_rate_ci", "analytic_rate"});
    }
    if (upper) table.columns.push_back(kUpperNoRa);
    if (lower) table.columns.push_back(kLowerUnfiltered);
    if (ra) table.columns.push_back("ra_sum_rate");
    if (total) table.columns.push_back("total_sum_rate");
    if (rates) table.columns.push_back("acceptance_rate");

    std::vector<Estimate> p_hat(grid.size());
    if (p_av) {
        if (axis == SweepAxis::LambdaDb || axis == SweepAxis::NC) {
            std::vector<double> lambdas{spec.scenario.lambda_db};
            std::vector<int> ncs{spec.scenario.channels};
            if (axis == SweepAxis::LambdaDb) lambdas = grid;
            if (axis == SweepAxis::NC) {
                ncs.clear();
                for (double v : grid) ncs.push_back(static_cast<int>(v));
            }
            const auto curve = estimate_availability_curve(spec, lambdas, ncs);
            for (std::size_t i = 0; i < grid.size(); ++i) p_hat[i] = curve[i].p;
        } else if (axis == SweepAxis::NR) {
            const Estimate e = estimate_p_av(spec);
            std::fill(p_hat.begin(), p_hat.end(), e);
        } else {
            for (std::size_t i = 0; i < grid.size(); ++i) p_hat[i] = estimate_p_av(points[i]);
        }
    }

    std::vector<std::optional<RateReport>> reports(grid.size());
    if (rates) {
        auto guarded = [&](std::size_t i, const std::function<void()>& run) {
            try {
                run();
            } catch (const AdmissionExhausted&) {
                table.metadata.emplace_back("admission_exhausted",
                                            to_string(axis) + "=" + format_number(grid[i]));
            }
        };
        if (axis == SweepAxis::NR) {
            std::vector<int> nrs;
            for (double v : grid) nrs.push_back(static_cast<int>(v));
            guarded(0, [&] {
                const auto grid_reports = estimate_rate_grid(spec, nrs, {spec.scenario.rho_u_db});
                for (std::size_t i = 0; i < grid.size(); ++i) reports[i] = grid_reports[0][i];
            });
        } else if (axis == SweepAxis::NC) {
            guarded(0, [&] {
                const RateReport rep = estimate_rates(spec);
                std::fill(reports.begin(), reports.end(), rep);
            });
        } else {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                guarded(i, [&] { reports[i] = estimate_rates(points[i]); });
            }
        }
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ScenarioConfig& sc = points[i].scenario;
        std::vector<Cell> row{grid[i]};
        if (p_av) {
            row.insert(row.end(), {p_hat[i].mean, p_hat[i].ci_halfwidth, analytic_p_multi(sc)});
        }
        const auto& rep = reports[i];
        auto baseline = [&](const char* name) {
            return rep ? rep->baseline_rates.at(name).mean : kNaN;
        };
        if (assigned) {
            row.insert(row.end(), {rep ? rep->per_assigned_rate.mean : kNaN,
                                   rep ? rep->per_assigned_rate.ci_halfwidth : kNaN,
                                   analytic_rate(sc, sc.ra_ues)});
        }
        if (upper) row.emplace_back(baseline(kUpperNoRa));
        if (lower) row.emplace_back(baseline(kLowerUnfiltered));
        if (ra) row.emplace_back(rep ? rep->ra_sum_rate.mean : kNaN);
        if (total) row.emplace_back(rep ? rep->total_sum_rate.mean : kNaN);
        if (rates) row.emplace_back(rep ? rep->acceptance_rate() : kNaN);
        table.add_row(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Figure grids

namespace {

struct OperatingPoint {
    double target;     // multi-channel availability over 100 channels
    double lambda_db;  // threshold used for the practical model
};

constexpr int kFigureChannels = 100;
const std::vector<OperatingPoint> kOperatingPoints{{0.80, 0.0}, {0.98, 4.0}};
const std::vector<double> kRhoVDb{std::numeric_limits<double>::infinity(), 0.0, 10.0, 20.0};

ScenarioConfig figure_scenario(channel::ModelKind model, std::uint64_t seed, long trials) {
    ScenarioConfig sc;
    sc.model = model;
    sc.seed = seed;
    sc.trials = trials;
    return sc;
}

std::vector<int> range_nr() {
    std::vector<int> out;
    for (int n = 0; n <= 10; ++n) out.push_back(n);
    return out;
}

void add_figure_metadata(ResultTable& table, const std::string& id, double scale, long trials,
                         std::uint64_t seed, const ScenarioConfig& sc) {
    table.metadata = provenance(sc, trials, seed);
    table.metadata.insert(table.metadata.begin() + 1, {"figure", id});
    table.metadata.emplace_back("trials_scale", format_number(scale));
}

ResultTable availability_figure(channel::ModelKind model, const ExperimentSpec& base) {
    ResultTable table;
    table.columns = {"rho_v_db", "lambda_db", "n_c", "p_sim", "p_analytic", "ci"};
    std::vector<double> lambdas;
    for (int l = -4; l <= 8; ++l) lambdas.push_back(l);
    const std::vector<int> ncs{1, 10, 100};
    for (double rho_v : kRhoVDb) {
        ExperimentSpec spec = base;
        spec.scenario.rho_v_db = rho_v;
        const auto curve = estimate_availability_curve(spec, lambdas, ncs);
        for (const auto& pt : curve) {
            double analytic_p = kNaN;
            if (model == channel::ModelKind::Simplified) {
                ScenarioConfig sc = spec.scenario;
                sc.lambda_db = pt.lambda_db;
                sc.channels = pt.n_c;
                analytic_p = analytic_p_multi(sc);
            }
            table.add_row({rho_v, pt.lambda_db, static_cast<double>(pt.n_c), pt.p.mean, analytic_p,
                           pt.p.ci_halfwidth});
        }
    }
    return table;
}

double figure_lambda(const ScenarioConfig& sc, const OperatingPoint& op) {
    if (sc.model == channel::ModelKind::Practical) return op.lambda_db;
    return analytic::calibrate_lambda(analytic::AvailabilityTarget{op.target, kFigureChannels},
                                      sc.analytic_params());
}

ResultTable rate_figure(const ExperimentSpec& base, double rho_u_db) {
    ResultTable table;
    table.columns = {"beamformer",     "p_target",          "lambda_db",   "n_r",
                     kUpperNoRa,        "per_assigned_rate", "ci",          kLowerUnfiltered,
                     "analytic_rate",   "analytic_upper",    "loss_pct",    "acceptance_rate"};
    for (auto kind : {beamforming::BeamformerKind::CB, beamforming::BeamformerKind::ZF}) {
        for (const auto& op : kOperatingPoints) {
            ExperimentSpec spec = base;
            spec.scenario.beamformer = kind;
            spec.scenario.rho_u_db = rho_u_db;
            spec.scenario.lambda_db = figure_lambda(spec.scenario, op);
            spec.estimators = {Estimator::AssignedRate};
            const auto nrs = range_nr();
            const auto reports = estimate_rate_grid(spec, nrs, {rho_u_db})[0];
            const double analytic_upper = analytic_rate(spec.scenario, 0);
            for (const auto& rep : reports) {
                table.add_row({vcsra::to_string(kind), op.target, spec.scenario.lambda_db,
                               static_cast<double>(rep.ra_ues),
                               rep.baseline_rates.at(kUpperNoRa).mean, rep.per_assigned_rate.mean,
                               rep.per_assigned_rate.ci_halfwidth,
                               rep.baseline_rates.at(kLowerUnfiltered).mean,
                               analytic_rate(spec.scenario, rep.ra_ues), analytic_upper,
                               100.0 * rep.relative_loss(), rep.acceptance_rate()});
            }
        }
    }
    return table;
}

ResultTable antenna_figure(const ExperimentSpec& base) {
    ResultTable table;
    table.columns = {"beamformer", "lambda_db", "m",        kUpperNoRa,
                     "per_assigned_rate", "ci", kLowerUnfiltered, "loss_pct"};
    const OperatingPoint op = kOperatingPoints.back();
    for (auto kind : {beamforming::BeamformerKind::CB, beamforming::BeamformerKind::ZF}) {
        for (int m = 50; m <= 300; m += 50) {
            ExperimentSpec spec = base;
            spec.scenario.beamformer = kind;
            spec.scenario.antennas = m;
            spec.scenario.ra_ues = 8;
            spec.scenario.lambda_db = op.lambda_db;
            spec.estimators = {Estimator::AssignedRate};
            const RateReport rep = estimate_rates(spec);
            table.add_row({vcsra::to_string(kind), op.lambda_db, static_cast<double>(m),
                           rep.baseline_rates.at(kUpperNoRa).mean, rep.per_assigned_rate.mean,
                           rep.per_assigned_rate.ci_halfwidth,
                           rep.baseline_rates.at(kLowerUnfiltered).mean,
                           100.0 * rep.relative_loss()});
        }
    }
    return table;
}

ResultTable sum_rate_figure(const ExperimentSpec& base, beamforming::BeamformerKind kind) {
    ResultTable table;
    table.columns = {"n_r",
                     "per_assigned_rate",
                     "assigned_sum_rate",
                     "ra_sum_rate",
                     "ra_sum_rate_projected",
                     "total_sum_rate",
                     "total_sum_rate_ci",
                     "assigned_only_sum_rate",
                     "gain_pct"};
    ExperimentSpec spec = base;
    spec.scenario.beamformer = kind;
    spec.scenario.lambda_db = kOperatingPoints.back().lambda_db;
    spec.baselines = {Baseline::UpperNoRa};
    const auto reports = estimate_rate_grid(spec, range_nr(), {spec.scenario.rho_u_db})[0];
    const double n_a = spec.scenario.assigned;
    const double assigned_only = n_a * reports.front().per_assigned_rate.mean;
    for (const auto& rep : reports) {
        table.add_row({static_cast<double>(rep.ra_ues), rep.per_assigned_rate.mean,
                       n_a * rep.per_assigned_rate.mean, rep.ra_sum_rate_direct.mean,
                       rep.ra_sum_rate_projected.mean, rep.total_sum_rate.mean,
                       rep.total_sum_rate.ci_halfwidth, assigned_only,
                       100.0 * (rep.total_sum_rate.mean / assigned_only - 1.0)});
    }
    return table;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig5", "fig6",  "fig7",  "fig8", "fig9",
                                              "fig10", "fig11", "fig12", "fig13"};
    return ids;
}

ResultTable reproduce_figure(const std::string& figure_id, double trials_scale,
                             std::uint64_t seed, int threads) {
    const auto& ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
        throw UnknownFigure("unknown figure '" + figure_id + "' (expected fig5 ... fig13)");
    }
    const long trials = scaled_trials(trials_scale);
    const bool simplified = figure_id == "fig5" || figure_id == "fig7" || figure_id == "fig8";
    const auto model = simplified ? channel::ModelKind::Simplified : channel::ModelKind::Practical;

    ExperimentSpec base = ExperimentSpec::from_config(figure_scenario(model, seed, trials), threads);
    ResultTable table;
    if (figure_id == "fig5" || figure_id == "fig6") {
        table = availability_figure(model, base);
    } else if (figure_id == "fig7" || figure_id == "fig9") {
        table = rate_figure(base, -10.0);
    } else if (figure_id == "fig8" || figure_id == "fig10") {
        table = rate_figure(base, 0.0);
    } else if (figure_id == "fig11") {
        table = antenna_figure(base);
    } else {
        table = sum_rate_figure(base, figure_id == "fig12" ? beamforming::BeamformerKind::CB
                                                           : beamforming::BeamformerKind::ZF);
    }
    add_figure_metadata(table, figure_id, trials_scale, trials, seed, base.scenario);
    return table;
}

}  // namespace vcsra::montecarlo
