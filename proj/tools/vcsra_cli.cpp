// vcsra: command-line front end for the VCS random-access simulator.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcsra/analytic.hpp"
#include "vcsra/config.hpp"
#include "vcsra/errors.hpp"
#include "vcsra/montecarlo.hpp"

namespace mc = vcsra::montecarlo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    int threads = 0;
    std::vector<std::string> set;
};

vcsra::ScenarioConfig resolve_config(const CommonOptions& opts) {
    std::vector<std::string> overrides = opts.set;
    if (opts.seed) overrides.push_back("seed=" + std::to_string(*opts.seed));
    if (opts.trials) overrides.push_back("trials=" + std::to_string(*opts.trials));
    std::optional<std::string> path;
    if (!opts.config_path.empty()) path = opts.config_path;
    return vcsra::load_config(path, overrides);
}

void emit(const mc::ResultTable& table, const CommonOptions& opts, const std::string& summary) {
    if (opts.out_path.empty()) {
        table.write_csv(std::cout);
        std::cerr << summary << '\n';
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw vcsra::ConfigError("cannot write to '" + opts.out_path + "'");
    table.write_csv(out);
    std::cout << summary << '\n';
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto number = [&text](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw vcsra::ConfigError("malformed grid '" + text + "'");
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw vcsra::ConfigError("grid must be a:b:step");
        const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
        if (!(step != 0.0) || (b - a) / step < 0) {
            throw vcsra::ConfigError("grid step does not lead from a to b");
        }
        const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + i * step);
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw vcsra::ConfigError("grid is empty");
    return out;
}

double or_nan(const std::function<double()>& f) {
    try {
        return f();
    } catch (const vcsra::Error&) {
        return kNaN;
    }
}

int run_analytic(const CommonOptions& opts) {
    const auto config = resolve_config(opts);
    const auto p = config.analytic_params();
    p.validate();
    const double p_sc = vcsra::analytic::p_av_single(p);
    const double p_mc = vcsra::analytic::p_av_multi(p_sc, p.channels);
    const double interference = or_nan([&] { return vcsra::analytic::ra_interference_expectation(p); });
    const double sinr_cb = or_nan([&] { return vcsra::analytic::asymptotic_sinr_cb(p); });
    const double sinr_zf = or_nan([&] { return vcsra::analytic::asymptotic_sinr_zf(p); });

    mc::ResultTable table;
    table.metadata = mc::provenance(config, 0, config.seed);
    if (config.model != vcsra::channel::ModelKind::Simplified) {
        table.metadata.emplace_back("note", "closed forms assume the simplified channel model");
    }
    table.columns = {"lambda_db", "lambda_bar", "n_c",     "n_r",     "rho_u_db",
                     "p_av_single", "p_av_multi", "ra_interference", "sinr_cb", "rate_cb",
                     "sinr_zf",   "rate_zf"};
    auto rate = [](double g) { return std::isnan(g) ? kNaN : vcsra::analytic::asymptotic_rate(g); };
    table.add_row({config.lambda_db, p.lambda_bar(), static_cast<double>(p.channels),
                   static_cast<double>(p.ra_ues), config.rho_u_db, p_sc, p_mc, interference,
                   sinr_cb, rate(sinr_cb), sinr_zf, rate(sinr_zf)});
    std::ostringstream summary;
    summary << "analytic: p_av_single=" << vcsra::format_number(p_sc)
            << " p_av_multi=" << vcsra::format_number(p_mc);
    emit(table, opts, summary.str());
    return kExitOk;
}

int run_simulate(const CommonOptions& opts) {
    const auto config = resolve_config(opts);
    const auto spec = mc::ExperimentSpec::from_config(config, opts.threads);
    const auto p = mc::estimate_p_av(spec);
    const auto rates = mc::estimate_rates(spec);

    mc::ResultTable table;
    table.metadata = mc::provenance(config, spec.trials, spec.master_seed);
    table.columns = {"p_av",        "p_av_ci",          "per_assigned_rate", "per_assigned_rate_ci",
                     mc::kUpperNoRa, mc::kLowerUnfiltered, "ra_sum_rate",     "total_sum_rate",
                     "loss_pct",    "acceptance_rate"};
    table.add_row({p.mean, p.ci_halfwidth, rates.per_assigned_rate.mean,
                   rates.per_assigned_rate.ci_halfwidth, rates.baseline_rates.at(mc::kUpperNoRa).mean,
                   rates.baseline_rates.at(mc::kLowerUnfiltered).mean, rates.ra_sum_rate.mean,
                   rates.total_sum_rate.mean, 100.0 * rates.relative_loss(),
                   rates.acceptance_rate()});
    std::ostringstream summary;
    summary << "simulate: trials=" << spec.trials << " p_av=" << vcsra::format_number(p.mean)
            << " per_assigned_rate=" << vcsra::format_number(rates.per_assigned_rate.mean)
            << " total_sum_rate=" << vcsra::format_number(rates.total_sum_rate.mean);
    emit(table, opts, summary.str());
    return kExitOk;
}

int run_sweep(const CommonOptions& opts, const std::string& axis, const std::string& grid) {
    const auto config = resolve_config(opts);
    const auto spec = mc::ExperimentSpec::from_config(config, opts.threads);
    const auto table = mc::sweep(spec, mc::parse_axis(axis), parse_grid(grid));
    emit(table, opts, "sweep: axis=" + axis + " rows=" + std::to_string(table.rows.size()));
    return kExitOk;
}

int run_reproduce(const CommonOptions& opts, const std::string& figure, double scale) {
    const std::uint64_t seed = opts.seed.value_or(1);
    const auto table = mc::reproduce_figure(figure, scale, seed, opts.threads);
    emit(table, opts, "reproduce: " + figure + " rows=" + std::to_string(table.rows.size()));
    return kExitOk;
}

int run_calibrate(const CommonOptions& opts, double target, int n_c) {
    auto config = resolve_config(opts);
    const vcsra::analytic::AvailabilityTarget goal{target, n_c};
    double analytic_db = kNaN;
    if (config.model == vcsra::channel::ModelKind::Simplified) {
        analytic_db = vcsra::analytic::calibrate_lambda(goal, config.analytic_params());
    }
    config.channels = 1;
    const auto spec = mc::ExperimentSpec::from_config(config, opts.threads);
    const double empirical_db = mc::calibrate_lambda_empirical(spec, target, n_c);

    mc::ResultTable table;
    table.metadata = mc::provenance(config, spec.trials, spec.master_seed);
    table.columns = {"model", "target_pav", "n_c", "lambda_db_analytic", "lambda_db_empirical"};
    table.add_row({vcsra::to_string(config.model), target, static_cast<double>(n_c), analytic_db,
                   empirical_db});
    std::ostringstream summary;
    summary << "calibrate: target=" << target << " n_c=" << n_c
            << " lambda_db_empirical=" << vcsra::format_number(empirical_db);
    if (!std::isnan(analytic_db)) summary << " lambda_db_analytic=" << vcsra::format_number(analytic_db);
    emit(table, opts, summary.str());
    return kExitOk;
}

bool is_usage_error(const vcsra::Error& e) {
    const auto& c = e.category();
    return c == "ParseError" || c == "ValidationError" || c == "ConfigError" ||
           c == "UnknownFigure";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual-carrier-sensing random access: closed forms, Monte-Carlo estimates, "
                 "sweeps and figure grids"};
    app.set_version_flag("--version", std::string(vcsra::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions opts;
    app.add_option("--config", opts.config_path, "Scenario file (key = value lines)");
    app.add_option("--out", opts.out_path, "CSV output path (default: stdout)");
    app.add_option("--seed", opts.seed, "Master seed");
    app.add_option("--trials", opts.trials, "Monte-Carlo trials per point");
    app.add_option("--threads", opts.threads, "Worker threads (default: VCSRA_DEFAULT_THREADS or 1)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--set", opts.set, "Override a config field, key=value (repeatable)");

    auto* analytic = app.add_subcommand("analytic", "Evaluate the closed forms (no sampling)");
    auto* simulate = app.add_subcommand("simulate", "Estimate availability and ergodic rates");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
    std::string axis, grid;
    sweep->add_option("--axis", axis, "lambda_db | n_r | m | n_c")->required();
    sweep->add_option("--grid", grid, "a:b:step or a comma-separated list")->required();

    auto* reproduce = app.add_subcommand("reproduce", "Emit the grid of one evaluation figure");
    std::string figure;
    double scale = 1.0;
    reproduce->add_option("figure", figure, "fig5 ... fig13")->required();
    reproduce->add_option("--trials-scale", scale, "Fraction of the default trial count");

    auto* calibrate = app.add_subcommand("calibrate", "Threshold for a target availability");
    double target = 0.98;
    int n_c = 100;
    calibrate->add_option("--target-pav", target, "Target multi-channel availability")->required();
    calibrate->add_option("--nc", n_c, "Number of channels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*analytic) return run_analytic(opts);
        if (*simulate) return run_simulate(opts);
        if (*sweep) return run_sweep(opts, axis, grid);
        if (*reproduce) return run_reproduce(opts, figure, scale);
        if (*calibrate) return run_calibrate(opts, target, n_c);
    } catch (const vcsra::Error& e) {
        std::cerr << "error[" << e.category() << "]: " << e.what() << '\n';
        return is_usage_error(e) ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cerr << app.help();
    return kExitUsage;
}
