#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vcsra/analytic.hpp"
#include "vcsra/beamforming.hpp"
#include "vcsra/channel.hpp"
#include "vcsra/config.hpp"
#include "vcsra/errors.hpp"
#include "vcsra/montecarlo.hpp"
#include "vcsra/vcs.hpp"

namespace py = pybind11;
namespace mc = vcsra::montecarlo;
using vcsra::ComplexMatrix;

namespace {

// Scenario from optional file text plus "key=value" overrides, as in the CLI.
vcsra::ScenarioConfig scenario(const std::string& text, const std::vector<std::string>& overrides) {
    return vcsra::parse_config(text, overrides);
}

mc::ExperimentSpec experiment(const std::string& text, const std::vector<std::string>& overrides,
                              int threads) {
    return mc::ExperimentSpec::from_config(scenario(text, overrides), threads);
}

py::dict estimate_dict(const mc::Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["ci_halfwidth"] = e.ci_halfwidth;
    d["samples"] = e.samples;
    return d;
}

py::dict report_dict(const mc::RateReport& r) {
    py::dict d;
    d["ra_ues"] = r.ra_ues;
    d["rho_u_db"] = r.rho_u_db;
    d["per_assigned_rate"] = estimate_dict(r.per_assigned_rate);
    d["ra_sum_rate"] = estimate_dict(r.ra_sum_rate);
    d["ra_sum_rate_direct"] = estimate_dict(r.ra_sum_rate_direct);
    d["ra_sum_rate_projected"] = estimate_dict(r.ra_sum_rate_projected);
    d["total_sum_rate"] = estimate_dict(r.total_sum_rate);
    py::dict baselines;
    for (const auto& [name, e] : r.baseline_rates) baselines[py::str(name)] = estimate_dict(e);
    d["baseline_rates"] = baselines;
    d["trials_used"] = r.trials_used;
    d["admitted"] = r.admitted;
    d["attempts"] = r.attempts;
    d["acceptance_rate"] = r.acceptance_rate();
    d["relative_loss"] = r.relative_loss();
    d["ra_receiver_fallbacks"] = r.ra_receiver_fallbacks;
    return d;
}

vcsra::beamforming::BeamformerSet beamformers_for(const ComplexMatrix& H_A, const std::string& kind) {
    if (kind == "cb") return vcsra::beamforming::cb_beamformers(H_A);
    if (kind == "zf") return vcsra::beamforming::zf_beamformers(H_A);
    throw vcsra::ConfigError("beamformer must be 'cb' or 'zf'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Virtual-carrier-sensing random access for massive MIMO";
    m.attr("__version__") = vcsra::kVersion;

    static py::exception<vcsra::Error> error(m, "VcsraError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const vcsra::Error& e) {
            PyErr_SetString(error.ptr(), (e.category() + ": " + e.what()).c_str());
        }
    });

    // Closed forms.
    py::class_<vcsra::analytic::AnalyticParams>(m, "AnalyticParams")
        .def(py::init([](int antennas, int paths, int assigned, double lambda_db, int channels,
                         double rho_u, int ra_ues) {
                 vcsra::analytic::AnalyticParams p{antennas, paths,   assigned, lambda_db,
                                                   channels, rho_u, ra_ues};
                 p.validate();
                 return p;
             }),
             py::arg("antennas") = 100, py::arg("paths") = 50, py::arg("assigned") = 8,
             py::arg("lambda_db") = 0.0, py::arg("channels") = 1, py::arg("rho_u") = 0.1,
             py::arg("ra_ues") = 0)
        .def_readwrite("antennas", &vcsra::analytic::AnalyticParams::antennas)
        .def_readwrite("paths", &vcsra::analytic::AnalyticParams::paths)
        .def_readwrite("assigned", &vcsra::analytic::AnalyticParams::assigned)
        .def_readwrite("lambda_db", &vcsra::analytic::AnalyticParams::lambda_db)
        .def_readwrite("channels", &vcsra::analytic::AnalyticParams::channels)
        .def_readwrite("rho_u", &vcsra::analytic::AnalyticParams::rho_u)
        .def_readwrite("ra_ues", &vcsra::analytic::AnalyticParams::ra_ues)
        .def_property_readonly("lambda_bar", &vcsra::analytic::AnalyticParams::lambda_bar)
        .def_property_readonly("tr_phi2", &vcsra::analytic::AnalyticParams::tr_phi2)
        .def("__repr__", [](const vcsra::analytic::AnalyticParams& p) {
            std::ostringstream s;
            s << "AnalyticParams(M=" << p.antennas << ", Q=" << p.paths << ", N_A=" << p.assigned
              << ", lambda_db=" << p.lambda_db << ", N_C=" << p.channels << ", rho_u=" << p.rho_u
              << ", N_R=" << p.ra_ues << ")";
            return s.str();
        });

    m.def("pdf_ybar", &vcsra::analytic::pdf_ybar, py::arg("y"), py::arg("params"));
    m.def("p_av_single", &vcsra::analytic::p_av_single, py::arg("params"),
          "Single-channel availability at params.lambda_db.");
    m.def("p_av_multi", &vcsra::analytic::p_av_multi, py::arg("p_sc"), py::arg("n_c"));
    m.def("ra_interference_expectation", &vcsra::analytic::ra_interference_expectation,
          py::arg("params"));
    m.def("asymptotic_sinr_cb", &vcsra::analytic::asymptotic_sinr_cb, py::arg("params"));
    m.def("asymptotic_sinr_zf", &vcsra::analytic::asymptotic_sinr_zf, py::arg("params"));
    m.def("asymptotic_rate", &vcsra::analytic::asymptotic_rate, py::arg("gamma_bar"));
    m.def(
        "calibrate_lambda",
        [](const vcsra::analytic::AnalyticParams& params, std::optional<double> target_pav, int n_c,
           std::optional<double> interference_budget) {
            if (target_pav.has_value() == interference_budget.has_value()) {
                throw vcsra::ConfigError("give exactly one of target_pav and interference_budget");
            }
            if (target_pav) {
                return vcsra::analytic::calibrate_lambda(
                    vcsra::analytic::AvailabilityTarget{*target_pav, n_c}, params);
            }
            return vcsra::analytic::calibrate_lambda(
                vcsra::analytic::InterferenceBudget{*interference_budget}, params);
        },
        py::arg("params"), py::kw_only(), py::arg("target_pav") = py::none(), py::arg("n_c") = 1,
        py::arg("interference_budget") = py::none(), "Threshold in dB from the closed forms.");

    // Channels, beamformers and sensing.
    m.def(
        "draw_channels",
        [](int n_ues, std::uint64_t seed, std::uint64_t stream, const std::string& config,
           const std::vector<std::string>& overrides) {
            const vcsra::channel::ChannelGenerator gen(scenario(config, overrides).channel_params());
            vcsra::numerics::RngStream rng(seed, stream);
            return gen.draw(n_ues, rng);
        },
        py::arg("n_ues"), py::arg("seed") = 1, py::arg("stream") = 0, py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{}, "M x n_ues complex channel matrix.");
    m.def(
        "cb_beamformers", [](const ComplexMatrix& H) { return beamformers_for(H, "cb").rows; },
        py::arg("H_A"), "Rows b_i^T = h_i^H.");
    m.def(
        "zf_beamformers", [](const ComplexMatrix& H) { return beamformers_for(H, "zf").rows; },
        py::arg("H_A"), "Rows sqrt(M) a_i^T / ||a_i|| of the left pseudo-inverse.");
    m.def(
        "orthogonal_complement",
        [](const ComplexMatrix& H) { return vcsra::beamforming::orthogonal_complement(H).matrix; },
        py::arg("H_A"));
    m.def(
        "hadamard", [](int n) { return Eigen::MatrixXi(vcsra::numerics::hadamard(n).matrix); },
        py::arg("n"));
    m.def(
        "noiseless_strength",
        [](const ComplexMatrix& H_A, const ComplexMatrix& H, const std::string& beamformer) {
            return vcsra::vcs::noiseless_strength(beamformers_for(H_A, beamformer), H);
        },
        py::arg("H_A"), py::arg("H"), py::arg("beamformer") = "cb",
        "Sensing strength Y of every column of H against the assigned UEs.");
    m.def(
        "sample_admitted",
        [](const ComplexMatrix& H_A, int n_r, double lambda_db, const std::string& beamformer,
           std::uint64_t seed, const std::string& config, const std::vector<std::string>& overrides) {
            const vcsra::channel::ChannelGenerator gen(scenario(config, overrides).channel_params());
            vcsra::numerics::RngStream rng(seed, 0);
            const auto s = vcsra::vcs::sample_admitted_ra_ues(beamformers_for(H_A, beamformer), n_r,
                                                              lambda_db, gen, rng);
            return py::make_tuple(s.channels, s.attempts);
        },
        py::arg("H_A"), py::arg("n_r"), py::arg("lambda_db"), py::arg("beamformer") = "cb",
        py::arg("seed") = 1, py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
        "(admitted channels, attempts) from rejection sampling.");

    // Configuration.
    m.def("config_keys", &vcsra::config_keys);
    m.def(
        "describe_config",
        [](const std::string& config, const std::vector<std::string>& overrides) {
            return scenario(config, overrides).describe();
        },
        py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
        "Resolved (key, value) pairs of a scenario.");

    // Monte-Carlo.
    py::class_<mc::ResultTable>(m, "ResultTable")
        .def_readonly("columns", &mc::ResultTable::columns)
        .def_readonly("rows", &mc::ResultTable::rows)
        .def_readonly("metadata", &mc::ResultTable::metadata)
        .def("column", &mc::ResultTable::numbers, py::arg("name"))
        .def("to_csv", [](const mc::ResultTable& t) {
            std::ostringstream out;
            t.write_csv(out);
            return out.str();
        })
        .def("__len__", [](const mc::ResultTable& t) { return t.rows.size(); });

    m.def(
        "estimate_p_av",
        [](const std::string& config, const std::vector<std::string>& overrides, int threads) {
            const auto e = [&] {
                py::gil_scoped_release release;
                return mc::estimate_p_av(experiment(config, overrides, threads));
            }();
            return estimate_dict(e);
        },
        py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
        py::arg("threads") = 0);
    m.def(
        "estimate_rates",
        [](const std::string& config, const std::vector<std::string>& overrides, int threads) {
            const auto rep = [&] {
                py::gil_scoped_release release;
                return mc::estimate_rates(experiment(config, overrides, threads));
            }();
            return report_dict(rep);
        },
        py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
        py::arg("threads") = 0);
    m.def(
        "calibrate_lambda_empirical",
        [](double target_pav, int n_c, const std::string& config,
           const std::vector<std::string>& overrides, int threads) {
            return mc::calibrate_lambda_empirical(experiment(config, overrides, threads), target_pav,
                                                  n_c);
        },
        py::arg("target_pav"), py::arg("n_c"), py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sweep",
        [](const std::string& axis, const std::vector<double>& grid, const std::string& config,
           const std::vector<std::string>& overrides, int threads) {
            return mc::sweep(experiment(config, overrides, threads), mc::parse_axis(axis), grid);
        },
        py::arg("axis"), py::arg("grid"), py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def("figure_ids", &mc::figure_ids);
    m.def("reproduce_figure", &mc::reproduce_figure, py::arg("figure_id"),
          py::arg("trials_scale") = 1.0, py::arg("seed") = 1, py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
}
