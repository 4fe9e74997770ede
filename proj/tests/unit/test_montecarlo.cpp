#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "vcsra/analytic.hpp"
#include "vcsra/errors.hpp"
#include "vcsra/montecarlo.hpp"

using namespace vcsra;
using namespace vcsra::montecarlo;

namespace {

ExperimentSpec simplified_spec(double lambda_db, long trials, std::uint64_t seed = 7) {
    ExperimentSpec spec;
    spec.scenario.model = channel::ModelKind::Simplified;
    spec.scenario.lambda_db = lambda_db;
    spec.scenario.seed = seed;
    spec.trials = trials;
    spec.master_seed = seed;
    spec.threads = 1;
    return spec;
}

}  // namespace

TEST_CASE("estimators") {
    const auto b = binomial_estimate(30, 100);
    CHECK(b.mean == 0.3);
    CHECK(b.ci_halfwidth == doctest::Approx(1.959963984540054 * std::sqrt(0.3 * 0.7 / 100)));
    CHECK_THROWS_AS(binomial_estimate(5, 0), DomainError);

    const auto m = mean_estimate({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.samples == 4);
    CHECK(m.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("parallel_for visits every index and reports the first failure") {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, 4, [&](long i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    try {
        parallel_for(100, 3, [](long i) {
            if (i == 17 || i == 60) throw DomainError("index " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()) == "index 17");
    }
}

TEST_CASE("spec validation") {
    ExperimentSpec spec;
    spec.trials = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.trials = 10;
    spec.scenario.code_length = 6;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.scenario.code_length = 8;
    spec.threads = 3;
    CHECK(spec.resolved_threads() == 3);
}

TEST_CASE("availability limits") {
    auto spec = simplified_spec(INFINITY, 200);
    CHECK(estimate_p_av(spec).mean == 1.0);
    spec.scenario.lambda_db = -200.0;
    CHECK(estimate_p_av(spec).mean == 0.0);
}

TEST_CASE("single-channel availability follows the closed form") {
    auto spec = simplified_spec(8.0, 20000);
    const double analytic_p = analytic::p_av_single(spec.scenario.analytic_params());
    const auto est = estimate_p_av(spec);
    MESSAGE("sim " << est.mean << " closed form " << analytic_p);
    CHECK(std::abs(est.mean - analytic_p) < 0.03);
}

TEST_CASE("availability curve is monotone in lambda and N_C") {
    const auto spec = simplified_spec(0.0, 3000);
    const std::vector<double> lambdas{-4, -2, 0, 2, 4, 6, 8};
    const std::vector<int> ncs{1, 10, 100};
    auto s = spec;
    s.scenario.channels = 100;
    const auto curve = estimate_availability_curve(s, lambdas, ncs);
    REQUIRE(curve.size() == lambdas.size() * ncs.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        for (std::size_t c = 0; c < ncs.size(); ++c) {
            const auto& pt = curve[l * ncs.size() + c];
            CHECK(pt.lambda_db == lambdas[l]);
            CHECK(pt.n_c == ncs[c]);
            if (c > 0) CHECK(pt.p.mean >= curve[l * ncs.size() + c - 1].p.mean);
            if (l > 0) CHECK(pt.p.mean >= curve[(l - 1) * ncs.size() + c].p.mean);
        }
    }
}

TEST_CASE("availability interval covers the closed form") {
    const double lambda_db = 8.0;
    auto spec = simplified_spec(lambda_db, 2000);
    const double analytic_p = analytic::p_av_single(spec.scenario.analytic_params());
    int covered = 0;
    const int runs = 20;
    for (int r = 0; r < runs; ++r) {
        spec.master_seed = 1000 + r;
        const auto est = estimate_p_av(spec);
        if (std::abs(est.mean - analytic_p) <= est.ci_halfwidth) ++covered;
    }
    MESSAGE(covered << " of " << runs << " intervals cover " << analytic_p);
    CHECK(covered >= 18);
}

TEST_CASE("rates without RA UEs match the upper baseline exactly") {
    auto spec = simplified_spec(9.0, 60);
    spec.scenario.ra_ues = 0;
    const auto rep = estimate_rates(spec);
    CHECK(rep.per_assigned_rate.mean == rep.baseline_rates.at(kUpperNoRa).mean);
    CHECK(rep.baseline_rates.at(kLowerUnfiltered).mean == rep.baseline_rates.at(kUpperNoRa).mean);
    CHECK(rep.ra_sum_rate.mean == 0.0);
    CHECK(rep.relative_loss() == 0.0);
    CHECK(rep.acceptance_rate() == 1.0);
}

TEST_CASE("rate ordering and the sum-rate identity") {
    for (auto kind : {beamforming::BeamformerKind::CB, beamforming::BeamformerKind::ZF}) {
        auto spec = simplified_spec(9.0, 150);
        spec.scenario.beamformer = kind;
        spec.scenario.ra_ues = 6;
        const auto rep = estimate_rates(spec);
        const double upper = rep.baseline_rates.at(kUpperNoRa).mean;
        const double lower = rep.baseline_rates.at(kLowerUnfiltered).mean;
        CHECK(upper >= rep.per_assigned_rate.mean);
        CHECK(rep.per_assigned_rate.mean >= lower);
        CHECK(rep.total_sum_rate.mean ==
              doctest::Approx(spec.scenario.assigned * rep.per_assigned_rate.mean + rep.ra_sum_rate.mean)
                  .epsilon(1e-12));
        CHECK(rep.ra_sum_rate.mean == rep.ra_sum_rate_direct.mean);
        CHECK(rep.acceptance_rate() > 0.0);
        CHECK(rep.acceptance_rate() <= 1.0);
    }
}

TEST_CASE("nested rate grid equals direct calls") {
    auto spec = simplified_spec(9.0, 40);
    const auto grid = estimate_rate_grid(spec, {0, 3, 5}, {-10.0, 0.0});
    REQUIRE(grid.size() == 2);
    REQUIRE(grid[0].size() == 3);
    for (int r = 0; r < 2; ++r) {
        for (int i = 0; i < 3; ++i) {
            auto s = spec;
            s.scenario.ra_ues = grid[r][i].ra_ues;
            s.scenario.rho_u_db = grid[r][i].rho_u_db;
            const auto direct = estimate_rates(s);
            CHECK(direct.per_assigned_rate.mean == grid[r][i].per_assigned_rate.mean);
            CHECK(direct.baseline_rates.at(kLowerUnfiltered).mean ==
                  grid[r][i].baseline_rates.at(kLowerUnfiltered).mean);
            CHECK(direct.attempts == grid[r][i].attempts);
        }
    }
    for (int r = 0; r < 2; ++r) {
        CHECK(grid[r][0].per_assigned_rate.mean >= grid[r][1].per_assigned_rate.mean);
        CHECK(grid[r][1].per_assigned_rate.mean >= grid[r][2].per_assigned_rate.mean);
    }
}

TEST_CASE("thread count does not change results") {
    auto spec = simplified_spec(9.0, 30);
    spec.scenario.ra_ues = 4;
    spec.threads = 1;
    const auto a = estimate_rates(spec);
    const auto pa = estimate_p_av(spec);
    spec.threads = 3;
    const auto b = estimate_rates(spec);
    const auto pb = estimate_p_av(spec);
    CHECK(a.per_assigned_rate.mean == b.per_assigned_rate.mean);
    CHECK(a.total_sum_rate.mean == b.total_sum_rate.mean);
    CHECK(a.attempts == b.attempts);
    CHECK(pa.mean == pb.mean);
}

TEST_CASE("practical model estimates are deterministic per seed") {
    ExperimentSpec spec;
    spec.trials = 500;
    spec.master_seed = 3;
    const auto a = simulate_strengths(spec);
    const auto b = simulate_strengths(spec);
    CHECK(a == b);
    spec.master_seed = 4;
    CHECK(simulate_strengths(spec) != a);
}

TEST_CASE("noisy sensing converges to the noise-free statistic") {
    auto spec = simplified_spec(9.0, 4000);
    const double clean = estimate_p_av(spec).mean;
    spec.scenario.rho_v_db = 60.0;
    CHECK(std::abs(estimate_p_av(spec).mean - clean) < 0.01);
    spec.scenario.rho_v_db = -10.0;
    CHECK(estimate_p_av(spec).mean < clean);
}

TEST_CASE("sweeps") {
    auto spec = simplified_spec(9.0, 40);
    spec.scenario.ra_ues = 4;

    const auto single = sweep(spec, SweepAxis::NR, {4});
    const auto direct = estimate_rates(spec);
    CHECK(single.rows.size() == 1);
    CHECK(single.number(0, "per_assigned_rate") == direct.per_assigned_rate.mean);
    CHECK(single.number(0, "p_av") == estimate_p_av(spec).mean);

    const auto nr = sweep(spec, SweepAxis::NR, {0, 2, 4, 6});
    const auto r = nr.numbers("per_assigned_rate");
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] <= r[i - 1]);

    auto pspec = spec;
    pspec.estimators = {Estimator::PAv};
    pspec.baselines = {};
    const auto lam = sweep(pspec, SweepAxis::LambdaDb, {2, 4, 6, 8, 10});
    CHECK(lam.columns == std::vector<std::string>{"lambda_db", "p_av", "p_av_ci", "p_av_analytic"});
    const auto p = lam.numbers("p_av");
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] >= p[i - 1]);

    CHECK_THROWS_AS(sweep(spec, SweepAxis::NR, {}), ConfigError);
    CHECK_THROWS_AS(sweep(spec, SweepAxis::NR, {1, 3, 2}), ConfigError);
    CHECK_THROWS_AS(sweep(spec, SweepAxis::M, {100.5}), ConfigError);
    CHECK_THROWS_AS(parse_axis("rho"), ConfigError);
    CHECK(parse_axis("n_c") == SweepAxis::NC);
}

TEST_CASE("exhausted admission yields NaN rates") {
    auto spec = simplified_spec(-30.0, 3);
    spec.scenario.ra_ues = 2;
    spec.scenario.max_attempts = 20;
    CHECK_THROWS_AS(estimate_rates(spec), AdmissionExhausted);
    const auto t = sweep(spec, SweepAxis::NR, {2});
    CHECK(std::isnan(t.number(0, "per_assigned_rate")));
    bool flagged = false;
    for (const auto& [k, v] : t.metadata) flagged = flagged || k == "admission_exhausted";
    CHECK(flagged);
}

TEST_CASE("result tables and CSV") {
    ResultTable t;
    t.columns = {"name", "value"};
    t.metadata = {{"seed", "1"}};
    t.add_row({std::string("a,b"), 0.5});
    t.add_row({std::string("plain"), INFINITY});
    CHECK_THROWS_AS(t.add_row({0.1}), DimensionError);
    CHECK(t.text(0, "name") == "a,b");
    CHECK(t.number(0, "value") == 0.5);
    CHECK_THROWS_AS(t.number(0, "name"), DomainError);
    CHECK_THROWS_AS(t.column_index("missing"), DomainError);
    std::ostringstream out;
    t.write_csv(out);
    CHECK(out.str() == "# seed: 1\nname,value\n\"a,b\",0.5\nplain,inf\n");

    ScenarioConfig c = parse_config("", {"N_R=3"});
    const auto meta = provenance(c, 10, 2);
    CHECK(meta.front().first == "vcsra_version");
    bool has_override = false;
    for (const auto& [k, v] : meta) has_override = has_override || (k == "override" && v == "N_R=3");
    CHECK(has_override);
    CHECK(meta.back() == std::pair<std::string, std::string>{"master_seed", "2"});
}

TEST_CASE("figure ids") {
    CHECK(figure_ids().size() == 9);
    CHECK_THROWS_AS(reproduce_figure("fig4", 0.1), UnknownFigure);
    CHECK_THROWS_AS(reproduce_figure("fig5", 0.0), ConfigError);
    CHECK_THROWS_AS(reproduce_figure("fig5", 1.5), ConfigError);

    const auto t = reproduce_figure("fig5", 0.005);
    CHECK(t.columns == std::vector<std::string>{"rho_v_db", "lambda_db", "n_c", "p_sim", "p_analytic", "ci"});
    CHECK(t.rows.size() == 4 * 13 * 3);
    bool tagged = false;
    for (const auto& [k, v] : t.metadata) tagged = tagged || (k == "figure" && v == "fig5");
    CHECK(tagged);
}
