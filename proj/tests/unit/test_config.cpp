#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "vcsra/config.hpp"
#include "vcsra/errors.hpp"

using namespace vcsra;

TEST_CASE("empty text yields the reference scenario") {
    const auto c = parse_config("");
    CHECK(c.model == channel::ModelKind::Practical);
    CHECK(c.beamformer == beamforming::BeamformerKind::CB);
    CHECK(c.antennas == 100);
    CHECK(c.resolved_paths() == 50);
    CHECK(c.assigned == 8);
    CHECK(c.code_length == 8);
    CHECK(c.lambda_db == 4.0);
    CHECK(std::isinf(c.rho_v_db));
    CHECK(c.rho_u_db == -10.0);
    CHECK(c.spread_deg == 20.0);
    CHECK(c.spacing == 0.5);
    CHECK(c.azimuth_min_deg == -60.0);
    CHECK(c.azimuth_max_deg == 60.0);
    CHECK(c.resolved_basis_seed() == c.seed);
    CHECK(c.rho_u() == doctest::Approx(0.1));
    CHECK(c.overrides.empty());
}

TEST_CASE("keys, comments and whitespace") {
    const auto c = parse_config(
        "# scenario\n"
        "model = simplified   # inline comment\n"
        "\n"
        "  M=200\n"
        "Q = 40\n"
        "beamformer = ZF\n"
        "rho_v_db = inf\n"
        "lambda_db = -2.5\n"
        "ra_receiver_mode = projected\n"
        "basis_seed = 9\n");
    CHECK(c.model == channel::ModelKind::Simplified);
    CHECK(c.antennas == 200);
    CHECK(c.resolved_paths() == 40);
    CHECK(c.beamformer == beamforming::BeamformerKind::ZF);
    CHECK(c.lambda_db == -2.5);
    CHECK(c.ra_receiver_mode == uplink::RaReceiverMode::Projected);
    CHECK(c.resolved_basis_seed() == 9);
    CHECK(c.analytic_params().lambda_bar() == doctest::Approx(40 * std::pow(10.0, -0.25) / 200));
}

TEST_CASE("invalid scenarios are rejected") {
    CHECK_THROWS_AS(parse_config("N_L = 6\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("Q = 200\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("N_A = 9\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("N_C = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("trials = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("rho_v_db = -inf\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("phi_s_deg = -1\n"), ValidationError);
}

TEST_CASE("parse errors carry line and field") {
    try {
        parse_config("M = 100\n\nN_R = lots\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "n_r");
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(e.category() == "ParseError");
    }
    CHECK_THROWS_AS(parse_config("colour = blue\n"), ParseError);
    CHECK_THROWS_AS(parse_config("just words\n"), ParseError);
    CHECK_THROWS_AS(parse_config("model = fancy\n"), ParseError);
    CHECK_THROWS_AS(parse_config("M = 10.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("lambda_db =\n"), ParseError);
}

TEST_CASE("overrides win and are recorded") {
    const auto c = parse_config("N_R = 4\nlambda_db = 1\n", {"N_R=7", "lambda_db = 3"});
    CHECK(c.ra_ues == 7);
    CHECK(c.lambda_db == 3.0);
    REQUIRE(c.overrides.size() == 2);
    CHECK(c.overrides[0] == "N_R=7");
    CHECK_THROWS_AS(parse_config("", {"N_R"}), ParseError);
    CHECK_THROWS_AS(parse_config("", {"N_L=12"}), ValidationError);
}

TEST_CASE("describe lists every key once") {
    const auto c = parse_config("");
    const auto d = c.describe();
    CHECK(d.size() == config_keys().size());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i].first == config_keys()[i]);

    ScenarioConfig round;
    for (const auto& [k, v] : d) apply_setting(round, k, v);
    CHECK(round.describe() == d);
}

TEST_CASE("files load and missing files fail") {
    const std::string path = "vcsra_test_config.txt";
    {
        std::ofstream out(path);
        out << "N_C = 100\nseed = 5\n";
    }
    const auto c = load_config(path, {"seed=6"});
    CHECK(c.channels == 100);
    CHECK(c.seed == 6);
    CHECK_THROWS_AS(load_config(std::string("/nonexistent/vcsra.cfg")), ParseError);
    CHECK(load_config(std::nullopt).antennas == 100);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-4.0) == "-4");
}
