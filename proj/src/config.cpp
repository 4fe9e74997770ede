#include "vcsra/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vcsra/errors.hpp"
#include "vcsra/numerics.hpp"

namespace vcsra {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

long parse_integer(const std::string& key, const std::string& value, int line) {
    long out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, key, "field '" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value, int line) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, key, "field '" + key + "' expects an unsigned integer, got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value, int line) {
    const std::string v = lower(value);
    if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    if (v == "-inf" || v == "-infinity") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used == value.size() && std::isfinite(out)) return out;
    } catch (const std::exception&) {
    }
    throw ParseError(line, key, "field '" + key + "' expects a number, got '" + value + "'");
}

int parse_int_field(const std::string& key, const std::string& value, int line) {
    const long v = parse_integer(key, value, line);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ParseError(line, key, "field '" + key + "' is out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

std::string to_string(channel::ModelKind kind) {
    return kind == channel::ModelKind::Practical ? "practical" : "simplified";
}

std::string to_string(beamforming::BeamformerKind kind) {
    return kind == beamforming::BeamformerKind::CB ? "cb" : "zf";
}

std::string to_string(uplink::RaReceiverMode mode) {
    return mode == uplink::RaReceiverMode::Direct ? "direct" : "projected";
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

double ScenarioConfig::rho_u() const { return numerics::db_to_linear(rho_u_db); }

void ScenarioConfig::validate() const {
    const int Q = resolved_paths();
    if (antennas < 1) throw ValidationError("M must be >= 1");
    if (Q < 1 || Q > antennas) throw ValidationError("Q must satisfy 1 <= Q <= M");
    if (assigned < 1) throw ValidationError("N_A must be >= 1");
    if (!numerics::is_power_of_two(code_length)) {
        throw ValidationError("N_L must be a power of two (got " + std::to_string(code_length) + ")");
    }
    if (assigned > code_length) throw ValidationError("N_A must not exceed N_L");
    if (ra_ues < 0) throw ValidationError("N_R must be >= 0");
    if (channels < 1) throw ValidationError("N_C must be >= 1");
    if (beamformer == beamforming::BeamformerKind::ZF && assigned > antennas) {
        throw ValidationError("ZF requires N_A <= M");
    }
    if (std::isnan(lambda_db)) throw ValidationError("lambda_db is NaN");
    if (std::isnan(rho_v_db) || (std::isinf(rho_v_db) && rho_v_db < 0)) {
        throw ValidationError("rho_v_db must be a number or +inf");
    }
    if (!std::isfinite(rho_u_db)) throw ValidationError("rho_u_db must be finite");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
    if (model == channel::ModelKind::Practical) {
        std::get<channel::PracticalChannelParams>(channel_params()).validate();
    }
}

channel::ChannelParams ScenarioConfig::channel_params() const {
    if (model == channel::ModelKind::Practical) {
        channel::PracticalChannelParams p;
        p.antennas = antennas;
        p.paths = resolved_paths();
        p.spacing = spacing;
        p.azimuth_min_deg = azimuth_min_deg;
        p.azimuth_max_deg = azimuth_max_deg;
        p.spread_deg = spread_deg;
        return p;
    }
    return channel::SimplifiedChannelParams{antennas, resolved_paths(), resolved_basis_seed()};
}

analytic::AnalyticParams ScenarioConfig::analytic_params() const {
    analytic::AnalyticParams p;
    p.antennas = antennas;
    p.paths = resolved_paths();
    p.assigned = assigned;
    p.lambda_db = lambda_db;
    p.channels = channels;
    p.rho_u = rho_u();
    p.ra_ues = ra_ues;
    return p;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::describe() const {
    return {
        {"model", to_string(model)},
        {"beamformer", to_string(beamformer)},
        {"M", std::to_string(antennas)},
        {"Q", std::to_string(resolved_paths())},
        {"N_A", std::to_string(assigned)},
        {"N_L", std::to_string(code_length)},
        {"N_R", std::to_string(ra_ues)},
        {"N_C", std::to_string(channels)},
        {"lambda_db", format_number(lambda_db)},
        {"rho_v_db", format_number(rho_v_db)},
        {"rho_u_db", format_number(rho_u_db)},
        {"phi_s_deg", format_number(spread_deg)},
        {"omega", format_number(spacing)},
        {"phi_a_min_deg", format_number(azimuth_min_deg)},
        {"phi_a_max_deg", format_number(azimuth_max_deg)},
        {"ra_receiver_mode", to_string(ra_receiver_mode)},
        {"seed", std::to_string(seed)},
        {"basis_seed", std::to_string(resolved_basis_seed())},
        {"trials", std::to_string(trials)},
        {"max_attempts", std::to_string(max_attempts)},
    };
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : ScenarioConfig{}.describe()) out.push_back(k);
        return out;
    }();
    return keys;
}

void apply_setting(ScenarioConfig& c, const std::string& raw_key, const std::string& raw_value,
                   int line) {
    const std::string key = lower(trim(raw_key));
    const std::string value = trim(raw_value);
    if (value.empty()) throw ParseError(line, key, "field '" + key + "' has an empty value");
    const std::string v = lower(value);

    if (key == "model") {
        if (v == "practical") {
            c.model = channel::ModelKind::Practical;
        } else if (v == "simplified") {
            c.model = channel::ModelKind::Simplified;
        } else {
            throw ParseError(line, key, "model must be 'practical' or 'simplified'");
        }
    } else if (key == "beamformer") {
        if (v == "cb") {
            c.beamformer = beamforming::BeamformerKind::CB;
        } else if (v == "zf") {
            c.beamformer = beamforming::BeamformerKind::ZF;
        } else {
            throw ParseError(line, key, "beamformer must be 'cb' or 'zf'");
        }
    } else if (key == "ra_receiver_mode") {
        if (v == "direct") {
            c.ra_receiver_mode = uplink::RaReceiverMode::Direct;
        } else if (v == "projected") {
            c.ra_receiver_mode = uplink::RaReceiverMode::Projected;
        } else {
            throw ParseError(line, key, "ra_receiver_mode must be 'direct' or 'projected'");
        }
    } else if (key == "m") {
        c.antennas = parse_int_field(key, value, line);
    } else if (key == "q") {
        c.paths = parse_int_field(key, value, line);
    } else if (key == "n_a") {
        c.assigned = parse_int_field(key, value, line);
    } else if (key == "n_l") {
        c.code_length = parse_int_field(key, value, line);
    } else if (key == "n_r") {
        c.ra_ues = parse_int_field(key, value, line);
    } else if (key == "n_c") {
        c.channels = parse_int_field(key, value, line);
    } else if (key == "lambda_db") {
        c.lambda_db = parse_real(key, value, line);
    } else if (key == "rho_v_db") {
        c.rho_v_db = parse_real(key, value, line);
    } else if (key == "rho_u_db") {
        c.rho_u_db = parse_real(key, value, line);
    } else if (key == "phi_s_deg") {
        c.spread_deg = parse_real(key, value, line);
    } else if (key == "omega") {
        c.spacing = parse_real(key, value, line);
    } else if (key == "phi_a_min_deg") {
        c.azimuth_min_deg = parse_real(key, value, line);
    } else if (key == "phi_a_max_deg") {
        c.azimuth_max_deg = parse_real(key, value, line);
    } else if (key == "seed") {
        c.seed = parse_unsigned(key, value, line);
    } else if (key == "basis_seed") {
        c.basis_seed = parse_unsigned(key, value, line);
    } else if (key == "trials") {
        c.trials = parse_integer(key, value, line);
    } else if (key == "max_attempts") {
        c.max_attempts = parse_integer(key, value, line);
    } else {
        throw ParseError(line, key, "unknown field '" + key + "'");
    }
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, line, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1), line_no);
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.field(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError(0, item, "override '" + item + "' is not of the form key=value");
        }
        apply_setting(config, item.substr(0, eq), item.substr(eq + 1), 0);
        config.overrides.push_back(trim(item));
    }
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::optional<std::string>& path,
                           const std::vector<std::string>& overrides) {
    std::string text;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ParseError(0, "", "cannot open config file '" + *path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_config(text, overrides);
}

}  // namespace vcsra
