#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsra/analytic.hpp"
#include "vcsra/beamforming.hpp"
#include "vcsra/channel.hpp"
#include "vcsra/uplink.hpp"

namespace vcsra {

inline constexpr const char* kVersion = "0.3.0";

/// Every protocol and channel knob of one scenario. Defaults follow the
/// reference setup: practical ULA model, M = 100, Q = M/2, 8 assigned UEs,
/// code length 8, azimuth in [-60, 60] degrees with a 20 degree spread and
/// half-wavelength spacing.
struct ScenarioConfig {
    channel::ModelKind model = channel::ModelKind::Practical;
    beamforming::BeamformerKind beamformer = beamforming::BeamformerKind::CB;
    int antennas = 100;            ///< M
    std::optional<int> paths;      ///< Q; unset means M / 2
    int assigned = 8;              ///< N_A
    int code_length = 8;           ///< N_L
    int ra_ues = 10;               ///< N_R
    int channels = 1;              ///< N_C
    double lambda_db = 4.0;
    double rho_v_db = std::numeric_limits<double>::infinity();  ///< +inf: noise-free sensing
    double rho_u_db = -10.0;
    double spread_deg = 20.0;
    double spacing = 0.5;
    double azimuth_min_deg = -60.0;
    double azimuth_max_deg = 60.0;
    uplink::RaReceiverMode ra_receiver_mode = uplink::RaReceiverMode::Direct;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> basis_seed;  ///< unset means `seed`
    long trials = 10000;
    long max_attempts = 10000;

    /// "key=value" strings applied on top of the defaults, in order.
    std::vector<std::string> overrides;

    int resolved_paths() const { return paths.value_or(antennas / 2); }
    std::uint64_t resolved_basis_seed() const { return basis_seed.value_or(seed); }
    double rho_u() const;

    /// Throws ValidationError naming the violated invariant.
    void validate() const;

    channel::ChannelParams channel_params() const;
    analytic::AnalyticParams analytic_params() const;

    /// Fully resolved key/value listing, in schema order.
    std::vector<std::pair<std::string, std::string>> describe() const;
};

/// Recognised configuration keys, in schema order.
const std::vector<std::string>& config_keys();

/// Applies one key/value pair. Throws ParseError (unknown key, bad value).
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value,
                   int line = 0);

/// Flat "key = value" text, '#' starts a comment, blank lines ignored.
/// Inline overrides ("key=value") are applied afterwards and win. The result
/// is validated.
ScenarioConfig parse_config(const std::string& text,
                            const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::optional<std::string>& path,
                           const std::vector<std::string>& overrides = {});

std::string to_string(channel::ModelKind kind);
std::string to_string(beamforming::BeamformerKind kind);
std::string to_string(uplink::RaReceiverMode mode);
std::string format_number(double value);

}  // namespace vcsra
