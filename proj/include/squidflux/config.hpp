#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "squidflux/params.hpp"
#include "squidflux/qubitmap.hpp"

namespace squidflux {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full circuit description loaded from a flat key=value file. Keys:
/// ic_uA, l_nH, c_pF, r_ohm, m12_pH, m13_pH, m23_pH, f01max_GHz, env_flux_phi0
struct CircuitConfig {
    SquidParams squid;
    CouplingNetwork coupling;
    TransmonModel transmon;
    double env_flux = 0.0;  // phi0
};

/// key = value pairs; '#' starts a comment, blank lines are skipped.
[[nodiscard]] std::map<std::string, std::string> read_key_values(const std::string& path);

/// Builds a CircuitConfig; a missing key raises ConfigError naming the first
/// absent key in canonical order.
[[nodiscard]] CircuitConfig parse_circuit_config(const std::map<std::string, std::string>& kv);

[[nodiscard]] CircuitConfig load_circuit_config(const std::string& path);

void save_circuit_config(const CircuitConfig& cfg, const std::string& path);

}  // namespace squidflux
