#include "squidflux/config.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "squidflux/csv.hpp"

namespace squidflux {

namespace {

constexpr std::array<const char*, 9> kRequiredKeys = {
    "ic_uA", "l_nH", "c_pF", "r_ohm", "m12_pH", "m13_pH", "m23_pH", "f01max_GHz",
    "env_flux_phi0"};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double want(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw ConfigError("config: missing key '" + key + "'");
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + it->second + "'");
    }
}

}  // namespace

std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: '" + path + "' line " + std::to_string(line_no) +
                              " is not of the form key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

CircuitConfig parse_circuit_config(const std::map<std::string, std::string>& kv) {
    for (const char* key : kRequiredKeys) {
        if (kv.find(key) == kv.end()) {
            throw ConfigError("config: missing key '" + std::string(key) + "'");
        }
    }
    CircuitConfig cfg;
    cfg.squid.ic = want(kv, "ic_uA") * 1e-6;
    cfg.squid.l = want(kv, "l_nH") * 1e-9;
    cfg.squid.c = want(kv, "c_pF") * 1e-12;
    cfg.squid.r = want(kv, "r_ohm");
    cfg.coupling.m12 = want(kv, "m12_pH") * 1e-12;
    cfg.coupling.m13 = want(kv, "m13_pH") * 1e-12;
    cfg.coupling.m23 = want(kv, "m23_pH") * 1e-12;
    cfg.coupling.l = cfg.squid.l;
    cfg.transmon.f01_max = want(kv, "f01max_GHz");
    cfg.transmon.ec = kv.count("ec_GHz") ? want(kv, "ec_GHz") : 0.0;
    cfg.env_flux = want(kv, "env_flux_phi0");
    cfg.squid.validate();
    cfg.coupling.validate();
    cfg.transmon.validate();
    return cfg;
}

CircuitConfig load_circuit_config(const std::string& path) {
    return parse_circuit_config(read_key_values(path));
}

void save_circuit_config(const CircuitConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("config: cannot write '" + path + "'");
    }
    out << "ic_uA = " << csv::num(cfg.squid.ic * 1e6) << "\n"
        << "l_nH = " << csv::num(cfg.squid.l * 1e9) << "\n"
        << "c_pF = " << csv::num(cfg.squid.c * 1e12) << "\n"
        << "r_ohm = " << csv::num(cfg.squid.r) << "\n"
        << "m12_pH = " << csv::num(cfg.coupling.m12 * 1e12) << "\n"
        << "m13_pH = " << csv::num(cfg.coupling.m13 * 1e12) << "\n"
        << "m23_pH = " << csv::num(cfg.coupling.m23 * 1e12) << "\n"
        << "f01max_GHz = " << csv::num(cfg.transmon.f01_max) << "\n";
    if (cfg.transmon.ec != 0.0) {
        out << "ec_GHz = " << csv::num(cfg.transmon.ec) << "\n";
    }
    out << "env_flux_phi0 = " << csv::num(cfg.env_flux) << "\n";
}

}  // namespace squidflux
