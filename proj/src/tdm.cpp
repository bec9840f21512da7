#include "squidflux/tdm.hpp"

#include <stdexcept>
#include <vector>

namespace squidflux {

namespace {

int ceil_log2(long n) {
    int depth = 0;
    long span = 1;
    while (span < n) {
        span <<= 1;
        ++depth;
    }
    return depth;
}

}  // namespace

CableCount cable_count(long n_qubits, long n_couplers) {
    if (n_qubits < 1 || n_couplers < 0) {
        throw std::invalid_argument("cable_count: need n_qubits >= 1 and n_couplers >= 0");
    }
    const long channels = n_qubits + n_couplers;
    return {channels, ceil_log2(channels) + 1};
}

ChannelKind Fabric::kind(long channel) const {
    return channel < n_qubits ? ChannelKind::Qubit : ChannelKind::Coupler;
}

std::string Fabric::encode(long channel) const {
    if (channel < 0 || channel >= n_channels) {
        throw std::out_of_range("Fabric::encode: channel out of range");
    }
    std::string code(static_cast<std::size_t>(depth), '0');
    for (int bit = 0; bit < depth; ++bit) {
        if (channel & (1L << (depth - 1 - bit))) {
            code[static_cast<std::size_t>(bit)] = '1';
        }
    }
    return code;
}

std::optional<long> Fabric::decode(const std::string& code) const {
    if (static_cast<int>(code.size()) != depth) {
        throw std::invalid_argument("Fabric::decode: code length does not match tree depth");
    }
    long leaf = 0;
    for (char bit : code) {
        if (bit != '0' && bit != '1') {
            throw std::invalid_argument("Fabric::decode: code must be a 0/1 string");
        }
        leaf = (leaf << 1) | (bit == '1' ? 1 : 0);
    }
    if (leaf >= n_channels) return std::nullopt;
    return leaf;
}

Fabric build_fabric(long n_qubits, long n_couplers) {
    if (n_couplers < 0) n_couplers = 2 * n_qubits;
    if (n_qubits < 1 || n_couplers < 0) {
        throw std::invalid_argument("build_fabric: need n_qubits >= 1 and n_couplers >= 0");
    }
    Fabric f;
    f.n_qubits = n_qubits;
    f.n_couplers = n_couplers;
    f.n_channels = n_qubits + n_couplers;
    f.depth = ceil_log2(f.n_channels);
    return f;
}

TruthTable truth_table(const Fabric& f) {
    TruthTable table;
    table.used.reserve(static_cast<std::size_t>(f.n_channels));
    for (long ch = 0; ch < f.n_channels; ++ch) {
        table.used.push_back({f.encode(ch), ch, f.kind(ch)});
    }
    for (long leaf = f.n_channels; leaf < f.leaves(); ++leaf) {
        std::string code(static_cast<std::size_t>(f.depth), '0');
        for (int bit = 0; bit < f.depth; ++bit) {
            if (leaf & (1L << (f.depth - 1 - bit))) {
                code[static_cast<std::size_t>(bit)] = '1';
            }
        }
        table.unused.push_back(code);
    }
    return table;
}

DeliveryReport route(const Fabric& f, const std::string& code, const FluxPulse& pulse) {
    const auto channel = f.decode(code);  // throws on malformed codes
    if (!channel) {
        return {false, -1, pulse.amplitude};
    }
    return {true, *channel, pulse.amplitude};
}

CampaignReport address_campaign(const Fabric& f, const FluxPulse& pulse) {
    std::vector<long> hits(static_cast<std::size_t>(f.n_channels), 0);
    long deliveries = 0;
    for (long ch = 0; ch < f.n_channels; ++ch) {
        const DeliveryReport report = route(f, f.encode(ch), pulse);
        if (report.delivered) {
            ++hits[static_cast<std::size_t>(report.channel)];
            ++deliveries;
        }
    }
    bool once = true;
    for (long h : hits) {
        if (h != 1) once = false;
    }
    return {f.n_channels, deliveries, once, f.depth + 1};
}

}  // namespace squidflux
