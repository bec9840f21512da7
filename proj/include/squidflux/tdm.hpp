#pragma once

#include <optional>
#include <string>
#include <vector>

#include "squidflux/dynamics.hpp"

namespace squidflux {

// Time-division-multiplexed control fabric: a complete binary tree of
// single-pole double-throw switches routes one shared pulse line to every
// rf-SQUID endpoint, addressed by a bit code of length equal to the depth.

enum class ChannelKind { Qubit, Coupler };

struct CableCount {
    long classical;  // one line per endpoint
    long tdm;        // ceil(log2(endpoints)) address lines + 1 pulse line
};

[[nodiscard]] CableCount cable_count(long n_qubits, long n_couplers);

struct Fabric {
    long n_qubits;
    long n_couplers;
    long n_channels;  // n_qubits + n_couplers
    int depth;        // ceil(log2(n_channels))

    [[nodiscard]] long leaves() const { return 1L << depth; }
    [[nodiscard]] ChannelKind kind(long channel) const;
    [[nodiscard]] std::string encode(long channel) const;  // MSB-first bit string
    [[nodiscard]] std::optional<long> decode(const std::string& code) const;
};

/// Builds the fabric; couplers default to 2*n_qubits (square lattice).
[[nodiscard]] Fabric build_fabric(long n_qubits, long n_couplers = -1);

struct TruthTableRow {
    std::string code;
    long channel;
    ChannelKind kind;
};

struct TruthTable {
    std::vector<TruthTableRow> used;
    std::vector<std::string> unused;  // leaf codes without a channel
};

[[nodiscard]] TruthTable truth_table(const Fabric& f);

struct DeliveryReport {
    bool delivered;
    long channel;      // -1 when no channel sits behind the addressed leaf
    double amplitude;  // phi0, echoed from the pulse
};

/// Routes one pulse through the switch tree. Throws on a malformed code.
[[nodiscard]] DeliveryReport route(const Fabric& f, const std::string& code,
                                   const FluxPulse& pulse);

struct CampaignReport {
    long channels;
    long deliveries;
    bool each_exactly_once;
    int cables_used;  // depth address lines + 1 pulse line
};

/// Addresses every channel in sequence and tallies deliveries.
[[nodiscard]] CampaignReport address_campaign(const Fabric& f, const FluxPulse& pulse);

}  // namespace squidflux
