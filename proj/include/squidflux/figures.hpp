#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "squidflux/config.hpp"

namespace squidflux {

/// One quantitative anchor verified while regenerating a figure's data.
struct CheckRecord {
    std::string check;
    double expected;
    double got;
    double tolerance;
    bool pass;
};

struct FigureOutput {
    std::string tag;
    std::vector<std::string> files;
    std::vector<CheckRecord> checks;

    [[nodiscard]] bool all_pass() const;
};

/// Regenerates the data behind one figure and verifies its checkable anchors.
/// Valid tags: 1c 1d 1e 1f 2a 2b 2c 2d s1 s2 s3 s4 3.
[[nodiscard]] FigureOutput reproduce_figure(const std::string& tag, const CircuitConfig& cfg,
                                            const std::string& outdir, std::uint64_t seed,
                                            int threads);

[[nodiscard]] const std::vector<std::string>& figure_tags();

/// Serializes checks to the summary record format
/// [{check, expected, got, tolerance, pass}, ...].
[[nodiscard]] std::string checks_to_json(const FigureOutput& out);

}  // namespace squidflux
