#pragma once

#include <fstream>
#include <initializer_list>
#include <string>

namespace squidflux::csv {

/// Shortest round-trip decimal form of v (via std::to_chars); deterministic.
[[nodiscard]] std::string num(double v);

class Writer {
public:
    Writer(const std::string& path, const std::string& header);

    void row(std::initializer_list<std::string> cells);

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
};

}  // namespace squidflux::csv
