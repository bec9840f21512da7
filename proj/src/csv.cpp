#include "squidflux/csv.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace squidflux::csv {

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Writer::Writer(const std::string& path, const std::string& header)
    : out_(path), path_(path) {
    if (!out_) {
        throw std::runtime_error("csv: cannot write '" + path + "'");
    }
    columns_ = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    out_ << header << "\n";
}

void Writer::row(std::initializer_list<std::string> cells) {
    if (cells.size() != columns_) {
        throw std::logic_error("csv: row width does not match header in '" + path_ + "'");
    }
    bool first = true;
    for (const std::string& cell : cells) {
        if (!first) out_ << ',';
        out_ << cell;
        first = false;
    }
    out_ << "\n";
}

}  // namespace squidflux::csv
