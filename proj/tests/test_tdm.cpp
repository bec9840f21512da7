#include <doctest.h>

#include <cmath>
#include <set>

#include "squidflux/tdm.hpp"

using namespace squidflux;

namespace {
FluxPulse unit_pulse() {
    FluxPulse pulse;
    pulse.amplitude = 49.4;
    pulse.duration = 1e-9;
    pulse.rise_time = 0.0;
    return pulse;
}
}  // namespace

TEST_CASE("cable counts") {
    SUBCASE("64-qubit square lattice") {
        const CableCount c = cable_count(64, 128);
        CHECK(c.classical == 192);
        CHECK(c.tdm == 9);
    }
    SUBCASE("smallest lattice") {
        const CableCount c = cable_count(1, 2);
        CHECK(c.classical == 3);
        CHECK(c.tdm == 3);
    }
    SUBCASE("saving factor grows without bound") {
        const CableCount c = cable_count(10000, 20000);
        CHECK(c.classical == 30000);
        CHECK(c.tdm == 16);
        CHECK(c.classical / c.tdm == 1875);
    }
    SUBCASE("invalid counts") {
        CHECK_THROWS_AS(cable_count(0, 0), std::invalid_argument);
    }
}

TEST_CASE("small fabric address codes") {
    const Fabric f = build_fabric(1, 2);  // 3 channels
    CHECK(f.depth == 2);
    const TruthTable table = truth_table(f);
    REQUIRE(table.used.size() == 3);
    CHECK(table.used[0].code == "00");
    CHECK(table.used[1].code == "01");
    CHECK(table.used[2].code == "10");
    REQUIRE(table.unused.size() == 1);
    CHECK(table.unused[0] == "11");
    CHECK(table.used[0].kind == ChannelKind::Qubit);
    CHECK(table.used[1].kind == ChannelKind::Coupler);
}

TEST_CASE("64-qubit fabric truth table") {
    const Fabric f = build_fabric(64);  // couplers default to 128
    CHECK(f.n_channels == 192);
    CHECK(f.depth == 8);
    const TruthTable table = truth_table(f);
    CHECK(table.used.size() == 192);
    CHECK(table.unused.size() == 64);

    std::set<std::string> codes;
    for (const TruthTableRow& row : table.used) codes.insert(row.code);
    CHECK(codes.size() == 192);  // bijection
}

TEST_CASE("encode/decode round trip") {
    const Fabric f = build_fabric(64);
    for (long ch = 0; ch < f.n_channels; ++ch) {
        const auto back = f.decode(f.encode(ch));
        REQUIRE(back.has_value());
        CHECK(*back == ch);
    }
}

TEST_CASE("routing") {
    const Fabric small = build_fabric(1, 2);
    SUBCASE("used code delivers exactly once") {
        const DeliveryReport r = route(small, "01", unit_pulse());
        CHECK(r.delivered);
        CHECK(r.channel == 1);
        CHECK(r.amplitude == doctest::Approx(49.4));
    }
    SUBCASE("unused code delivers nowhere") {
        const DeliveryReport r = route(small, "11", unit_pulse());
        CHECK(!r.delivered);
        CHECK(r.channel == -1);
    }
    SUBCASE("malformed code length") {
        CHECK_THROWS_AS(route(small, "011", unit_pulse()), std::invalid_argument);
        CHECK_THROWS_AS(route(small, "0", unit_pulse()), std::invalid_argument);
        CHECK_THROWS_AS(route(small, "0x", unit_pulse()), std::invalid_argument);
    }
}

TEST_CASE("exhaustive campaign on the 64-qubit fabric") {
    const Fabric f = build_fabric(64);
    const CampaignReport report = address_campaign(f, unit_pulse());
    CHECK(report.channels == 192);
    CHECK(report.deliveries == 192);
    CHECK(report.each_exactly_once);
    CHECK(report.cables_used == 9);
}

TEST_CASE("delivery uniqueness up to 4096 channels") {
    for (long channels : {5L, 64L, 500L, 4096L}) {
        const Fabric f = build_fabric(channels, 0);
        long deliveries = 0;
        std::set<long> hit;
        const TruthTable table = truth_table(f);
        for (const TruthTableRow& row : table.used) {
            const DeliveryReport r = route(f, row.code, unit_pulse());
            REQUIRE(r.delivered);
            CHECK(!hit.count(r.channel));
            hit.insert(r.channel);
            ++deliveries;
        }
        for (const std::string& code : table.unused) {
            CHECK(!route(f, code, unit_pulse()).delivered);
        }
        CHECK(deliveries == f.n_channels);
    }
}

TEST_CASE("cable count is monotone and steps at powers of two") {
    long prev = cable_count(1, 0).tdm;
    for (long ch = 2; ch <= 1025; ++ch) {
        const long tdm = cable_count(ch, 0).tdm;
        CHECK(tdm >= prev);
        const bool crossed = (ch & (ch - 1)) == 0 ? false : ((ch - 1) & (ch - 2)) == 0;
        if (crossed) {
            CHECK(tdm == prev + 1);
        }
        prev = tdm;
    }
}

TEST_CASE("route composed with the truth table is consistent") {
    const Fabric f = build_fabric(23, 41);
    for (long ch = 0; ch < f.n_channels; ++ch) {
        const DeliveryReport r = route(f, f.encode(ch), unit_pulse());
        REQUIRE(r.delivered);
        CHECK(r.channel == ch);
    }
}
