#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rastertone/profile.h"

using namespace rastertone;

namespace {
const std::string kTable2Path = std::string(RASTERTONE_PROFILE_DIR) + "/table2_snr.csv";
const std::string kTable3Path =
    std::string(RASTERTONE_PROFILE_DIR) + "/table3_position.csv";
}  // namespace

TEST_CASE("bundled distance/rate profile matches the measured operating points") {
    const ChannelProfile p = ChannelProfile::from_csv_file(kTable2Path);
    CHECK(p.lookup("ViewSonic", 1.0, 20) == 34.0);
    CHECK(p.lookup("Samsung", 2.5, 20) == 5.0);
    CHECK(p.lookup("TV", 0.0, 10) == 38.0);
    CHECK(p.lookup("TV", 0.5, 5) == 30.0);
    CHECK_FALSE(p.lookup("EIZO", 2.5, 5).has_value());
    CHECK_FALSE(p.lookup("EIZO", 2.5, 10).has_value());
    CHECK_FALSE(p.lookup("EIZO", 2.5, 20).has_value());
    CHECK_FALSE(p.lookup("TV", 2.5, 20).has_value());
    CHECK_FALSE(p.lookup("NoSuchBrand", 1.0, 20).has_value());
    // brand match is case-insensitive
    CHECK(p.lookup("viewsonic", 1.0, 20) == 34.0);
    // full grid: 4 brands x 6 distances x 3 rates
    CHECK(p.rows().size() == 72);
}

TEST_CASE("profile CSV parsing") {
    SUBCASE("minimal valid table") {
        const ChannelProfile p = load_profile(
            "brand,distance_m,bit_rate_bps,snr_db\nActon,1.5,10,21\nActon,2,10,-\n");
        CHECK(p.lookup("Acton", 1.5, 10) == 21.0);
        CHECK_FALSE(p.lookup("Acton", 2.0, 10).has_value());
    }
    SUBCASE("malformed rows name the line") {
        try {
            load_profile("brand,distance_m,bit_rate_bps,snr_db\nActon,zzz,10,21\n");
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
        CHECK_THROWS_AS(load_profile("wrong,header\n"), std::runtime_error);
        CHECK_THROWS_AS(
            load_profile("brand,distance_m,bit_rate_bps,snr_db\nActon,1\n"),
            std::runtime_error);
        CHECK_THROWS_AS(load_profile(""), std::runtime_error);
    }
}

TEST_CASE("bundled position table") {
    const auto rows = load_position_table_file(kTable3Path);
    CHECK(rows.size() == 45);  // 9 screens x 5 positions
    bool found = false;
    for (const PositionRow& r : rows) {
        if (r.model == "E2216HV" && r.position == "back") {
            CHECK(r.snr_db == doctest::Approx(23.79));
            found = true;
        }
    }
    CHECK(found);
}
