#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rastertone/sweep.h"

using namespace rastertone;

namespace {

SweepConfig base_config() {
    SweepConfig c;
    c.timing = make_timing(1680, 1050, 60);
    c.schemes = {Scheme::ook};
    c.bit_rates = {20};
    c.packets_per_point = 10;
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("noiseless sweep point has zero BER") {
    SweepConfig c = base_config();
    c.snr_points = {SnrPoint{std::numeric_limits<double>::infinity(), {}}};
    const SweepReport r = run_sweep(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.skipped.empty());
    CHECK(r.rows[0].packets_ok == 10);
    CHECK(r.rows[0].bit_errors == 0);
    CHECK(r.rows[0].ber == 0.0);
    CHECK(r.rows[0].throughput_bps_effective > 0.0);
}

TEST_CASE("sweep report row grid and skip accounting") {
    // Row count is the grid size minus skips, each skip logged with a reason.
    SweepConfig c = base_config();
    c.schemes = {Scheme::ook, Scheme::fsk};
    c.bit_rates = {20, 7};  // 7 bps does not divide 60 Hz -> skipped points
    c.snr_points = {SnrPoint{std::numeric_limits<double>::infinity(), {}}};
    c.packets_per_point = 2;
    const SweepReport r = run_sweep(c);
    CHECK(r.rows.size() == 2);
    REQUIRE(r.skipped.size() == 2);
    for (const SweepSkip& skip : r.skipped) {
        CHECK(skip.bit_rate == 7);
        CHECK_FALSE(skip.reason.empty());
    }
}

TEST_CASE("profile-backed points resolve the tabulated SNR") {
    const ChannelProfile profile = load_profile(
        "brand,distance_m,bit_rate_bps,snr_db\nViewSonic,1,20,34\nEIZO,2.5,20,-\n");
    SweepConfig c = base_config();
    c.packets_per_point = 2;
    SnrPoint measured;
    measured.profile_key = ChannelProfile::Row{"ViewSonic", 1.0, 20, {}};
    SnrPoint missing;
    missing.profile_key = ChannelProfile::Row{"EIZO", 2.5, 20, {}};
    c.snr_points = {measured, missing};
    const SweepReport r = run_sweep(c, &profile);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].snr_db == 34.0);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].reason.find("no measurement") != std::string::npos);
}

TEST_CASE("sweeps are deterministic under a fixed seed") {
    SweepConfig c = base_config();
    c.packets_per_point = 5;
    c.snr_points = {SnrPoint{20.0, {}}};
    const std::string a = run_sweep(c).to_csv();
    const std::string b = run_sweep(c).to_csv();
    CHECK(a == b);
}

TEST_CASE("brightness sweep reports strictly increasing SNR") {
    SweepConfig c = base_config();
    c.packets_per_point = 3;
    c.snr_points = {SnrPoint{{}, {}}};
    c.brightness_levels = {1, 3, 7, 15, 255};
    c.fixed_noise_sigma = 2e-4;
    const SweepReport r = run_sweep(c);
    REQUIRE(r.rows.size() == 5);
    CHECK(r.skipped.empty());
    double prev = -1e9;
    for (const SweepRow& row : r.rows) {
        CHECK(row.measured_snr_db > prev);
        prev = row.measured_snr_db;
    }
}

TEST_CASE("multisource validates its configuration") {
    MultisourceConfig c;
    c.timing = make_timing(1680, 1050, 60);
    c.sources = 2;
    c.carriers_hz = {9000.0, 9300.0};  // collision: < 500 Hz apart
    CHECK_THROWS_AS(run_multisource(c), std::invalid_argument);
    c.sources = 5;
    c.carriers_hz = {6000.0, 9000.0, 12000.0, 15000.0, 18000.0};
    CHECK_THROWS_AS(run_multisource(c), std::invalid_argument);
    c.sources = 2;
    c.carriers_hz = {9000.0};
    CHECK_THROWS_AS(run_multisource(c), std::invalid_argument);
}

TEST_CASE("single-source multisource run decodes cleanly") {
    MultisourceConfig c;
    c.timing = make_timing(1680, 1050, 60);
    c.sources = 1;
    c.carriers_hz = {12500.0};
    c.snr_db = std::numeric_limits<double>::infinity();
    c.packets_per_source = 3;
    c.bit_rate = 20;
    const MultisourceReport r = run_multisource(c);
    REQUIRE(r.rows.size() == 2);  // source 0 + aggregate
    CHECK(r.rows[0].packets_ok == 3);
    CHECK(r.rows[0].bit_errors == 0);
    CHECK(r.rows[1].source == -1);
    CHECK(r.rows[1].packets_ok == 3);
}

TEST_CASE("two sources at 25 dB decode independently") {
    MultisourceConfig c;
    c.timing = make_timing(1680, 1050, 60);
    c.sources = 2;
    c.carriers_hz = {9000.0, 14500.0};
    c.snr_db = 25.0;
    c.packets_per_source = 3;
    c.bit_rate = 20;
    c.seed = 7;
    const MultisourceReport r = run_multisource(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].packets_ok == 3);
    CHECK(r.rows[1].packets_ok == 3);
    CHECK(r.rows[0].bit_errors == 0);
    CHECK(r.rows[1].bit_errors == 0);
}

TEST_CASE("a much weaker source cannot beat the stronger one") {
    MultisourceConfig c;
    c.timing = make_timing(1680, 1050, 60);
    c.sources = 2;
    c.carriers_hz = {9000.0, 14500.0};
    c.gains = {1.0, 0.05};
    c.snr_db = 18.0;  // calibrated against the stronger carrier
    c.packets_per_source = 5;
    c.bit_rate = 20;
    c.seed = 11;
    const MultisourceReport r = run_multisource(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[1].ber >= r.rows[0].ber);
}

TEST_CASE("CSV output shape") {
    SweepConfig c = base_config();
    c.packets_per_point = 1;
    c.snr_points = {SnrPoint{std::numeric_limits<double>::infinity(), {}}};
    const std::string csv = run_sweep(c).to_csv();
    CHECK(csv.rfind("scheme,bit_rate,snr_db,brightness,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + 1 row
}
