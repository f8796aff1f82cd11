#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rastertone/emission.h"
#include "rastertone/frame.h"
#include "rastertone/pattern.h"
#include "rastertone/timing.h"
#include "test_helpers.h"

using namespace rastertone;

namespace {

// Small geometry keeps bitmap-path tests fast; pixel clock 1.2096 MHz.
TimingConfig small_timing() { return make_timing(168, 120, 60); }

}  // namespace

TEST_CASE("pixel clock follows the resolution product") {
    CHECK(compute_pixel_clock(make_timing(1680, 1050, 60)) == 105840000);
    CHECK(compute_pixel_clock(make_timing(1920, 1080, 60)) == 124416000);
    CHECK(compute_pixel_clock(make_timing(1280, 1024, 60)) == 78643200);
}

TEST_CASE("invalid timing is rejected") {
    TimingConfig t;
    t.h_res = 0;
    CHECK_THROWS_AS(compute_pixel_clock(t), std::invalid_argument);
    t = TimingConfig{};
    t.refresh_rate = 0;
    CHECK_THROWS_AS(compute_pixel_clock(t), std::invalid_argument);
    t = TimingConfig{};
    t.h_total = t.h_res - 1;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("tone pattern cycle math at 1680x1050@60") {
    const TimingConfig t = make_timing(1680, 1050, 60);
    const TonePattern p = make_tone_pattern(t, 5000.0, 255);
    CHECK(p.cycle_size == 21168);
    CHECK(p.half_cycle == 10584);
    CHECK(p.frequency_error(t) == doctest::Approx(0.0));
    CHECK(make_tone_pattern(t, 20000.0, 255).cycle_size == 5292);

    const FrameBitmap frame = tone_pattern(t, 5000.0, 200);
    CHECK(frame.width == 1680);
    CHECK(frame.height == 1050);
    CHECK(frame.at(0, 0) == 200);
    // sampleNumber 10584 = half_cycle -> first black pixel
    const int y = 10584 / 1680, x = 10584 % 1680;
    CHECK(frame.at(x, y) == 0);
    CHECK(frame.at(x - 1, y) == 200);
}

TEST_CASE("tone pattern rejects out-of-range frequencies") {
    const TimingConfig t = make_timing(1680, 1050, 60);
    CHECK_THROWS_AS(make_tone_pattern(t, 0.0, 255), std::out_of_range);
    CHECK_THROWS_AS(make_tone_pattern(t, -5.0, 255), std::out_of_range);
    CHECK_THROWS_AS(make_tone_pattern(t, 26460001.0, 255), std::out_of_range);
    CHECK_NOTHROW(make_tone_pattern(t, 26460000.0, 255));
}

TEST_CASE("tone pattern is deterministic") {
    const TimingConfig t = small_timing();
    const FrameBitmap a = tone_pattern(t, 5000.0, 255);
    const FrameBitmap b = tone_pattern(t, 5000.0, 255);
    CHECK(a.luma == b.luma);
}

TEST_CASE("doubling the frequency halves the cycle within rounding") {
    const TimingConfig t = make_timing(1680, 1050, 60);
    for (double f : {3000.0, 5000.0, 7321.0, 9000.0, 11000.0}) {
        const auto c1 = make_tone_pattern(t, f, 255).cycle_size;
        const auto c2 = make_tone_pattern(t, 2 * f, 255).cycle_size;
        CHECK(std::llabs(c1 - 2 * c2) <= 2);
    }
}

TEST_CASE("tone bitmaps show the expected band structure") {
    // Band height (white rows per burst at a fixed column) roughly halves as
    // the frequency doubles.
    const TimingConfig t = make_timing(1680, 1050, 60);
    auto white_run_rows = [&](double f) {
        const FrameBitmap frame = tone_pattern(t, f, 255);
        int rows = 0;
        while (rows < frame.height && frame.at(0, rows) == 255) ++rows;
        return rows;
    };
    const int h5 = white_run_rows(5000.0);
    const int h10 = white_run_rows(10000.0);
    const int h20 = white_run_rows(20000.0);
    CHECK(h5 == 7);  // ceil(10584 / 1680)
    CHECK(h10 == 4);
    CHECK(h20 == 2);
    CHECK(std::abs(h5 - 2 * h10) <= 1);
    CHECK(std::abs(h10 - 2 * h20) <= 1);
}

TEST_CASE("strip pattern splits the screen") {
    const TimingConfig t = small_timing();

    SUBCASE("n=1 equals the full tone pattern") {
        const FrameBitmap a = strip_pattern(t, {5000.0}, 255);
        const FrameBitmap b = tone_pattern(t, 5000.0, 255);
        CHECK(a.luma == b.luma);
    }

    SUBCASE("n=2 top and bottom carry their own tones") {
        const double fa = 5000.0, fb = 9000.0;
        const FrameBitmap ab = strip_pattern(t, {fa, fb}, 255);
        const FrameBitmap fa_full = tone_pattern(t, fa, 255);
        const FrameBitmap fb_full = tone_pattern(t, fb, 255);
        // Each strip restarts the sample number at its own top row.
        for (int y = 0; y < t.v_res / 2; ++y) {
            for (int x = 0; x < t.h_res; x += 7) {
                CHECK(ab.at(x, y) == fa_full.at(x, y));
            }
        }
        for (int y = t.v_res / 2; y < t.v_res; ++y) {
            for (int x = 0; x < t.h_res; x += 7) {
                CHECK(ab.at(x, y) == fb_full.at(x, y - t.v_res / 2));
            }
        }
    }

    SUBCASE("empty frequency list is rejected") {
        CHECK_THROWS_AS(strip_pattern(t, {}, 255), std::invalid_argument);
    }
}

TEST_CASE("emitted waveform length and silence") {
    const TimingConfig t = small_timing();
    std::vector<FrameBitmap> black(6, FrameBitmap(t.h_res, t.v_res, 0));
    const Waveform w = emit_waveform(black, t);
    CHECK(w.samples.size() == 6u * 48000u / 60u);
    for (double s : w.samples) CHECK(s == 0.0);
}

TEST_CASE("emit rejects bad input") {
    const TimingConfig t = small_timing();
    std::vector<FrameBitmap> none;
    CHECK_THROWS_AS(emit_waveform(none, t), std::invalid_argument);
    std::vector<FrameBitmap> wrong(1, FrameBitmap(t.h_res + 1, t.v_res, 0));
    CHECK_THROWS_AS(emit_waveform(wrong, t), std::invalid_argument);
}

TEST_CASE("emitted tone peaks at the pattern frequency") {
    // The emission peaks at the rounded cycle's actual frequency; the
    // requested-vs-actual gap is reported via frequency_error().
    const TimingConfig t = small_timing();
    for (double f : {4000.0, 10000.0, 18000.0}) {
        const TonePattern tone = make_tone_pattern(t, f, 255);
        FrameSchedule schedule(t);
        schedule.append(FramePattern::full_tone(t, tone), 30);
        const Waveform w = emit_schedule(schedule);
        CHECK(w.samples.size() == 24000u);
        const double peak = testutil::dominant_frequency(w, 3000.0, 22000.0, 5.0);
        CHECK(std::abs(peak - tone.actual_frequency(t)) < 12.0);
        for (double s : w.samples) {
            CHECK(std::isfinite(s));
            CHECK(std::abs(s) <= 1.0);
        }
    }
}

TEST_CASE("analytic and bitmap emission paths agree") {
    const TimingConfig t = small_timing();

    auto check_equal = [&](const FrameSchedule& schedule) {
        const Waveform fast = emit_schedule(schedule);
        const Waveform slow = emit_waveform(schedule.render_all(), t);
        REQUIRE(fast.samples.size() == slow.samples.size());
        for (std::size_t i = 0; i < fast.samples.size(); ++i) {
            CHECK(fast.samples[i] == doctest::Approx(slow.samples[i]).epsilon(1e-9));
        }
    };

    SUBCASE("plain tone") {
        FrameSchedule s(t);
        s.append(FramePattern::full_tone(t, make_tone_pattern(t, 7000.0, 255)), 7);
        check_equal(s);
    }
    SUBCASE("tone, gap, tone at a different brightness") {
        FrameSchedule s(t);
        s.append(FramePattern::full_tone(t, make_tone_pattern(t, 12500.0, 255)), 4);
        s.append_black(3);
        s.append(FramePattern::full_tone(t, make_tone_pattern(t, 9000.0, 64)), 4);
        check_equal(s);
    }
    SUBCASE("strips") {
        FrameSchedule s(t);
        s.append(strip_pattern_spec(t, {5000.0, 9000.0, 13000.0}, 255), 6);
        check_equal(s);
    }
    SUBCASE("blanking slots emit zero drive") {
        const TimingConfig tb = make_timing(168, 120, 60, 200);
        FrameSchedule s(tb);
        s.append(FramePattern::full_tone(tb, make_tone_pattern(tb, 7000.0, 255)), 7);
        const Waveform fast = emit_schedule(s);
        const Waveform slow = emit_waveform(s.render_all(), tb);
        REQUIRE(fast.samples.size() == slow.samples.size());
        for (std::size_t i = 0; i < fast.samples.size(); ++i) {
            CHECK(fast.samples[i] == doctest::Approx(slow.samples[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("schedule keeps tones phase-continuous across frames") {
    // A multi-frame tone must not comb the spectrum at refresh-rate offsets:
    // the dominant peak stays on the carrier, not on a 60 Hz grid line.
    const TimingConfig t = make_timing(1680, 1050, 60);
    FrameSchedule schedule(t);
    schedule.append(FramePattern::full_tone(t, make_tone_pattern(t, 10000.0, 255)), 30);
    const Waveform w = emit_schedule(schedule);
    const double peak = testutil::dominant_frequency(w, 9900.0, 10100.0, 2.0);
    CHECK(std::abs(peak - 10000.0) < 12.0);
}

TEST_CASE("in-bin power grows monotonically with brightness") {
    const TimingConfig t = small_timing();
    const double f = 10000.0;
    double prev = -1.0;
    for (int v : {1, 3, 7, 15, 255}) {
        FrameSchedule s(t);
        s.append(FramePattern::full_tone(
                     t, make_tone_pattern(t, f, static_cast<std::uint8_t>(v))),
                 12);
        const double power = std::pow(testutil::goertzel_mag(emit_schedule(s), f), 2.0);
        CHECK(power > prev);
        prev = power;
    }
}

TEST_CASE("splitting four ways divides per-strip in-bin power by four") {
    const TimingConfig t = make_timing(1680, 1050, 60);
    const std::vector<double> freqs = {6000.0, 9000.0, 14500.0, 15500.0};
    FrameSchedule split(t);
    split.append(strip_pattern_spec(t, freqs, 255), 30);
    const Waveform w_split = emit_schedule(split);

    // Short windows (well under the ~200-sample per-strip burst) resolve the
    // bursts in time, so the mean in-bin power at each strip's carrier scales
    // with the 1/n duty cycle.
    for (double f : freqs) {
        FrameSchedule full(t);
        full.append(FramePattern::full_tone(t, make_tone_pattern(t, f, 255)), 30);
        const double p_full =
            testutil::mean_short_window_power(emit_schedule(full), f, 64, 16);
        const double p_strip = testutil::mean_short_window_power(w_split, f, 64, 16);
        const double ratio_db = 10.0 * std::log10(p_strip / p_full);
        CHECK(ratio_db < -6.02 + 1.0);
        CHECK(ratio_db > -6.02 - 1.0);
    }
}

TEST_CASE("PGM round trip") {
    const TimingConfig t = small_timing();
    const FrameBitmap frame = tone_pattern(t, 5000.0, 255);
    std::stringstream buf;
    write_pgm(frame, buf);
    const FrameBitmap back = read_pgm(buf);
    CHECK(back.width == frame.width);
    CHECK(back.height == frame.height);
    CHECK(back.luma == frame.luma);
}
