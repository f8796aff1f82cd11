#pragma once

#include <cstdint>
#include <vector>

#include "rastertone/frame.h"
#include "rastertone/timing.h"

namespace rastertone {

// Square-wave pixel pattern parameters for one carrier tone. The raster scan
// turns a pattern with cycle_size slots per period into an acoustic tone at
// scan_rate / cycle_size Hz.
struct TonePattern {
    double frequency = 0.0;  // requested Hz
    std::int64_t cycle_size = 0;
    std::int64_t half_cycle = 0;
    std::uint8_t brightness = 255;

    double actual_frequency(const TimingConfig& t) const {
        return static_cast<double>(t.scan_rate()) / static_cast<double>(cycle_size);
    }
    // Rounding cycle_size to an integer shifts the emitted tone slightly;
    // callers that care report this alongside the pattern.
    double frequency_error(const TimingConfig& t) const {
        return actual_frequency(t) - frequency;
    }
};

// Validates the frequency against the pixel clock and rounds the cycle.
TonePattern make_tone_pattern(const TimingConfig& timing, double frequency_hz,
                              std::uint8_t brightness);

// One horizontal band of a frame: either black or a tone pattern whose
// in-strip sample number is x + (y - row_begin) * h_total + phase.
struct StripSpec {
    int row_begin = 0;
    int row_end = 0;  // exclusive
    bool on = false;
    TonePattern tone{};
    std::int64_t phase = 0;  // pattern offset in slots at the strip's origin
};

// Full-frame pattern: strips covering rows [0, v_res) in order.
struct FramePattern {
    std::vector<StripSpec> strips;

    static FramePattern black(const TimingConfig& timing);
    static FramePattern full_tone(const TimingConfig& timing, const TonePattern& tone,
                                  std::int64_t phase = 0);
    // Equal-height strips; entries with on=false stay black.
    static FramePattern striped(const TimingConfig& timing,
                                const std::vector<StripSpec>& strips);

    bool all_black() const;
    // Mean drive level (luma/255 averaged over all scan slots incl. blanking).
    double mean_drive(const TimingConfig& timing) const;
    // Shifts every strip phase by delta slots (used by frame schedules).
    FramePattern advanced(std::int64_t delta_slots) const;
};

FrameBitmap render_pattern(const TimingConfig& timing, const FramePattern& pattern);

// Whole-screen single-tone frame per the raster modulation rule:
// white (= brightness) where (x + y*h_total) mod cycle_size < half_cycle.
FrameBitmap tone_pattern(const TimingConfig& timing, double frequency_hz,
                         std::uint8_t brightness);

// Screen split into n equal-height strips, strip i carrying frequencies[i]
// with the sample number restarting at each strip's top-left.
FrameBitmap strip_pattern(const TimingConfig& timing,
                          const std::vector<double>& frequencies_hz,
                          std::uint8_t brightness);

// Descriptor form of strip_pattern; used by schedules and the emitter.
FramePattern strip_pattern_spec(const TimingConfig& timing,
                                const std::vector<double>& frequencies_hz,
                                std::uint8_t brightness);

// Count of white slots s in [0, n) of the phase-shifted square
// ((s + phase) mod cycle) < half; n and phase may be negative.
std::int64_t square_white_count(std::int64_t n, std::int64_t phase,
                                std::int64_t cycle, std::int64_t half);

// The tone the raster actually produces for a requested frequency
// (scan_rate / rounded cycle). Receivers listen here, not at the request.
double raster_tone_frequency(const TimingConfig& timing, double frequency_hz);

}  // namespace rastertone
