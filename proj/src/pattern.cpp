#include "rastertone/pattern.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rastertone {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    return r < 0 ? r + b : r;
}

}  // namespace

TonePattern make_tone_pattern(const TimingConfig& timing, double frequency_hz,
                              std::uint8_t brightness) {
    timing.validate();
    const double pclk = static_cast<double>(timing.pixel_clock());
    if (!(frequency_hz > 0.0)) {
        throw std::out_of_range("tone frequency must be > 0 Hz");
    }
    if (frequency_hz > pclk / 4.0) {
        throw std::out_of_range("tone frequency " + std::to_string(frequency_hz) +
                                " Hz above pixel clock / 4 (" +
                                std::to_string(pclk / 4.0) + " Hz)");
    }
    TonePattern p;
    p.frequency = frequency_hz;
    // Cycle size from the rate the sample number advances during the scan;
    // identical to pixel_clock / f when there is no blanking.
    p.cycle_size = std::llround(static_cast<double>(timing.scan_rate()) / frequency_hz);
    p.half_cycle = p.cycle_size / 2;
    p.brightness = brightness;
    if (p.cycle_size < 2) {
        throw std::out_of_range("tone at " + std::to_string(frequency_hz) +
                                " Hz is unrepresentable (cycle size < 2)");
    }
    return p;
}

FramePattern FramePattern::black(const TimingConfig& timing) {
    FramePattern p;
    StripSpec s;
    s.row_begin = 0;
    s.row_end = timing.v_res;
    s.on = false;
    p.strips.push_back(s);
    return p;
}

FramePattern FramePattern::full_tone(const TimingConfig& timing, const TonePattern& tone,
                                     std::int64_t phase) {
    FramePattern p;
    StripSpec s;
    s.row_begin = 0;
    s.row_end = timing.v_res;
    s.on = true;
    s.tone = tone;
    s.phase = phase;
    p.strips.push_back(s);
    return p;
}

FramePattern FramePattern::striped(const TimingConfig& timing,
                                   const std::vector<StripSpec>& strips) {
    if (strips.empty()) throw std::invalid_argument("striped pattern needs >= 1 strip");
    int row = 0;
    for (const StripSpec& s : strips) {
        if (s.row_begin != row || s.row_end <= s.row_begin) {
            throw std::invalid_argument("strips must tile rows contiguously");
        }
        row = s.row_end;
    }
    if (row != timing.v_res) throw std::invalid_argument("strips must cover all rows");
    FramePattern p;
    p.strips = strips;
    return p;
}

bool FramePattern::all_black() const {
    return std::none_of(strips.begin(), strips.end(),
                        [](const StripSpec& s) { return s.on && s.tone.brightness > 0; });
}

double FramePattern::mean_drive(const TimingConfig& timing) const {
    double total = 0.0;
    for (const StripSpec& s : strips) {
        if (!s.on || s.tone.brightness == 0) continue;
        std::int64_t whites = 0;
        for (int y = s.row_begin; y < s.row_end; ++y) {
            const std::int64_t k =
                static_cast<std::int64_t>(y - s.row_begin) * timing.h_total + s.phase;
            whites += square_white_count(timing.h_res, k, s.tone.cycle_size,
                                         s.tone.half_cycle);
        }
        total += static_cast<double>(whites) * (s.tone.brightness / 255.0);
    }
    const double slots =
        static_cast<double>(timing.slots_per_frame());
    return total / slots;
}

FramePattern FramePattern::advanced(std::int64_t delta_slots) const {
    FramePattern p = *this;
    for (StripSpec& s : p.strips) {
        if (s.on) s.phase = positive_mod(s.phase + delta_slots, s.tone.cycle_size);
    }
    return p;
}

FrameBitmap render_pattern(const TimingConfig& timing, const FramePattern& pattern) {
    timing.validate();
    FrameBitmap frame(timing.h_res, timing.v_res);
    for (const StripSpec& s : pattern.strips) {
        if (!s.on) continue;
        const std::int64_t cycle = s.tone.cycle_size;
        const std::int64_t half = s.tone.half_cycle;
        const std::uint8_t v = s.tone.brightness;
        for (int y = s.row_begin; y < s.row_end; ++y) {
            std::uint8_t* out = frame.row(y);
            const std::int64_t k =
                static_cast<std::int64_t>(y - s.row_begin) * timing.h_total + s.phase;
            // Walk white/black runs instead of testing every pixel.
            std::int64_t x = 0;
            std::int64_t rem = positive_mod(k, cycle);
            while (x < timing.h_res) {
                std::int64_t run;
                if (rem < half) {
                    run = std::min<std::int64_t>(half - rem, timing.h_res - x);
                    std::fill(out + x, out + x + run, v);
                } else {
                    run = std::min<std::int64_t>(cycle - rem, timing.h_res - x);
                }
                x += run;
                rem += run;
                if (rem >= cycle) rem -= cycle;
            }
        }
    }
    return frame;
}

FrameBitmap tone_pattern(const TimingConfig& timing, double frequency_hz,
                         std::uint8_t brightness) {
    const TonePattern tone = make_tone_pattern(timing, frequency_hz, brightness);
    return render_pattern(timing, FramePattern::full_tone(timing, tone));
}

FramePattern strip_pattern_spec(const TimingConfig& timing,
                                const std::vector<double>& frequencies_hz,
                                std::uint8_t brightness) {
    timing.validate();
    const int n = static_cast<int>(frequencies_hz.size());
    if (n < 1) throw std::invalid_argument("strip_pattern needs >= 1 frequency");
    if (n > timing.v_res) {
        throw std::invalid_argument("more strips than rows (" + std::to_string(n) +
                                    " > " + std::to_string(timing.v_res) + ")");
    }
    std::vector<StripSpec> strips(n);
    for (int i = 0; i < n; ++i) {
        StripSpec& s = strips[i];
        s.row_begin = static_cast<int>(static_cast<std::int64_t>(i) * timing.v_res / n);
        s.row_end = static_cast<int>(static_cast<std::int64_t>(i + 1) * timing.v_res / n);
        s.on = true;
        s.tone = make_tone_pattern(timing, frequencies_hz[i], brightness);
        s.phase = 0;
    }
    return FramePattern::striped(timing, strips);
}

FrameBitmap strip_pattern(const TimingConfig& timing,
                          const std::vector<double>& frequencies_hz,
                          std::uint8_t brightness) {
    return render_pattern(timing, strip_pattern_spec(timing, frequencies_hz, brightness));
}

double raster_tone_frequency(const TimingConfig& timing, double frequency_hz) {
    return make_tone_pattern(timing, frequency_hz, 255).actual_frequency(timing);
}

std::int64_t square_white_count(std::int64_t n, std::int64_t phase,
                                std::int64_t cycle, std::int64_t half) {
    // whites in [0, m) of the unshifted square
    auto base = [cycle, half](std::int64_t m) {
        const std::int64_t q = floor_div(m, cycle);
        const std::int64_t r = m - q * cycle;
        return q * half + std::min(r, half);
    };
    return base(n + phase) - base(phase);
}

}  // namespace rastertone
