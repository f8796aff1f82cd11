#include "rastertone/modulation.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rastertone {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ook: return "ook";
        case Scheme::fsk: return "fsk";
        case Scheme::ask: return "ask";
        case Scheme::ofdm: return "ofdm";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "ook") return Scheme::ook;
    if (name == "fsk") return Scheme::fsk;
    if (name == "ask") return Scheme::ask;
    if (name == "ofdm") return Scheme::ofdm;
    throw std::invalid_argument("unknown scheme: " + name);
}

int ModulationParams::frames_per_bit(const TimingConfig& timing) const {
    if (bit_rate < 1) throw std::invalid_argument("bit_rate must be >= 1");
    if (timing.refresh_rate % bit_rate != 0) {
        throw std::invalid_argument(
            "bit rate " + std::to_string(bit_rate) +
            " does not divide refresh rate " + std::to_string(timing.refresh_rate) +
            " (frames per bit must be an integer)");
    }
    return timing.refresh_rate / bit_rate;
}

int ModulationParams::bits_per_symbol() const {
    if (scheme != Scheme::fsk) return 1;
    const int m = fsk_order();
    int k = 0;
    while ((1 << k) < m) ++k;
    return k;
}

void ModulationParams::validate(const TimingConfig& timing) const {
    timing.validate();
    (void)frames_per_bit(timing);
    if (scheme == Scheme::fsk) {
        const int m = fsk_order();
        if (m < 2 || (m & (m - 1)) != 0) {
            throw std::invalid_argument("FSK order must be a power of two >= 2, got " +
                                        std::to_string(m));
        }
        const double min_sep = 2.0 * bit_rate;  // 2/T
        for (std::size_t i = 0; i < fsk_freqs.size(); ++i) {
            for (std::size_t j = i + 1; j < fsk_freqs.size(); ++j) {
                if (std::abs(fsk_freqs[i] - fsk_freqs[j]) < min_sep) {
                    throw std::invalid_argument(
                        "FSK tones closer than 2/T = " + std::to_string(min_sep) + " Hz");
                }
            }
        }
    }
    if (scheme == Scheme::ask && ask_high <= ask_low) {
        throw std::invalid_argument("ASK high level must exceed low level");
    }
}

void OfdmPlan::validate(const TimingConfig& timing) const {
    if (subcarriers < 1) throw std::invalid_argument("OFDM needs >= 1 sub-carrier");
    if (subcarriers > timing.v_res) {
        throw std::invalid_argument("more sub-carriers than screen rows");
    }
    if (symbol_duration_s <= 0.0) throw std::invalid_argument("symbol duration must be > 0");
    const double ratio = subcarrier_spacing_hz * symbol_duration_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
        throw std::invalid_argument(
            "sub-carrier spacing must be a positive integer multiple of 1/T");
    }
}

OfdmPlan OfdmPlan::make(int subcarriers, double center_hz,
                        const ModulationParams& params, double spacing_hz) {
    OfdmPlan plan;
    plan.center_hz = center_hz;
    plan.subcarriers = subcarriers;
    plan.symbol_duration_s = params.bit_period_s();
    if (spacing_hz <= 0.0) {
        // Smallest multiple of 1/T at or above 200 Hz keeps the sub-carriers
        // separable in an 11.7 Hz/bin spectrogram while staying orthogonal.
        const double base = 1.0 / plan.symbol_duration_s;
        plan.subcarrier_spacing_hz = std::ceil(200.0 / base - 1e-9) * base;
    } else {
        plan.subcarrier_spacing_hz = spacing_hz;
    }
    return plan;
}

namespace {

void append_symbol_tone(FrameSchedule& schedule, const TimingConfig& timing,
                        double freq_hz, std::uint8_t brightness, int frames) {
    const TonePattern tone = make_tone_pattern(timing, freq_hz, brightness);
    schedule.append(FramePattern::full_tone(timing, tone), frames);
}

}  // namespace

FrameSchedule modulate_schedule(const BitStream& bits, const ModulationParams& params,
                                const TimingConfig& timing) {
    params.validate(timing);
    if (params.scheme == Scheme::ofdm) {
        throw std::invalid_argument("use modulate_ofdm for the OFDM scheme");
    }
    const int fpb = params.frames_per_bit(timing);
    FrameSchedule schedule(timing);
    switch (params.scheme) {
        case Scheme::ook: {
            for (std::uint8_t b : bits) {
                if (b) append_symbol_tone(schedule, timing, params.carrier_hz,
                                          params.amplitude, fpb);
                else schedule.append_black(fpb);
            }
            break;
        }
        case Scheme::fsk: {
            const int k = params.bits_per_symbol();
            for (std::size_t i = 0; i < bits.size(); i += static_cast<std::size_t>(k)) {
                int value = 0;
                for (int j = 0; j < k; ++j) {
                    const std::size_t idx = i + static_cast<std::size_t>(j);
                    const int bit = idx < bits.size() ? bits[idx] : 0;  // zero-pad tail
                    value = (value << 1) | bit;
                }
                append_symbol_tone(schedule, timing,
                                   params.fsk_freqs[static_cast<std::size_t>(value)],
                                   params.amplitude, fpb);
            }
            break;
        }
        case Scheme::ask: {
            for (std::uint8_t b : bits) {
                append_symbol_tone(schedule, timing, params.carrier_hz,
                                   b ? params.ask_high : params.ask_low, fpb);
            }
            break;
        }
        case Scheme::ofdm:
            break;  // unreachable
    }
    return schedule;
}

std::vector<FrameBitmap> modulate(const BitStream& bits, const ModulationParams& params,
                                  const TimingConfig& timing) {
    return modulate_schedule(bits, params, timing).render_all();
}

OfdmSchedule modulate_ofdm_schedule(const BitStream& bits, const OfdmPlan& plan,
                                    const ModulationParams& params,
                                    const TimingConfig& timing) {
    params.validate(timing);
    plan.validate(timing);
    const int n = plan.subcarriers;
    const int fps = params.frames_per_bit(timing);  // frames per symbol

    OfdmSchedule out{FrameSchedule(timing), 0};
    const std::size_t symbols = (bits.size() + static_cast<std::size_t>(n) - 1) /
                                static_cast<std::size_t>(n);
    out.padded_bits = static_cast<int>(symbols * static_cast<std::size_t>(n) - bits.size());

    for (std::size_t s = 0; s < symbols; ++s) {
        std::vector<StripSpec> strips(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            StripSpec& strip = strips[static_cast<std::size_t>(i)];
            strip.row_begin =
                static_cast<int>(static_cast<std::int64_t>(i) * timing.v_res / n);
            strip.row_end =
                static_cast<int>(static_cast<std::int64_t>(i + 1) * timing.v_res / n);
            const std::size_t idx = s * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(i);
            const bool bit = idx < bits.size() && bits[idx] != 0;
            strip.on = bit;
            if (bit) {
                strip.tone = make_tone_pattern(timing, plan.subcarrier_hz(i),
                                               params.amplitude);
            }
        }
        out.schedule.append(FramePattern::striped(timing, strips), fps);
    }
    return out;
}

OfdmModulated modulate_ofdm(const BitStream& bits, const OfdmPlan& plan,
                            const ModulationParams& params, const TimingConfig& timing) {
    OfdmSchedule s = modulate_ofdm_schedule(bits, plan, params, timing);
    return OfdmModulated{s.schedule.render_all(), s.padded_bits};
}

FrameSchedule schedule_packets(const std::vector<std::uint32_t>& payloads,
                               const ModulationParams& params, const TimingConfig& timing,
                               const OfdmPlan* plan,
                               const PacketScheduleOptions& options) {
    params.validate(timing);
    const int fpb = params.frames_per_bit(timing);
    FrameSchedule schedule(timing);
    if (options.lead_bits > 0) schedule.append_black(options.lead_bits * fpb);
    bool first = true;
    for (std::uint32_t payload : payloads) {
        if (!first && options.gap_bits > 0) schedule.append_black(options.gap_bits * fpb);
        first = false;
        const BitStream bits = frame_packet(payload);
        FrameSchedule part =
            params.scheme == Scheme::ofdm
                ? modulate_ofdm_schedule(bits, *plan, params, timing).schedule
                : modulate_schedule(bits, params, timing);
        for (const FrameSchedule::Segment& seg : part.segments()) {
            // Re-anchor: segment phases were relative to the part's own start.
            FramePattern base = seg.base.advanced(-seg.start_frame * timing.slots_per_frame());
            schedule.append(base, seg.frames);
        }
    }
    return schedule;
}

void snap_to_raster(ModulationParams& params, const TimingConfig& timing) {
    params.carrier_hz = raster_tone_frequency(timing, params.carrier_hz);
    for (double& f : params.fsk_freqs) f = raster_tone_frequency(timing, f);
}

std::vector<double> scheme_frequencies(const ModulationParams& params,
                                       const OfdmPlan* plan) {
    switch (params.scheme) {
        case Scheme::ook:
        case Scheme::ask:
            return {params.carrier_hz};
        case Scheme::fsk:
            return params.fsk_freqs;
        case Scheme::ofdm: {
            if (!plan) throw std::invalid_argument("OFDM requires a plan");
            std::vector<double> f;
            for (int i = 0; i < plan->subcarriers; ++i) f.push_back(plan->subcarrier_hz(i));
            return f;
        }
    }
    return {};
}

}  // namespace rastertone
