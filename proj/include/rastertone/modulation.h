#pragma once

#include <cstdint>
#include <vector>

#include "rastertone/emission.h"
#include "rastertone/packet.h"
#include "rastertone/pattern.h"
#include "rastertone/timing.h"

namespace rastertone {

enum class Scheme { ook, fsk, ask, ofdm };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ModulationParams {
    Scheme scheme = Scheme::ook;
    double carrier_hz = 12500.0;  // OOK/ASK carrier, OFDM base
    // M-FSK tone set indexed by symbol value; {f(bit 0), f(bit 1)} for binary.
    std::vector<double> fsk_freqs = {12000.0, 13000.0};
    std::uint8_t ask_high = 255;
    std::uint8_t ask_low = 64;
    int bit_rate = 10;            // bits (symbols) per second per carrier
    std::uint8_t amplitude = 255; // brightness V of white pixels

    int frames_per_bit(const TimingConfig& timing) const;
    double bit_period_s() const { return 1.0 / bit_rate; }
    int fsk_order() const { return static_cast<int>(fsk_freqs.size()); }
    int bits_per_symbol() const;
    void validate(const TimingConfig& timing) const;
};

struct OfdmPlan {
    double center_hz = 12500.0;
    double subcarrier_spacing_hz = 200.0;
    int subcarriers = 2;
    double symbol_duration_s = 0.1;

    double subcarrier_hz(int index) const {
        return center_hz + index * subcarrier_spacing_hz;
    }
    void validate(const TimingConfig& timing) const;

    // spacing <= 0 selects the smallest multiple of 1/T at or above 200 Hz.
    static OfdmPlan make(int subcarriers, double center_hz,
                         const ModulationParams& params, double spacing_hz = 0.0);
};

// OOK/FSK/ASK: each bit (symbol) occupies frames_per_bit consecutive frames.
FrameSchedule modulate_schedule(const BitStream& bits, const ModulationParams& params,
                                const TimingConfig& timing);
std::vector<FrameBitmap> modulate(const BitStream& bits, const ModulationParams& params,
                                  const TimingConfig& timing);

struct OfdmSchedule {
    FrameSchedule schedule;
    int padded_bits = 0;  // zeros appended to fill the last symbol
};

// OFDM: per symbol period, n bits drive n strips (OOK per sub-carrier).
OfdmSchedule modulate_ofdm_schedule(const BitStream& bits, const OfdmPlan& plan,
                                    const ModulationParams& params,
                                    const TimingConfig& timing);

struct OfdmModulated {
    std::vector<FrameBitmap> frames;
    int padded_bits = 0;
};
OfdmModulated modulate_ofdm(const BitStream& bits, const OfdmPlan& plan,
                            const ModulationParams& params, const TimingConfig& timing);

struct PacketScheduleOptions {
    int gap_bits = 4;   // black bit-periods between packets
    int lead_bits = 0;  // black bit-periods before the first packet
};

// Frames one packet per payload word and schedules them back to back with
// silent gaps in between.
FrameSchedule schedule_packets(const std::vector<std::uint32_t>& payloads,
                               const ModulationParams& params, const TimingConfig& timing,
                               const OfdmPlan* plan = nullptr,
                               const PacketScheduleOptions& options = {});

// Candidate carrier frequencies a receiver must watch for this configuration.
std::vector<double> scheme_frequencies(const ModulationParams& params,
                                       const OfdmPlan* plan = nullptr);

// Replaces the configured carrier and FSK tones with the frequencies the
// raster will actually emit so the receiver's bins line up even on coarse
// rasters. Idempotent.
void snap_to_raster(ModulationParams& params, const TimingConfig& timing);

}  // namespace rastertone
