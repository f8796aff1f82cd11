#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rastertone/modulation.h"
#include "rastertone/spectra.h"

namespace rastertone {

inline constexpr std::size_t kDemodWindow = 4096;
inline constexpr double kPreambleScoreThreshold = 0.75;
inline constexpr int kSyncLeadBits = 2;  // silence context ahead of the preamble

struct SyncInfo {
    double packet_start = 0.0;  // sample offset of the preamble's first bit
    double bit_period = 0.0;    // samples per symbol period
    double score = 0.0;         // normalized preamble correlation at detection
    // Learned magnitude levels per watched frequency (scheme_frequencies()
    // order); decision thresholds are the high/low midpoints.
    std::vector<double> level_high;
    std::vector<double> level_low;
    std::vector<double> threshold;
};

struct DecodeResult {
    std::uint32_t payload = 0;
    std::uint8_t received_crc = 0;
    std::uint8_t calculated_crc = 0;
    enum class Status { ok, crc_mismatch };
    Status status = Status::crc_mismatch;
    // Per-bit decision confidence in [0, 1] for the 40 payload+CRC bits.
    std::array<double, 40> bit_confidence{};
    double start_time_s = 0.0;

    bool ok() const { return status == Status::ok; }
    double mean_confidence() const;
    // The 40 decided payload+CRC bits, MSB-first.
    BitStream decided_bits() const;
};

// hop = bit period / 8 so every bit gets ~8 majority-voted decisions.
std::size_t default_demod_hop(const ModulationParams& params, int sample_rate);

// Front end with the default window/hop for this modulation.
SpectraStream demod_spectra(const Waveform& signal, const ModulationParams& params);

// Slides the 10101010 soft template (plus a silent lead) across the watched
// carrier bins; fires when the normalized correlation reaches the threshold,
// then refines the start against the first bit's energy onset and learns the
// high/low amplitude levels from the preamble.
std::optional<SyncInfo> detect_preamble(const SpectraStream& stream,
                                        const ModulationParams& params,
                                        const OfdmPlan* plan = nullptr,
                                        std::int64_t search_from_offset =
                                            std::numeric_limits<std::int64_t>::min());

DecodeResult demodulate_packet(const SpectraStream& stream, const SyncInfo& sync,
                               const ModulationParams& params);

// Continuous scan: detect, decode, resume after the packet end. Corrupted
// packets are reported with crc-mismatch status, never dropped.
std::vector<DecodeResult> scan_stream(const SpectraStream& stream,
                                      const ModulationParams& params,
                                      const OfdmPlan* plan = nullptr);

// Per-sub-carrier OOK decisions at f_c + i * spacing, reassembled in the
// transmitter's interleaving order; scans the whole stream.
std::vector<DecodeResult> demodulate_ofdm(const SpectraStream& stream,
                                          const OfdmPlan& plan,
                                          const ModulationParams& params);

}  // namespace rastertone
