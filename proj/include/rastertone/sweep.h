#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rastertone/channel.h"
#include "rastertone/demod.h"
#include "rastertone/modulation.h"
#include "rastertone/profile.h"
#include "rastertone/timing.h"

namespace rastertone {

// One SNR grid point: either a literal dB value (infinity = noiseless) or a
// profile key resolved against the bundled measurement tables.
struct SnrPoint {
    std::optional<double> snr_db;
    std::optional<ChannelProfile::Row> profile_key;  // snr_db ignored when set
    std::string label() const;
};

struct SweepConfig {
    std::vector<Scheme> schemes = {Scheme::ook};
    std::vector<int> bit_rates = {10};
    std::vector<SnrPoint> snr_points;
    std::vector<std::uint8_t> brightness_levels = {255};
    int packets_per_point = 50;
    std::uint64_t seed = 1;
    TimingConfig timing{};
    ModulationParams base_params{};
    int ofdm_subcarriers = 2;
    // When set, noise is held at this absolute sigma instead of calibrating to
    // the point's target SNR (brightness sweeps).
    std::optional<double> fixed_noise_sigma;
};

struct SweepRow {
    Scheme scheme = Scheme::ook;
    int bit_rate = 0;
    double snr_db = 0.0;  // resolved target (inf for noiseless, nan for fixed-noise)
    int brightness = 255;
    int packets_sent = 0;
    int packets_ok = 0;
    std::int64_t bit_errors = 0;
    double ber = 0.0;
    double throughput_bps_effective = 0.0;
    double measured_snr_db = 0.0;
};

struct SweepSkip {
    Scheme scheme = Scheme::ook;
    int bit_rate = 0;
    std::string point_label;
    std::string reason;
};

// Skipped grid points are logged, not reported as rows:
// rows.size() == |schemes| * |bit_rates| * |snr_points| * |brightness| - skips.
struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<SweepSkip> skipped;
    std::string to_csv() const;
};

SweepReport run_sweep(const SweepConfig& config,
                      const ChannelProfile* profile = nullptr);

// Single packet through tx -> channel -> rx; ground truth compared bit-wise.
struct TrialOutcome {
    bool detected = false;
    bool ok = false;        // receiver-visible success (CRC passed)
    int bit_errors = 0;     // of the 40 payload+CRC bits (40 when undetected)
    double duration_s = 0.0;
    double measured_snr_db = 0.0;
};

struct TrialChannel {
    double target_snr_db = std::numeric_limits<double>::infinity();
    std::optional<double> fixed_noise_sigma;
    std::uint64_t seed = 0;
};

TrialOutcome run_packet_trial(std::uint32_t payload, const ModulationParams& params,
                              const TimingConfig& timing, const TrialChannel& channel,
                              const OfdmPlan* plan = nullptr,
                              bool measure_output_snr = false);

struct MultisourceConfig {
    int sources = 1;
    std::vector<double> carriers_hz = {12500.0};
    std::vector<double> gains;  // defaults to all 1.0
    double snr_db = 25.0;
    int packets_per_source = 20;
    int bit_rate = 10;
    std::uint64_t seed = 1;
    TimingConfig timing{};
    std::uint8_t amplitude = 255;
};

struct MultisourceRow {
    int source = 0;  // -1 = aggregate
    double carrier_hz = 0.0;
    int packets_sent = 0;
    int packets_ok = 0;
    std::int64_t bit_errors = 0;
    double ber = 0.0;
    double throughput_bps_effective = 0.0;
};

struct MultisourceReport {
    std::vector<MultisourceRow> rows;  // one per source, then the aggregate
    std::string to_csv() const;
};

// n transmitters with independent payloads mixed into one received waveform,
// decoded by n parallel OOK demodulators (one per carrier).
MultisourceReport run_multisource(const MultisourceConfig& config);

// Deterministic per-trial sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

}  // namespace rastertone
