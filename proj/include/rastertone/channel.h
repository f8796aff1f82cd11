#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rastertone/wave.h"

namespace rastertone {

// Additive-white-Gaussian channel stand-in for the acoustic path.
struct ChannelParams {
    double target_snr_db = std::numeric_limits<double>::infinity();
    double gain = 1.0;
    std::uint64_t rng_seed = 0;
    // When set, adds noise of this per-sample sigma instead of calibrating to
    // a target SNR (used for fixed-noise-floor experiments).
    std::optional<double> fixed_noise_sigma;
    // Carrier for the SNR meter; defaults to the strongest in-band bin.
    std::optional<double> carrier_hz;
};

struct SnrMeasurement {
    double snr_db = 0.0;
    double carrier_hz = 0.0;
    double carrier_bin_power = 0.0;   // averaged periodogram power at the carrier bin
    double noise_bin_power = 0.0;     // mean per-bin noise power over 3-22 kHz
};

// In-bin SNR: power at the carrier FFT bin (noise-compensated) over the mean
// per-bin noise power in the 3-22 kHz band. Hann window 4096, hop 2048,
// averaged periodogram; bins within +-4 of the carrier and spur bins above
// 8x the band median are excluded from the noise estimate. This is the one
// SNR definition used by the whole harness.
SnrMeasurement measure_snr(const Waveform& signal,
                           std::optional<double> carrier_hz = std::nullopt);

// output = gain * signal + white Gaussian noise scaled so the measured SNR
// equals the target. +infinity target returns the scaled signal unchanged.
Waveform apply_channel(const Waveform& signal, const ChannelParams& params);

struct MixResult {
    Waveform wave;
    double normalization = 1.0;  // divisor applied to keep |s| <= 1
};

// Sample-wise weighted sum of equal-rate waveforms (shorter inputs are
// zero-padded), peak-normalized when the sum exceeds full scale.
MixResult mix_sources(const std::vector<Waveform>& signals,
                      const std::vector<double>& gains);

// Deterministic white Gaussian noise, N(0, sigma^2) per sample.
Waveform white_noise(int sample_rate, std::size_t n_samples, double sigma,
                     std::uint64_t seed);

}  // namespace rastertone
