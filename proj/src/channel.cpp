#include "rastertone/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rastertone/spectra.h"

namespace rastertone {

namespace {

constexpr std::size_t kMeterWindow = 4096;
constexpr std::size_t kMeterHop = 2048;
constexpr double kBandLowHz = 3000.0;
constexpr double kBandHighHz = 22000.0;
constexpr int kCarrierGuardBins = 4;
constexpr double kSpurMedianFactor = 8.0;

struct BandPowers {
    std::vector<double> power;  // averaged |X|^2 per bin
    std::size_t lo = 0, hi = 0; // band bin range, inclusive
    double bin_hz = 0.0;
};

BandPowers averaged_band_power(const Waveform& signal) {
    if (signal.samples.size() < kMeterWindow) {
        throw std::runtime_error("SNR meter: signal shorter than one 4096 window");
    }
    const SpectraStream s =
        spectral_stream(signal, kMeterWindow, kMeterHop, WindowKind::hann);
    BandPowers bp;
    bp.bin_hz = s.bin_hz();
    bp.power.assign(s.n_bins, 0.0);
    for (std::size_t t = 0; t < s.n_frames; ++t) {
        const float* m = s.mags.data() + t * s.n_bins;
        for (std::size_t k = 0; k < s.n_bins; ++k) {
            bp.power[k] += static_cast<double>(m[k]) * m[k];
        }
    }
    for (double& p : bp.power) p /= static_cast<double>(s.n_frames);
    const double nyquist = signal.sample_rate / 2.0;
    bp.lo = static_cast<std::size_t>(std::ceil(kBandLowHz / bp.bin_hz));
    bp.hi = static_cast<std::size_t>(
        std::floor(std::min(kBandHighHz, nyquist * 0.98) / bp.bin_hz));
    if (bp.hi <= bp.lo + 16) {
        throw std::runtime_error("SNR meter: sample rate leaves no 3-22 kHz band");
    }
    return bp;
}

// Mean per-bin noise power over the band, excluding the carrier neighbourhood
// and spur bins (anything above 8x the band median).
double noise_floor(const BandPowers& bp, std::size_t carrier_bin) {
    std::vector<double> kept;
    kept.reserve(bp.hi - bp.lo + 1);
    for (std::size_t k = bp.lo; k <= bp.hi; ++k) {
        const long long d = static_cast<long long>(k) - static_cast<long long>(carrier_bin);
        if (d >= -kCarrierGuardBins && d <= kCarrierGuardBins) continue;
        kept.push_back(bp.power[k]);
    }
    std::vector<double> sorted = kept;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    double sum = 0.0;
    std::size_t count = 0;
    for (double p : kept) {
        if (p <= kSpurMedianFactor * median || median == 0.0) {
            sum += p;
            ++count;
        }
    }
    if (count == 0) return 0.0;
    return sum / static_cast<double>(count);
}

double window_power_sum() {
    // sum of hann^2 over the meter window: 3N/8 for the periodic window
    return 3.0 * static_cast<double>(kMeterWindow) / 8.0;
}

}  // namespace

SnrMeasurement measure_snr(const Waveform& signal, std::optional<double> carrier_hz) {
    const BandPowers bp = averaged_band_power(signal);
    std::size_t c;
    if (carrier_hz) {
        c = static_cast<std::size_t>(
            std::llround(*carrier_hz * kMeterWindow / signal.sample_rate));
        if (c < bp.lo || c > bp.hi) {
            throw std::invalid_argument("carrier outside the 3-22 kHz band");
        }
    } else {
        c = bp.lo;
        for (std::size_t k = bp.lo + 1; k <= bp.hi; ++k) {
            if (bp.power[k] > bp.power[c]) c = k;
        }
    }
    SnrMeasurement m;
    m.carrier_hz = static_cast<double>(c) * bp.bin_hz;
    m.carrier_bin_power = bp.power[c];
    m.noise_bin_power = noise_floor(bp, c);
    const double signal_power = m.carrier_bin_power - m.noise_bin_power;
    if (m.noise_bin_power <= 0.0 || signal_power <= 0.0) {
        m.snr_db = signal_power > 0.0 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
    } else {
        m.snr_db = 10.0 * std::log10(signal_power / m.noise_bin_power);
    }
    return m;
}

Waveform white_noise(int sample_rate, std::size_t n_samples, double sigma,
                     std::uint64_t seed) {
    Waveform noise;
    noise.sample_rate = sample_rate;
    noise.samples.resize(n_samples);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (double& s : noise.samples) s = dist(rng);
    return noise;
}

Waveform apply_channel(const Waveform& signal, const ChannelParams& params) {
    if (signal.samples.empty()) throw std::invalid_argument("apply_channel: empty signal");
    if (!(params.gain > 0.0)) throw std::invalid_argument("apply_channel: gain must be > 0");

    Waveform out;
    out.sample_rate = signal.sample_rate;
    out.samples.resize(signal.samples.size());
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        out.samples[i] = params.gain * signal.samples[i];
    }

    double sigma;
    if (params.fixed_noise_sigma) {
        sigma = *params.fixed_noise_sigma;
        if (sigma <= 0.0) return out;
    } else {
        if (std::isinf(params.target_snr_db) && params.target_snr_db > 0.0) return out;
        const double peak = *std::max_element(
            out.samples.begin(), out.samples.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
        if (std::abs(peak) == 0.0) {
            throw std::runtime_error("undefined SNR: silent input with finite target");
        }
        const BandPowers bp = averaged_band_power(out);
        std::size_t c;
        if (params.carrier_hz) {
            c = static_cast<std::size_t>(
                std::llround(*params.carrier_hz * kMeterWindow / out.sample_rate));
            c = std::clamp(c, bp.lo, bp.hi);
        } else {
            c = bp.lo;
            for (std::size_t k = bp.lo + 1; k <= bp.hi; ++k) {
                if (bp.power[k] > bp.power[c]) c = k;
            }
        }
        const double pc = bp.power[c];
        const double sf = noise_floor(bp, c);
        if (pc <= sf) {
            throw std::runtime_error("undefined SNR: no carrier above the noise floor");
        }
        const double target = std::pow(10.0, params.target_snr_db / 10.0);
        // Solve for added per-bin noise power x so that the meter reads the
        // target on the output: (pc - sf) / (sf + x) = target.
        const double x = (pc - sf) / target - sf;
        if (x <= 0.0) {
            throw std::runtime_error(
                "target SNR unreachable: clean signal's own floor is too high");
        }
        sigma = std::sqrt(x / window_power_sum());
    }

    std::mt19937_64 rng(params.rng_seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (double& s : out.samples) s += dist(rng);
    return out;
}

MixResult mix_sources(const std::vector<Waveform>& signals,
                      const std::vector<double>& gains) {
    if (signals.empty()) throw std::invalid_argument("mix_sources: no signals");
    if (gains.size() != signals.size()) {
        throw std::invalid_argument("mix_sources: one gain per signal required");
    }
    const int rate = signals.front().sample_rate;
    std::size_t longest = 0;
    for (const Waveform& s : signals) {
        if (s.sample_rate != rate) {
            throw std::invalid_argument("incompatible waveforms: sample rates differ");
        }
        longest = std::max(longest, s.samples.size());
    }
    MixResult r;
    r.wave.sample_rate = rate;
    r.wave.samples.assign(longest, 0.0);
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const std::vector<double>& src = signals[i].samples;
        for (std::size_t k = 0; k < src.size(); ++k) {
            r.wave.samples[k] += gains[i] * src[k];
        }
    }
    double peak = 0.0;
    for (double s : r.wave.samples) peak = std::max(peak, std::abs(s));
    r.normalization = peak > 1.0 ? peak : 1.0;
    if (r.normalization != 1.0) {
        for (double& s : r.wave.samples) s /= r.normalization;
    }
    return r;
}

}  // namespace rastertone
