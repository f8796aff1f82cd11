#include "rastertone/demod.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rastertone {

double DecodeResult::mean_confidence() const {
    double sum = 0.0;
    for (double c : bit_confidence) sum += c;
    return sum / static_cast<double>(bit_confidence.size());
}

BitStream DecodeResult::decided_bits() const {
    BitStream bits;
    append_bits_msb(bits, payload, kPayloadBits);
    append_bits_msb(bits, received_crc, kCrcBits);
    return bits;
}

std::size_t default_demod_hop(const ModulationParams& params, int sample_rate) {
    const double bit_period = static_cast<double>(sample_rate) / params.bit_rate;
    return static_cast<std::size_t>(std::max(1.0, std::round(bit_period / 8.0)));
}

SpectraStream demod_spectra(const Waveform& signal, const ModulationParams& params) {
    // Pad the tail with silence so the last bits of a transmission that ends
    // flush with the recording still get their full set of analysis windows.
    Waveform padded;
    padded.sample_rate = signal.sample_rate;
    padded.samples.reserve(signal.samples.size() + kDemodWindow);
    padded.samples = signal.samples;
    padded.samples.resize(signal.samples.size() + kDemodWindow, 0.0);
    return spectral_stream(padded, kDemodWindow,
                           default_demod_hop(params, signal.sample_rate),
                           WindowKind::hann);
}

namespace {

// ---- preamble model -------------------------------------------------------

struct OnInterval {
    double begin = 0.0;  // samples relative to packet start
    double end = 0.0;
    double weight = 1.0;  // relative amplitude while on
};

struct PreambleModel {
    std::vector<std::size_t> bins;                   // spectra bin per frequency
    std::vector<std::vector<OnInterval>> intervals;  // per frequency
    std::vector<int> first_symbol_on;                // freq indices on in symbol 0
    double symbol_period = 0.0;                      // samples
    int known_symbols = 0;                           // fully-known preamble symbols
    int symbols_per_packet = 0;
    int units_per_symbol = 1;  // bits consumed per symbol period
};

PreambleModel build_preamble_model(const SpectraStream& stream,
                                   const ModulationParams& params,
                                   const OfdmPlan* plan) {
    PreambleModel m;
    const double fs = stream.sample_rate;
    m.symbol_period = fs / params.bit_rate;
    const auto preamble = preamble_bits();
    const std::vector<double> freqs = scheme_frequencies(params, plan);
    m.bins.reserve(freqs.size());
    for (double f : freqs) m.bins.push_back(stream.bin_of(f));
    m.intervals.resize(freqs.size());

    auto add_on = [&](std::size_t freq_idx, int symbol, double weight) {
        m.intervals[freq_idx].push_back(OnInterval{symbol * m.symbol_period,
                                                   (symbol + 1) * m.symbol_period,
                                                   weight});
    };

    switch (params.scheme) {
        case Scheme::ook: {
            m.units_per_symbol = 1;
            m.known_symbols = kPreambleBits;
            m.symbols_per_packet = kPacketBits;
            for (int s = 0; s < kPreambleBits; ++s) {
                if (preamble[static_cast<std::size_t>(s)]) add_on(0, s, 1.0);
            }
            m.first_symbol_on = {0};
            break;
        }
        case Scheme::ask: {
            m.units_per_symbol = 1;
            m.known_symbols = kPreambleBits;
            m.symbols_per_packet = kPacketBits;
            for (int s = 0; s < kPreambleBits; ++s) {
                add_on(0, s,
                       (preamble[static_cast<std::size_t>(s)] ? params.ask_high
                                                              : params.ask_low) /
                           255.0);
            }
            m.first_symbol_on = {0};
            break;
        }
        case Scheme::fsk: {
            const int k = params.bits_per_symbol();
            m.units_per_symbol = k;
            m.known_symbols = kPreambleBits / k;  // full symbols inside the preamble
            m.symbols_per_packet = (kPacketBits + k - 1) / k;
            for (int s = 0; s < m.known_symbols; ++s) {
                int value = 0;
                for (int j = 0; j < k; ++j) {
                    value = (value << 1) | preamble[static_cast<std::size_t>(s * k + j)];
                }
                add_on(static_cast<std::size_t>(value), s, 1.0);
                if (s == 0) m.first_symbol_on = {value};
            }
            break;
        }
        case Scheme::ofdm: {
            const int n = plan->subcarriers;
            m.units_per_symbol = n;
            m.known_symbols = std::max(1, kPreambleBits / n);
            m.symbols_per_packet = (kPacketBits + n - 1) / n;
            for (int s = 0; s < m.known_symbols; ++s) {
                for (int i = 0; i < n; ++i) {
                    const int bit = s * n + i;
                    if (bit >= kPreambleBits) continue;
                    if (preamble[static_cast<std::size_t>(bit)]) {
                        add_on(static_cast<std::size_t>(i), s, 1.0);
                        if (s == 0) m.first_symbol_on.push_back(i);
                    }
                }
            }
            break;
        }
    }
    return m;
}

// Carrier energy as the root power sum over bin +-1. Off-grid carriers
// scallop a single bin, and the two gated segments a window may straddle
// interfere there; the three-bin power sum is stable against both.
double band_mag(const SpectraStream& s, std::size_t frame, std::size_t bin) {
    const std::size_t lo = bin > 0 ? bin - 1 : 0;
    const std::size_t hi = std::min(bin + 1, s.n_bins - 1);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double m = s.mag(frame, k);
        acc += m * m;
    }
    return std::sqrt(acc);
}

// ---- expected-magnitude template -----------------------------------------

double hann_cdf(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x - std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi);
}

// Window-mass-weighted expected magnitude (relative units) at a bin for a
// window centered at time c; the carrier-bin response of a gated coherent
// tone is proportional to the Hann mass of the on-segments inside the window.
double expected_mag(const std::vector<OnInterval>& on, double c, double window_len) {
    const double left = c - window_len / 2.0;
    double acc = 0.0;
    for (const OnInterval& iv : on) {
        const double u0 = (iv.begin - left) / window_len;
        const double u1 = (iv.end - left) / window_len;
        if (u1 <= 0.0 || u0 >= 1.0) continue;
        acc += iv.weight * (hann_cdf(u1) - hann_cdf(u0));
    }
    return acc;
}

struct Template {
    // Flattened per-frequency expected curves on the hop grid.
    std::vector<std::vector<double>> values;  // [freq][grid step]
    double grid_origin = 0.0;  // center time of grid step 0, rel. packet start
    std::size_t steps = 0;
};

Template build_template(const PreambleModel& m, const SpectraStream& stream) {
    Template t;
    const double wl = static_cast<double>(stream.window_length);
    const double lead = kSyncLeadBits * m.symbol_period;
    const double known_end = m.known_symbols * m.symbol_period;
    t.grid_origin = -lead;
    // Stop before windows start overlapping unknown payload bits.
    const double last_center = known_end - wl / 2.0;
    double span = last_center - t.grid_origin;
    if (span < m.symbol_period) span = m.symbol_period;
    t.steps = static_cast<std::size_t>(span / static_cast<double>(stream.hop)) + 1;
    t.values.resize(m.bins.size());
    for (std::size_t f = 0; f < m.bins.size(); ++f) {
        t.values[f].resize(t.steps);
        for (std::size_t j = 0; j < t.steps; ++j) {
            const double c = t.grid_origin + static_cast<double>(j * stream.hop);
            t.values[f][j] = expected_mag(m.intervals[f], c, wl);
        }
    }
    return t;
}

// Pearson correlation between the template and the observed magnitudes with
// the template's grid step 0 aligned to stream frame tau (may be negative).
double correlation_at(const SpectraStream& stream, const PreambleModel& m,
                      const Template& t, std::int64_t tau, std::size_t min_points) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t f = 0; f < m.bins.size(); ++f) {
        if (m.bins[f] >= stream.n_bins) continue;
        for (std::size_t j = 0; j < t.steps; ++j) {
            const std::int64_t frame = tau + static_cast<std::int64_t>(j);
            if (frame < 0 || frame >= static_cast<std::int64_t>(stream.n_frames)) continue;
            const double x = t.values[f][j];
            const double y = band_mag(stream, static_cast<std::size_t>(frame), m.bins[f]);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
            ++n;
        }
    }
    if (n < min_points) return 0.0;
    const double nn = static_cast<double>(n);
    const double cov = sxy - sx * sy / nn;
    const double vx = sxx - sx * sx / nn;
    const double vy = syy - sy * sy / nn;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

std::size_t min_template_points(std::size_t total) {
    // Short noise stretches at stream edges must not score; demand most of
    // the template.
    return std::max<std::size_t>(24, 2 * total / 3);
}

double packet_start_for_tau(const SpectraStream& stream, const Template& t,
                            std::int64_t tau) {
    // Grid step 0's window center sits at grid_origin relative to packet start.
    return static_cast<double>(tau) * static_cast<double>(stream.hop) +
           static_cast<double>(stream.window_length) / 2.0 - t.grid_origin;
}

// Mean magnitude sum over the onset bins for frames whose window centers fall
// inside [c0, c1); returns false when no frame qualifies.
bool mean_onset_energy(const SpectraStream& stream, const PreambleModel& m,
                       double c0, double c1, double* out) {
    double sum = 0.0;
    int count = 0;
    const auto lo = static_cast<std::int64_t>(
        std::floor((c0 - stream.window_length / 2.0) / stream.hop));
    for (std::int64_t f = std::max<std::int64_t>(0, lo);
         f < static_cast<std::int64_t>(stream.n_frames); ++f) {
        const double c = stream.frame_center_sample(static_cast<std::size_t>(f));
        if (c >= c1) break;
        if (c < c0) continue;
        double u = 0.0;
        for (int idx : m.first_symbol_on) {
            u += band_mag(stream, static_cast<std::size_t>(f), m.bins[static_cast<std::size_t>(idx)]);
        }
        sum += u;
        ++count;
    }
    if (count == 0) return false;
    *out = sum / count;
    return true;
}

// Locates where the onset-bin energy crosses the low/high midpoint near the
// coarse start; window symmetry puts the crossing center at the tone onset.
double refine_onset(const SpectraStream& stream, const PreambleModel& m,
                    double coarse_start) {
    const double T = m.symbol_period;
    double u_low = 0.0, u_high = 0.0;
    if (!mean_onset_energy(stream, m, coarse_start - 2.0 * T, coarse_start - T / 2.0,
                           &u_low)) {
        u_low = 0.0;
    }
    if (!mean_onset_energy(stream, m, coarse_start + T / 4.0, coarse_start + 3.0 * T / 4.0,
                           &u_high)) {
        return coarse_start;
    }
    if (u_high <= u_low) return coarse_start;
    // A window centered exactly on the onset captures half the full-window
    // mass, while the mid-bit plateau captures less than the full mass when
    // the bit is shorter than the window; aim the crossing accordingly.
    const double wl = static_cast<double>(stream.window_length);
    const double lo_u = std::clamp(0.5 - T / (2.0 * wl), 0.0, 1.0);
    const double hi_u = std::clamp(0.5 + T / (2.0 * wl), 0.0, 1.0);
    const double plateau_mass = hann_cdf(hi_u) - hann_cdf(lo_u);
    const double ratio = std::clamp(0.5 / std::max(plateau_mass, 0.5), 0.4, 1.0);
    const double mid = u_low + ratio * (u_high - u_low);

    auto onset_energy = [&](std::int64_t f) {
        double u = 0.0;
        for (int idx : m.first_symbol_on) {
            u += band_mag(stream, static_cast<std::size_t>(f), m.bins[static_cast<std::size_t>(idx)]);
        }
        return u;
    };

    const double c_lo = coarse_start - 1.5 * T;
    const double c_hi = coarse_start + 1.5 * T;
    std::int64_t f0 = static_cast<std::int64_t>(
        std::floor((c_lo - stream.window_length / 2.0) / stream.hop));
    f0 = std::max<std::int64_t>(f0, 0);
    double prev_u = -1.0;
    std::int64_t prev_f = -1;
    for (std::int64_t f = f0; f < static_cast<std::int64_t>(stream.n_frames); ++f) {
        const double c = stream.frame_center_sample(static_cast<std::size_t>(f));
        if (c > c_hi) break;
        if (c < c_lo) continue;
        const double u = onset_energy(f);
        if (prev_f >= 0 && prev_u < mid && u >= mid) {
            const double frac = (mid - prev_u) / (u - prev_u);
            const double c_prev = stream.frame_center_sample(static_cast<std::size_t>(prev_f));
            return c_prev + frac * (c - c_prev);
        }
        prev_u = u;
        prev_f = f;
    }
    return coarse_start;
}

// ---- level training -------------------------------------------------------

void train_levels(const SpectraStream& stream, const PreambleModel& m,
                  double packet_start, SyncInfo* sync) {
    const std::size_t nf = m.bins.size();
    std::vector<double> hi_sum(nf, 0.0), lo_sum(nf, 0.0);
    std::vector<int> hi_n(nf, 0), lo_n(nf, 0);
    const double T = m.symbol_period;
    for (int s = 0; s < m.known_symbols; ++s) {
        const double c0 = packet_start + s * T + T / 4.0;
        const double c1 = packet_start + s * T + 3.0 * T / 4.0;
        const auto first = static_cast<std::int64_t>(
            std::ceil((c0 - stream.window_length / 2.0) / stream.hop));
        for (std::int64_t f = std::max<std::int64_t>(0, first);
             f < static_cast<std::int64_t>(stream.n_frames); ++f) {
            const double c = stream.frame_center_sample(static_cast<std::size_t>(f));
            if (c >= c1) break;
            if (c < c0) continue;
            for (std::size_t b = 0; b < nf; ++b) {
                double on_weight = 0.0;
                double max_weight = 0.0;
                for (const OnInterval& iv : m.intervals[b]) {
                    max_weight = std::max(max_weight, iv.weight);
                    if (c >= iv.begin + packet_start && c < iv.end + packet_start) {
                        on_weight = iv.weight;
                    }
                }
                // ASK's low-amplitude bits belong to the low bucket even
                // though the carrier is present.
                const bool on = on_weight > 0.5 * max_weight;
                const double v = band_mag(stream, static_cast<std::size_t>(f), m.bins[b]);
                if (on) {
                    hi_sum[b] += v;
                    ++hi_n[b];
                } else {
                    lo_sum[b] += v;
                    ++lo_n[b];
                }
            }
        }
    }
    double hi_mean = 0.0;
    int hi_count = 0;
    for (std::size_t b = 0; b < nf; ++b) {
        if (hi_n[b] > 0) {
            hi_mean += hi_sum[b] / hi_n[b];
            ++hi_count;
        }
    }
    hi_mean = hi_count > 0 ? hi_mean / hi_count : 0.0;
    double lo_mean = 0.0;
    int lo_count = 0;
    for (std::size_t b = 0; b < nf; ++b) {
        if (lo_n[b] > 0) {
            lo_mean += lo_sum[b] / lo_n[b];
            ++lo_count;
        }
    }
    lo_mean = lo_count > 0 ? lo_mean / lo_count : 0.0;

    sync->level_high.resize(nf);
    sync->level_low.resize(nf);
    sync->threshold.resize(nf);
    for (std::size_t b = 0; b < nf; ++b) {
        // Sub-carriers that stay off during the preamble borrow the mean
        // high level; strips carry roughly equal energy.
        sync->level_high[b] = hi_n[b] > 0 ? hi_sum[b] / hi_n[b] : hi_mean;
        sync->level_low[b] = lo_n[b] > 0 ? lo_sum[b] / lo_n[b] : lo_mean;
        sync->threshold[b] = 0.5 * (sync->level_high[b] + sync->level_low[b]);
    }
}

std::optional<SyncInfo> detect_with_model(const SpectraStream& stream,
                                          const PreambleModel& m,
                                          std::int64_t search_from_tau) {
    const double covered =
        static_cast<double>(stream.n_frames - 1) * stream.hop + stream.window_length;
    if (covered < 8.0 * m.symbol_period) return std::nullopt;

    const Template t = build_template(m, stream);
    const std::size_t total_points = t.steps * m.bins.size();
    const std::size_t min_points = min_template_points(total_points);

    // Allow negative offsets so a packet starting at sample 0 lines up.
    const std::int64_t tau_min = -static_cast<std::int64_t>(
        (stream.window_length / 2.0 - t.grid_origin) / stream.hop + 1.0);
    std::int64_t tau = std::max(search_from_tau, tau_min);
    const std::int64_t tau_end = static_cast<std::int64_t>(stream.n_frames);

    for (; tau < tau_end; ++tau) {
        const double score = correlation_at(stream, m, t, tau, min_points);
        if (score < kPreambleScoreThreshold) continue;
        // Local peak over one preamble span.
        std::int64_t best_tau = tau;
        double best = score;
        const std::int64_t probe_end =
            std::min(tau_end, tau + static_cast<std::int64_t>(t.steps));
        for (std::int64_t p = tau + 1; p < probe_end; ++p) {
            const double s = correlation_at(stream, m, t, p, min_points);
            if (s > best) {
                best = s;
                best_tau = p;
            }
        }
        SyncInfo sync;
        sync.bit_period = m.symbol_period;
        sync.score = best;
        const double coarse = packet_start_for_tau(stream, t, best_tau);
        sync.packet_start = refine_onset(stream, m, coarse);
        train_levels(stream, m, sync.packet_start, &sync);
        return sync;
    }
    return std::nullopt;
}

// ---- symbol decisions ------------------------------------------------------

struct DecodedBits {
    BitStream bits;  // kPacketBits entries
    std::vector<double> confidence;
};

DecodedBits decode_symbols(const SpectraStream& stream, const SyncInfo& sync,
                           const ModulationParams& params, const PreambleModel& m) {
    DecodedBits out;
    out.bits.assign(kPacketBits, 0);
    out.confidence.assign(kPacketBits, 0.0);
    const double T = sync.bit_period;
    const int per = m.units_per_symbol;

    for (int s = 0; s < m.symbols_per_packet; ++s) {
        const double t0 = sync.packet_start + s * T;
        const double t1 = t0 + T;
        const auto first = static_cast<std::int64_t>(
            std::ceil((t0 - stream.window_length / 2.0) / stream.hop));

        int hops = 0;
        std::vector<int> votes;  // per symbol value (fsk) or per sub (ofdm 1-votes)
        std::vector<double> mag_sum(m.bins.size(), 0.0);
        if (params.scheme == Scheme::fsk) {
            votes.assign(m.bins.size(), 0);
        } else {
            votes.assign(static_cast<std::size_t>(per), 0);
        }

        for (std::int64_t f = std::max<std::int64_t>(0, first);
             f < static_cast<std::int64_t>(stream.n_frames); ++f) {
            const double c = stream.frame_center_sample(static_cast<std::size_t>(f));
            if (c >= t1) break;
            if (c < t0) continue;
            ++hops;
            switch (params.scheme) {
                case Scheme::ook:
                case Scheme::ask: {
                    const double v = band_mag(stream, static_cast<std::size_t>(f), m.bins[0]);
                    mag_sum[0] += v;
                    if (v >= sync.threshold[0]) ++votes[0];
                    break;
                }
                case Scheme::fsk: {
                    std::size_t best = 0;
                    double best_v = -1.0;
                    for (std::size_t b = 0; b < m.bins.size(); ++b) {
                        const double v = band_mag(stream, static_cast<std::size_t>(f), m.bins[b]);
                        mag_sum[b] += v;
                        if (v > best_v) {
                            best_v = v;
                            best = b;
                        }
                    }
                    ++votes[best];
                    break;
                }
                case Scheme::ofdm: {
                    for (std::size_t b = 0; b < m.bins.size(); ++b) {
                        const double v = band_mag(stream, static_cast<std::size_t>(f), m.bins[b]);
                        mag_sum[b] += v;
                        if (v >= sync.threshold[b]) ++votes[b];
                    }
                    break;
                }
            }
        }
        if (hops == 0) {
            throw std::runtime_error("truncated packet: stream ends mid-packet");
        }

        switch (params.scheme) {
            case Scheme::ook:
            case Scheme::ask: {
                const int bit = votes[0] * 2 >= hops ? 1 : 0;
                const int winner = bit ? votes[0] : hops - votes[0];
                out.bits[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(bit);
                out.confidence[static_cast<std::size_t>(s)] =
                    static_cast<double>(2 * winner - hops) / hops;
                break;
            }
            case Scheme::fsk: {
                std::size_t best = 0;
                for (std::size_t b = 1; b < votes.size(); ++b) {
                    if (votes[b] > votes[best] ||
                        (votes[b] == votes[best] && mag_sum[b] > mag_sum[best])) {
                        best = b;
                    }
                }
                int runner = -1;
                for (std::size_t b = 0; b < votes.size(); ++b) {
                    if (b != best) runner = std::max(runner, votes[b]);
                }
                const double conf =
                    static_cast<double>(votes[best] - std::max(runner, 0)) / hops;
                const int k = params.bits_per_symbol();
                for (int j = 0; j < k; ++j) {
                    const std::size_t idx = static_cast<std::size_t>(s * k + j);
                    if (idx >= static_cast<std::size_t>(kPacketBits)) break;
                    out.bits[idx] =
                        static_cast<std::uint8_t>((best >> (k - 1 - j)) & 1);
                    out.confidence[idx] = conf;
                }
                break;
            }
            case Scheme::ofdm: {
                for (std::size_t b = 0; b < votes.size(); ++b) {
                    const std::size_t idx =
                        static_cast<std::size_t>(s) * static_cast<std::size_t>(per) + b;
                    if (idx >= static_cast<std::size_t>(kPacketBits)) break;
                    const int bit = votes[b] * 2 >= hops ? 1 : 0;
                    const int winner = bit ? static_cast<int>(votes[b])
                                           : hops - static_cast<int>(votes[b]);
                    out.bits[idx] = static_cast<std::uint8_t>(bit);
                    out.confidence[idx] = static_cast<double>(2 * winner - hops) / hops;
                }
                break;
            }
        }
    }
    return out;
}

DecodeResult result_from_bits(const DecodedBits& decoded, double packet_start,
                              int sample_rate) {
    DecodeResult r;
    r.payload =
        static_cast<std::uint32_t>(read_bits_msb(decoded.bits, kPreambleBits, kPayloadBits));
    r.received_crc = static_cast<std::uint8_t>(
        read_bits_msb(decoded.bits, kPreambleBits + kPayloadBits, kCrcBits));
    r.calculated_crc = crc8(r.payload);
    r.status = r.received_crc == r.calculated_crc ? DecodeResult::Status::ok
                                                  : DecodeResult::Status::crc_mismatch;
    for (int i = 0; i < 40; ++i) {
        r.bit_confidence[static_cast<std::size_t>(i)] =
            decoded.confidence[static_cast<std::size_t>(kPreambleBits + i)];
    }
    r.start_time_s = packet_start / sample_rate;
    return r;
}

void check_ofdm_resolvable(const OfdmPlan& plan, const SpectraStream& stream) {
    if (plan.subcarrier_spacing_hz < 2.0 * stream.bin_hz()) {
        throw std::runtime_error("unresolvable OFDM plan: sub-carriers closer than 2 bins");
    }
}

std::vector<DecodeResult> scan_with_model(const SpectraStream& stream,
                                          const ModulationParams& params,
                                          const PreambleModel& m) {
    std::vector<DecodeResult> results;
    std::int64_t tau_from = std::numeric_limits<std::int64_t>::min();
    for (;;) {
        std::optional<SyncInfo> sync = detect_with_model(stream, m, tau_from);
        if (!sync) break;
        DecodedBits decoded;
        try {
            decoded = decode_symbols(stream, *sync, params, m);
        } catch (const std::runtime_error&) {
            break;  // truncated tail
        }
        results.push_back(result_from_bits(decoded, sync->packet_start, stream.sample_rate));
        const double packet_end =
            sync->packet_start + m.symbols_per_packet * m.symbol_period;
        // Resume so the next candidate start sits at or past this packet's end
        // (minus half a symbol of tolerance).
        const double next_start = packet_end - m.symbol_period / 2.0;
        const double lead = kSyncLeadBits * m.symbol_period;
        tau_from = static_cast<std::int64_t>(std::ceil(
            (next_start - lead - stream.window_length / 2.0) / stream.hop));
    }
    return results;
}

}  // namespace

std::optional<SyncInfo> detect_preamble(const SpectraStream& stream,
                                        const ModulationParams& params,
                                        const OfdmPlan* plan,
                                        std::int64_t search_from_offset) {
    if (params.scheme == Scheme::ofdm) {
        if (!plan) throw std::invalid_argument("OFDM detection requires a plan");
        check_ofdm_resolvable(*plan, stream);
    }
    const PreambleModel m = build_preamble_model(stream, params, plan);
    return detect_with_model(stream, m, search_from_offset);
}

DecodeResult demodulate_packet(const SpectraStream& stream, const SyncInfo& sync,
                               const ModulationParams& params) {
    if (params.scheme == Scheme::ofdm) {
        throw std::invalid_argument("use demodulate_ofdm for the OFDM scheme");
    }
    const PreambleModel m = build_preamble_model(stream, params, nullptr);
    const DecodedBits decoded = decode_symbols(stream, sync, params, m);
    return result_from_bits(decoded, sync.packet_start, stream.sample_rate);
}

std::vector<DecodeResult> scan_stream(const SpectraStream& stream,
                                      const ModulationParams& params,
                                      const OfdmPlan* plan) {
    if (params.scheme == Scheme::ofdm) {
        if (!plan) throw std::invalid_argument("OFDM scan requires a plan");
        check_ofdm_resolvable(*plan, stream);
    }
    const PreambleModel m = build_preamble_model(stream, params, plan);
    return scan_with_model(stream, params, m);
}

std::vector<DecodeResult> demodulate_ofdm(const SpectraStream& stream,
                                          const OfdmPlan& plan,
                                          const ModulationParams& params) {
    ModulationParams p = params;
    p.scheme = Scheme::ofdm;
    check_ofdm_resolvable(plan, stream);
    const PreambleModel m = build_preamble_model(stream, p, &plan);
    return scan_with_model(stream, p, m);
}

}  // namespace rastertone
