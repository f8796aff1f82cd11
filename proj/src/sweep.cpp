#include "rastertone/sweep.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rastertone/emission.h"

namespace rastertone {

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int count_bit_errors(const BitStream& sent, const BitStream& got) {
    int errors = 0;
    for (std::size_t i = 0; i < sent.size() && i < got.size(); ++i) {
        if (sent[i] != got[i]) ++errors;
    }
    return errors;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
    // splitmix64 over the concatenated words
    std::uint64_t x = seed;
    for (std::uint64_t w : {a, b, c}) {
        x += 0x9E3779B97F4A7C15ull + w;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        x = z ^ (z >> 31);
    }
    return x;
}

std::string SnrPoint::label() const {
    if (profile_key) {
        return profile_key->brand + ":" + format_double(profile_key->distance_m) + ":" +
               std::to_string(profile_key->bit_rate_bps);
    }
    return format_double(snr_db.value_or(
        std::numeric_limits<double>::quiet_NaN()));
}

TrialOutcome run_packet_trial(std::uint32_t raw_payload, const ModulationParams& raw_params,
                              const TimingConfig& timing, const TrialChannel& channel,
                              const OfdmPlan* plan, bool measure_output_snr) {
    const std::uint32_t payload = raw_payload;
    ModulationParams params = raw_params;
    snap_to_raster(params, timing);
    TrialOutcome outcome;
    PacketScheduleOptions opts;
    opts.lead_bits = 4;  // silent lead so the detector sees pre-packet context
    const FrameSchedule schedule =
        schedule_packets({payload}, params, timing, plan, opts);
    const Waveform clean = emit_schedule(schedule);
    outcome.duration_s = clean.duration_s();

    ChannelParams cp;
    cp.target_snr_db = channel.target_snr_db;
    cp.fixed_noise_sigma = channel.fixed_noise_sigma;
    cp.rng_seed = channel.seed;
    const std::vector<double> freqs = scheme_frequencies(params, plan);
    cp.carrier_hz = freqs.front();
    const bool noiseless = !channel.fixed_noise_sigma &&
                           std::isinf(channel.target_snr_db) &&
                           channel.target_snr_db > 0;
    const Waveform received = noiseless ? clean : apply_channel(clean, cp);
    if (measure_output_snr) {
        outcome.measured_snr_db = measure_snr(received, cp.carrier_hz).snr_db;
    }

    const SpectraStream stream = demod_spectra(received, params);
    const std::vector<DecodeResult> results =
        params.scheme == Scheme::ofdm ? demodulate_ofdm(stream, *plan, params)
                                      : scan_stream(stream, params);

    BitStream sent;
    append_bits_msb(sent, payload, kPayloadBits);
    append_bits_msb(sent, crc8(payload), kCrcBits);

    if (results.empty()) {
        outcome.detected = false;
        outcome.ok = false;
        outcome.bit_errors = 40;  // a missed packet loses every bit
        return outcome;
    }
    const DecodeResult& r = results.front();
    outcome.detected = true;
    outcome.ok = r.ok();
    outcome.bit_errors = count_bit_errors(sent, r.decided_bits());
    return outcome;
}

SweepReport run_sweep(const SweepConfig& config, const ChannelProfile* profile) {
    SweepReport report;
    if (config.snr_points.empty()) {
        throw std::invalid_argument("sweep needs at least one SNR point");
    }
    if (config.packets_per_point < 1) {
        throw std::invalid_argument("packets per point must be >= 1");
    }

    std::uint64_t grid_index = 0;
    for (Scheme scheme : config.schemes) {
        for (int bit_rate : config.bit_rates) {
            for (const SnrPoint& point : config.snr_points) {
                for (std::uint8_t brightness : config.brightness_levels) {
                    ++grid_index;
                    auto skip = [&](const std::string& reason) {
                        report.skipped.push_back(
                            SweepSkip{scheme, bit_rate, point.label(), reason});
                    };

                    double target = std::numeric_limits<double>::infinity();
                    if (point.profile_key) {
                        if (!profile) {
                            skip("no profile table loaded");
                            continue;
                        }
                        const auto snr = profile->lookup(point.profile_key->brand,
                                                         point.profile_key->distance_m,
                                                         point.profile_key->bit_rate_bps);
                        if (!snr) {
                            skip("no measurement at profile point " + point.label());
                            continue;
                        }
                        target = *snr;
                    } else if (point.snr_db) {
                        target = *point.snr_db;
                    }

                    SweepRow row;
                    row.scheme = scheme;
                    row.bit_rate = bit_rate;
                    row.brightness = brightness;
                    row.packets_sent = config.packets_per_point;
                    row.snr_db = config.fixed_noise_sigma
                                     ? std::numeric_limits<double>::quiet_NaN()
                                     : target;

                    ModulationParams params = config.base_params;
                    params.scheme = scheme;
                    params.bit_rate = bit_rate;
                    params.amplitude = brightness;
                    OfdmPlan plan;
                    const OfdmPlan* plan_ptr = nullptr;
                    try {
                        params.validate(config.timing);
                        if (scheme == Scheme::ofdm) {
                            plan = OfdmPlan::make(config.ofdm_subcarriers,
                                                  params.carrier_hz, params);
                            plan.validate(config.timing);
                            plan_ptr = &plan;
                        }
                    } catch (const std::exception& e) {
                        skip(e.what());
                        continue;
                    }

                    std::mt19937_64 payload_rng(
                        mix_seed(config.seed, grid_index, 0x70617931));
                    double total_duration = 0.0;
                    double snr_accum = 0.0;
                    int snr_count = 0;
                    bool failed = false;
                    for (int p = 0; p < config.packets_per_point; ++p) {
                        const std::uint32_t payload =
                            static_cast<std::uint32_t>(payload_rng());
                        TrialChannel ch;
                        ch.target_snr_db = target;
                        ch.fixed_noise_sigma = config.fixed_noise_sigma;
                        ch.seed = mix_seed(config.seed, grid_index,
                                           static_cast<std::uint64_t>(p), 0x6368616E);
                        const bool measure = config.fixed_noise_sigma.has_value() &&
                                             p < 3;  // enough for a stable mean
                        TrialOutcome out;
                        try {
                            out = run_packet_trial(payload, params, config.timing, ch,
                                                   plan_ptr, measure);
                        } catch (const std::exception& e) {
                            skip(e.what());
                            failed = true;
                            break;
                        }
                        if (out.ok) ++row.packets_ok;
                        row.bit_errors += out.bit_errors;
                        total_duration += out.duration_s;
                        if (measure) {
                            snr_accum += out.measured_snr_db;
                            ++snr_count;
                        }
                    }
                    if (failed) continue;
                    row.ber = static_cast<double>(row.bit_errors) /
                              (static_cast<double>(row.packets_sent) * 40.0);
                    row.throughput_bps_effective =
                        total_duration > 0.0 ? row.packets_ok * 32.0 / total_duration
                                             : 0.0;
                    row.measured_snr_db =
                        snr_count > 0 ? snr_accum / snr_count : row.snr_db;
                    report.rows.push_back(std::move(row));
                }
            }
        }
    }
    return report;
}

std::string SweepReport::to_csv() const {
    std::ostringstream out;
    out << "scheme,bit_rate,snr_db,brightness,packets_sent,packets_ok,bit_errors,ber,"
           "throughput_bps_effective,measured_snr_db\n";
    for (const SweepRow& r : rows) {
        out << scheme_name(r.scheme) << ',' << r.bit_rate << ',' << format_double(r.snr_db)
            << ',' << r.brightness << ',' << r.packets_sent << ',' << r.packets_ok << ','
            << r.bit_errors << ',' << format_double(r.ber) << ','
            << format_double(r.throughput_bps_effective) << ','
            << format_double(r.measured_snr_db) << '\n';
    }
    return out.str();
}

MultisourceReport run_multisource(const MultisourceConfig& config) {
    if (config.sources < 1 || config.sources > 4) {
        throw std::invalid_argument("multisource supports 1..4 sources");
    }
    if (static_cast<int>(config.carriers_hz.size()) != config.sources) {
        throw std::invalid_argument("one carrier per source required");
    }
    for (std::size_t i = 0; i < config.carriers_hz.size(); ++i) {
        for (std::size_t j = i + 1; j < config.carriers_hz.size(); ++j) {
            if (std::abs(config.carriers_hz[i] - config.carriers_hz[j]) < 500.0) {
                throw std::invalid_argument(
                    "carrier collision: sources closer than 500 Hz");
            }
        }
    }
    std::vector<double> gains = config.gains;
    if (gains.empty()) gains.assign(static_cast<std::size_t>(config.sources), 1.0);
    if (static_cast<int>(gains.size()) != config.sources) {
        throw std::invalid_argument("one gain per source required");
    }

    // Independent payload streams, one aligned schedule per source.
    std::vector<std::vector<std::uint32_t>> payloads(
        static_cast<std::size_t>(config.sources));
    std::vector<Waveform> waves;
    std::vector<ModulationParams> params(static_cast<std::size_t>(config.sources));
    for (int s = 0; s < config.sources; ++s) {
        std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(s), 0x736F7572));
        ModulationParams& p = params[static_cast<std::size_t>(s)];
        p.scheme = Scheme::ook;
        p.carrier_hz = config.carriers_hz[static_cast<std::size_t>(s)];
        p.bit_rate = config.bit_rate;
        p.amplitude = config.amplitude;
        snap_to_raster(p, config.timing);
        for (int k = 0; k < config.packets_per_source; ++k) {
            payloads[static_cast<std::size_t>(s)].push_back(
                static_cast<std::uint32_t>(rng()));
        }
        PacketScheduleOptions opts;
        opts.lead_bits = 4;
        const FrameSchedule schedule = schedule_packets(
            payloads[static_cast<std::size_t>(s)], p, config.timing, nullptr, opts);
        waves.push_back(emit_schedule(schedule));
    }

    const MixResult mixed = mix_sources(waves, gains);
    ChannelParams cp;
    cp.target_snr_db = config.snr_db;
    cp.rng_seed = mix_seed(config.seed, 0x6D697863);
    const Waveform received = std::isinf(config.snr_db) && config.snr_db > 0
                                  ? mixed.wave
                                  : apply_channel(mixed.wave, cp);

    MultisourceReport report;
    double duration = received.duration_s();
    MultisourceRow aggregate;
    aggregate.source = -1;
    for (int s = 0; s < config.sources; ++s) {
        const ModulationParams& p = params[static_cast<std::size_t>(s)];
        const SpectraStream stream = demod_spectra(received, p);
        const std::vector<DecodeResult> results = scan_stream(stream, p);

        MultisourceRow row;
        row.source = s;
        row.carrier_hz = p.carrier_hz;
        row.packets_sent = config.packets_per_source;
        // Match decodes to ground truth by transmission order.
        const auto& truth = payloads[static_cast<std::size_t>(s)];
        for (std::size_t k = 0; k < truth.size(); ++k) {
            BitStream sent;
            append_bits_msb(sent, truth[k], kPayloadBits);
            append_bits_msb(sent, crc8(truth[k]), kCrcBits);
            if (k < results.size()) {
                if (results[k].ok()) ++row.packets_ok;
                row.bit_errors += count_bit_errors(sent, results[k].decided_bits());
            } else {
                row.bit_errors += 40;
            }
        }
        row.ber = static_cast<double>(row.bit_errors) / (row.packets_sent * 40.0);
        row.throughput_bps_effective =
            duration > 0.0 ? row.packets_ok * 32.0 / duration : 0.0;
        aggregate.packets_sent += row.packets_sent;
        aggregate.packets_ok += row.packets_ok;
        aggregate.bit_errors += row.bit_errors;
        aggregate.throughput_bps_effective += row.throughput_bps_effective;
        report.rows.push_back(row);
    }
    aggregate.ber = static_cast<double>(aggregate.bit_errors) /
                    (aggregate.packets_sent * 40.0);
    report.rows.push_back(aggregate);
    return report;
}

std::string MultisourceReport::to_csv() const {
    std::ostringstream out;
    out << "source,carrier_hz,packets_sent,packets_ok,bit_errors,ber,"
           "throughput_bps_effective\n";
    for (const MultisourceRow& r : rows) {
        if (r.source < 0) out << "aggregate,";
        else out << r.source << ',';
        out << format_double(r.carrier_hz) << ',' << r.packets_sent << ',' << r.packets_ok
            << ',' << r.bit_errors << ',' << format_double(r.ber) << ','
            << format_double(r.throughput_bps_effective) << '\n';
    }
    return out.str();
}

}  // namespace rastertone
