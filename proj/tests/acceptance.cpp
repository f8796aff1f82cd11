// Acceptance suite: end-to-end checks of the whole pipeline at its default
// desk-scale configuration (1680x1050@60, 48 kHz audio). Prints one PASS/FAIL
// line per criterion; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rastertone/channel.h"
#include "rastertone/demod.h"
#include "rastertone/emission.h"
#include "rastertone/modulation.h"
#include "rastertone/packet.h"
#include "rastertone/profile.h"
#include "rastertone/spectra.h"
#include "rastertone/sweep.h"

using namespace rastertone;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
    std::printf("[%s] %d. %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

class Stopwatch {
  public:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const TimingConfig kTiming = make_timing(1680, 1050, 60);

ModulationParams make_params(Scheme scheme, int bit_rate) {
    ModulationParams p;
    p.scheme = scheme;
    p.carrier_hz = 12500.0;
    p.fsk_freqs = {12000.0, 13000.0};
    p.bit_rate = bit_rate;
    return p;
}

// ---- criterion 1 ----------------------------------------------------------

void criterion_raster_math() {
    Stopwatch sw;
    const bool clock_ok = compute_pixel_clock(kTiming) == 105840000;
    const TonePattern tone = make_tone_pattern(kTiming, 5000.0, 255);
    const bool cycle_ok = tone.cycle_size == 21168 && tone.half_cycle == 10584;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "pixel_clock=%lld cycle_size(5 kHz)=%lld",
                  static_cast<long long>(compute_pixel_clock(kTiming)),
                  static_cast<long long>(tone.cycle_size));
    report(1, "raster math", clock_ok && cycle_ok, detail, sw.elapsed());
}

// ---- criterion 2 ----------------------------------------------------------

void criterion_tone_fidelity() {
    Stopwatch sw;
    bool pass = true;
    std::string detail;
    for (double f : {5000.0, 10000.0, 15000.0, 20000.0}) {
        FrameSchedule schedule(kTiming);
        schedule.append(FramePattern::full_tone(kTiming, make_tone_pattern(kTiming, f, 255)),
                        30);
        const Waveform w = emit_schedule(schedule);
        const SpectraStream s = spectral_stream(w, 4096, 2048);
        std::vector<double> power(s.n_bins, 0.0);
        for (std::size_t t = 0; t < s.n_frames; ++t) {
            for (std::size_t k = 0; k < s.n_bins; ++k) {
                power[k] += static_cast<double>(s.mag(t, k)) * s.mag(t, k);
            }
        }
        const std::size_t lo = s.bin_of(3000.0), hi = s.bin_of(22000.0);
        std::size_t best = lo;
        for (std::size_t k = lo; k <= hi; ++k) {
            if (power[k] > power[best]) best = k;
        }
        const long long expected = static_cast<long long>(s.bin_of(f));
        const long long got = static_cast<long long>(best);
        if (std::llabs(got - expected) > 1) pass = false;
        detail += std::to_string(static_cast<int>(f)) + "Hz->bin" + std::to_string(got) +
                  "(want " + std::to_string(expected) + ") ";
    }
    report(2, "tone fidelity", pass, detail, sw.elapsed());
}

// ---- criterion 3 ----------------------------------------------------------

void criterion_noiseless_loopback() {
    Stopwatch sw;
    bool pass = true;
    std::string detail;
    struct Case {
        const char* name;
        Scheme scheme;
        std::vector<double> fsk;
        int ofdm_n;
    };
    const std::vector<Case> cases = {
        {"ook", Scheme::ook, {}, 0},
        {"bfsk", Scheme::fsk, {12000.0, 13000.0}, 0},
        {"4fsk", Scheme::fsk, {11000.0, 12000.0, 13000.0, 14000.0}, 0},
        {"ask", Scheme::ask, {}, 0},
        {"ofdm2", Scheme::ofdm, {}, 2},
    };
    for (const Case& c : cases) {
        ModulationParams p = make_params(c.scheme, 20);
        if (!c.fsk.empty()) p.fsk_freqs = c.fsk;
        OfdmPlan plan;
        const OfdmPlan* plan_ptr = nullptr;
        if (c.scheme == Scheme::ofdm) {
            plan = OfdmPlan::make(c.ofdm_n, p.carrier_hz, p);
            plan_ptr = &plan;
        }
        std::mt19937_64 rng(mix_seed(1, 0x6C6F6F70, static_cast<std::uint64_t>(c.scheme)));
        int ok = 0;
        std::int64_t errors = 0;
        for (int i = 0; i < 100; ++i) {
            const std::uint32_t payload = static_cast<std::uint32_t>(rng());
            TrialChannel ch;  // noiseless
            const TrialOutcome out = run_packet_trial(payload, p, kTiming, ch, plan_ptr);
            if (out.ok && out.bit_errors == 0) ++ok;
            errors += out.bit_errors;
        }
        if (ok != 100 || errors != 0) pass = false;
        detail += std::string(c.name) + "=" + std::to_string(ok) + "/100 ";
    }
    report(3, "noiseless loopback", pass, detail + "ber=0 required", sw.elapsed());
}

// ---- criterion 4 ----------------------------------------------------------

void criterion_crc_guarantee() {
    Stopwatch sw;
    std::mt19937_64 rng(4242);
    int single_caught = 0, double_caught = 0;
    const int single_total = 40, double_total = 40 * 39 / 2;
    const std::uint32_t payload = static_cast<std::uint32_t>(rng());
    const BitStream clean = frame_packet(payload);
    for (int i = 8; i < 48; ++i) {
        BitStream bits = clean;
        bits[static_cast<std::size_t>(i)] ^= 1;
        if (!deframe(bits).ok) ++single_caught;
    }
    for (int i = 8; i < 48; ++i) {
        for (int j = i + 1; j < 48; ++j) {
            BitStream bits = clean;
            bits[static_cast<std::size_t>(i)] ^= 1;
            bits[static_cast<std::size_t>(j)] ^= 1;
            if (!deframe(bits).ok) ++double_caught;
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "single %d/%d double %d/%d", single_caught,
                  single_total, double_caught, double_total);
    report(4, "CRC guarantee", single_caught == single_total && double_caught == double_total,
           detail, sw.elapsed());
}

// ---- criterion 5 ----------------------------------------------------------

struct PointResult {
    int ok = 0;
    std::int64_t bit_errors = 0;
    double ber() const { return static_cast<double>(bit_errors) / (100.0 * 40.0); }
};

PointResult run_point(Scheme scheme, int bit_rate, double snr_db, std::uint64_t salt) {
    const ModulationParams p = make_params(scheme, bit_rate);
    std::mt19937_64 rng(mix_seed(5, salt, static_cast<std::uint64_t>(scheme)));
    PointResult r;
    for (int i = 0; i < 100; ++i) {
        const std::uint32_t payload = static_cast<std::uint32_t>(rng());
        TrialChannel ch;
        ch.target_snr_db = snr_db;
        ch.seed = mix_seed(50, salt, static_cast<std::uint64_t>(i),
                           static_cast<std::uint64_t>(scheme));
        const TrialOutcome out = run_packet_trial(payload, p, kTiming, ch);
        if (out.ok) ++r.ok;
        r.bit_errors += out.bit_errors;
    }
    return r;
}

void criterion_operating_points(const ChannelProfile& profile) {
    Stopwatch sw;
    const double snr_vs = profile.lookup("ViewSonic", 1.0, 20).value_or(-1.0);
    const double snr_tv = profile.lookup("TV", 0.0, 10).value_or(-1.0);
    const double snr_worst = profile.lookup("Samsung", 2.5, 20).value_or(-1.0);
    bool pass = snr_vs == 34.0 && snr_tv == 38.0 && snr_worst == 5.0;
    std::string detail = "profile 34/38/5 dB; ";
    for (Scheme scheme : {Scheme::ook, Scheme::fsk}) {
        const PointResult at34 = run_point(scheme, 20, snr_vs, 0x766965);
        const PointResult at38 = run_point(scheme, 10, snr_tv, 0x747600);
        const PointResult at5 = run_point(scheme, 20, snr_worst, 0x73616D);
        if (at34.ok < 99 || at38.ok < 99) pass = false;
        if (at5.ber() < at34.ber()) pass = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: 34dB %d/100, 38dB %d/100, ber5=%.3f>=ber34=%.4f; ",
                      scheme_name(scheme), at34.ok, at38.ok, at5.ber(), at34.ber());
        detail += buf;
    }
    report(5, "operating-point robustness", pass, detail, sw.elapsed());
}

// ---- criterion 6 ----------------------------------------------------------

void criterion_brightness() {
    Stopwatch sw;
    const double f = 12500.0;
    std::vector<double> powers;
    std::vector<Waveform> waves;
    for (int v : {1, 3, 7, 15, 255}) {
        FrameSchedule schedule(kTiming);
        schedule.append(FramePattern::full_tone(
                            kTiming, make_tone_pattern(kTiming, f, static_cast<std::uint8_t>(v))),
                        60);
        waves.push_back(emit_schedule(schedule));
        const SpectraStream s = spectral_stream(waves.back(), 4096, 2048);
        const std::size_t bin = s.bin_of(f);
        double power = 0.0;
        for (std::size_t t = 0; t < s.n_frames; ++t) {
            power += static_cast<double>(s.mag(t, bin)) * s.mag(t, bin);
        }
        powers.push_back(power / static_cast<double>(s.n_frames));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < powers.size(); ++i) {
        if (!(powers[i] > powers[i - 1])) increasing = false;
    }

    // SNR spread between V=1 and V=255 under one fixed noise floor.
    const double sigma = 0.003;
    auto with_noise = [&](const Waveform& w, std::uint64_t seed) {
        Waveform out = w;
        const Waveform n = white_noise(w.sample_rate, w.samples.size(), sigma, seed);
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
            out.samples[i] += n.samples[i];
        }
        return measure_snr(out, f).snr_db;
    };
    const double snr_dim = with_noise(waves.front(), 61);
    const double snr_bright = with_noise(waves.back(), 62);
    const double spread = snr_bright - snr_dim;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "power strictly increasing=%d; SNR %.1f dB (V=1) -> %.1f dB (V=255), "
                  "spread %.1f dB",
                  increasing ? 1 : 0, snr_dim, snr_bright, spread);
    report(6, "brightness monotonicity", increasing && spread >= 25.0, detail,
           sw.elapsed());
}

// ---- criterion 7 ----------------------------------------------------------

void criterion_multisource() {
    Stopwatch sw;
    MultisourceConfig config;
    config.timing = kTiming;
    config.sources = 4;
    config.carriers_hz = {6000.0, 9000.0, 14500.0, 15500.0};
    config.snr_db = 25.0;
    config.packets_per_source = 20;
    config.bit_rate = 20;
    config.seed = 7;
    const MultisourceReport multi = run_multisource(config);

    MultisourceConfig single = config;
    single.sources = 1;
    single.carriers_hz = {6000.0};
    const MultisourceReport one = run_multisource(single);

    bool pass = true;
    std::string detail;
    double aggregate = 0.0;
    for (const MultisourceRow& row : multi.rows) {
        if (row.source < 0) {
            aggregate = row.throughput_bps_effective;
            continue;
        }
        if (row.bit_errors != 0 || row.packets_ok != 20) pass = false;
        detail += "src" + std::to_string(row.source) + "=" +
                  std::to_string(row.packets_ok) + "/20 ";
    }
    const double single_tp = one.rows.front().throughput_bps_effective;
    const double ratio = aggregate / (4.0 * single_tp);
    if (!(ratio > 0.95 && ratio < 1.05)) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "aggregate/4x-single=%.3f", ratio);
    report(7, "multi-source", pass, detail + buf, sw.elapsed());
}

// ---- criterion 8 ----------------------------------------------------------

void criterion_sync_and_false_positives() {
    Stopwatch sw;
    const ModulationParams p = make_params(Scheme::ook, 10);
    const double bit_period = 4800.0;

    bool sync_ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(mix_seed(8, static_cast<std::uint64_t>(trial)));
        const std::uint32_t payload = static_cast<std::uint32_t>(rng());
        PacketScheduleOptions opts;
        opts.lead_bits = 5;
        const Waveform clean =
            emit_schedule(schedule_packets({payload}, p, kTiming, nullptr, opts));
        ChannelParams cp;
        cp.target_snr_db = 25.0;
        cp.rng_seed = mix_seed(80, static_cast<std::uint64_t>(trial));
        cp.carrier_hz = p.carrier_hz;
        const Waveform w = apply_channel(clean, cp);
        const SpectraStream stream = demod_spectra(w, p);
        const auto sync = detect_preamble(stream, p);
        const double true_start = 5.0 * bit_period;
        if (!sync) {
            sync_ok = false;
            continue;
        }
        const double err = std::abs(sync->packet_start - true_start);
        worst = std::max(worst, err);
        if (err > bit_period / 4.0) sync_ok = false;
    }

    int fired = 0;
    for (int segment = 0; segment < 1000; ++segment) {
        const Waveform noise = white_noise(
            48000, 48000, 0.2, mix_seed(88, static_cast<std::uint64_t>(segment)));
        const SpectraStream stream = demod_spectra(noise, p);
        if (detect_preamble(stream, p)) ++fired;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "worst sync error %.0f samples (budget %.0f); false positives %d/1000",
                  worst, bit_period / 4.0, fired);
    report(8, "sync and false positives", sync_ok && fired < 10, detail, sw.elapsed());
}

// ---- criterion 9 ----------------------------------------------------------

void criterion_determinism() {
    Stopwatch sw;
    SweepConfig config;
    config.timing = kTiming;
    config.schemes = {Scheme::ook, Scheme::fsk};
    config.bit_rates = {20};
    config.snr_points = {SnrPoint{15.0, {}}, SnrPoint{25.0, {}}};
    config.packets_per_point = 5;
    config.seed = 99;
    const std::string a = run_sweep(config).to_csv();
    const std::string b = run_sweep(config).to_csv();
    char detail[96];
    std::snprintf(detail, sizeof(detail), "csv bytes %zu, runs identical=%d", a.size(),
                  a == b ? 1 : 0);
    report(9, "determinism", !a.empty() && a == b, detail, sw.elapsed());
}

}  // namespace

int main() {
    std::printf("acceptance: desk-scale pipeline checks at 1680x1050@60, 48 kHz\n");
    const std::string profile_path =
        std::string(RASTERTONE_PROFILE_DIR) + "/table2_snr.csv";
    const ChannelProfile profile = ChannelProfile::from_csv_file(profile_path);

    criterion_raster_math();
    criterion_tone_fidelity();
    criterion_noiseless_loopback();
    criterion_crc_guarantee();
    criterion_operating_points(profile);
    criterion_brightness();
    criterion_multisource();
    criterion_sync_and_false_positives();
    criterion_determinism();

    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
