// Command-line front end: transmit bytes to frames + WAV, receive WAV back to
// bytes, run BER/SNR sweeps against the bundled measurement profiles, and
// simulate multi-screen transmissions.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rastertone/channel.h"
#include "rastertone/demod.h"
#include "rastertone/emission.h"
#include "rastertone/modulation.h"
#include "rastertone/profile.h"
#include "rastertone/sweep.h"
#include "rastertone/wave.h"

using namespace rastertone;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOpts {
    std::string scheme = "ook";
    int bit_rate = 10;
    double carrier = 12500.0;
    std::string fsk_freqs = "12000,13000";
    int ofdm_n = 2;
    int brightness = 255;
    int ask_low = 64;
    std::string timing = "1680x1050@60";
    int sample_rate = 48000;
    std::uint64_t seed = 1;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

TimingConfig parse_timing(const std::string& text, int sample_rate) {
    // WxH@Hz[:htotal]
    int w = 0, h = 0, hz = 0, htotal = 0;
    const int n = std::sscanf(text.c_str(), "%dx%d@%d:%d", &w, &h, &hz, &htotal);
    if (n < 3) {
        throw CLI::ValidationError("--timing", "expected WxH@Hz[:htotal]");
    }
    return make_timing(w, h, hz, n == 4 ? htotal : 0, sample_rate);
}

ModulationParams params_from(const CommonOpts& o, const TimingConfig& timing) {
    ModulationParams p;
    p.scheme = scheme_from_name(o.scheme);
    p.carrier_hz = o.carrier;
    p.fsk_freqs = parse_double_list(o.fsk_freqs);
    p.bit_rate = o.bit_rate;
    p.amplitude = static_cast<std::uint8_t>(o.brightness);
    p.ask_low = static_cast<std::uint8_t>(o.ask_low);
    p.ask_high = static_cast<std::uint8_t>(o.brightness);
    const double requested = p.carrier_hz;
    snap_to_raster(p, timing);
    if (std::abs(p.carrier_hz - requested) > 0.5) {
        std::fprintf(stderr, "note: carrier %.1f Hz quantizes to %.1f Hz on this raster\n",
                     requested, p.carrier_hz);
    }
    return p;
}

void add_common(CLI::App* cmd, CommonOpts* o) {
    cmd->add_option("--scheme", o->scheme, "Modulation scheme: ook|fsk|ask|ofdm")
        ->check(CLI::IsMember({"ook", "fsk", "ask", "ofdm"}));
    cmd->add_option("--bitrate", o->bit_rate, "Bits (symbols) per second per carrier");
    cmd->add_option("--carrier", o->carrier, "OOK/ASK carrier or OFDM base (Hz)");
    cmd->add_option("--fsk-freqs", o->fsk_freqs,
                    "Comma-separated FSK tone set, indexed by symbol value");
    cmd->add_option("--ofdm-n", o->ofdm_n, "OFDM sub-carrier count");
    cmd->add_option("--brightness", o->brightness, "White level V (0-255)")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--ask-low", o->ask_low, "ASK low level (0-255)")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--timing", o->timing, "Raster timing WxH@Hz[:htotal]");
    cmd->add_option("--sample-rate", o->sample_rate, "Audio sample rate (Hz)");
    cmd->add_option("--seed", o->seed, "RNG seed");
}

std::vector<std::uint8_t> read_input_bytes(const std::string& path) {
    if (path == "-") {
        return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(std::cin),
                                         std::istreambuf_iterator<char>());
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(f),
                                     std::istreambuf_iterator<char>());
}

std::optional<double> parse_snr_value(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    return std::stod(text);
}

// brand:distance:bitrate
ChannelProfile::Row parse_profile_key(const std::string& text) {
    const std::size_t a = text.find(':');
    const std::size_t b = text.rfind(':');
    if (a == std::string::npos || b == a) {
        throw CLI::ValidationError("--profile", "expected brand:distance:bitrate");
    }
    ChannelProfile::Row key;
    key.brand = text.substr(0, a);
    key.distance_m = std::stod(text.substr(a + 1, b - a - 1));
    key.bit_rate_bps = std::stoi(text.substr(b + 1));
    return key;
}

int cmd_tx(const CommonOpts& common, const std::string& in_path,
           const std::string& out_dir, bool no_frames, int gap_bits) {
    const TimingConfig timing = parse_timing(common.timing, common.sample_rate);
    ModulationParams params = params_from(common, timing);
    params.validate(timing);
    OfdmPlan plan;
    const OfdmPlan* plan_ptr = nullptr;
    if (params.scheme == Scheme::ofdm) {
        plan = OfdmPlan::make(common.ofdm_n, params.carrier_hz, params);
        plan.validate(timing);
        plan_ptr = &plan;
    }

    std::vector<std::uint8_t> bytes = read_input_bytes(in_path);
    if (bytes.size() % 4 != 0) {
        std::cerr << "warning: input length " << bytes.size()
                  << " is not a multiple of 4; padding with zero bytes\n";
        bytes.resize((bytes.size() + 3) / 4 * 4, 0);
    }
    std::vector<std::uint32_t> payloads;
    for (std::size_t i = 0; i < bytes.size(); i += 4) {
        payloads.push_back((static_cast<std::uint32_t>(bytes[i]) << 24) |
                           (static_cast<std::uint32_t>(bytes[i + 1]) << 16) |
                           (static_cast<std::uint32_t>(bytes[i + 2]) << 8) |
                           static_cast<std::uint32_t>(bytes[i + 3]));
    }

    std::filesystem::create_directories(out_dir);
    const std::string wav_path = out_dir + "/tx.wav";

    if (payloads.empty()) {
        Waveform empty;
        empty.sample_rate = timing.sample_rate;
        write_wav(empty, wav_path);
        std::cout << "packets=0 payload_s=0.000 total_s=0.000 frames=0 wav=" << wav_path
                  << "\n";
        return 0;
    }

    PacketScheduleOptions opts;
    opts.gap_bits = gap_bits;
    const FrameSchedule schedule =
        schedule_packets(payloads, params, timing, plan_ptr, opts);
    const Waveform wave = emit_schedule(schedule);
    write_wav(wave, wav_path);

    if (!no_frames) {
        const std::string frame_dir = out_dir + "/frames";
        std::filesystem::create_directories(frame_dir);
        char name[64];
        for (std::int64_t i = 0; i < schedule.frame_count(); ++i) {
            std::snprintf(name, sizeof(name), "/frame_%06lld.pgm",
                          static_cast<long long>(i + 1));
            write_pgm(schedule.render_frame(i), frame_dir + name);
        }
    }

    const double payload_s =
        static_cast<double>(payloads.size()) * kPacketBits / params.bit_rate;
    std::printf("packets=%zu payload_s=%.3f total_s=%.3f frames=%lld wav=%s\n",
                payloads.size(), payload_s, wave.duration_s(),
                static_cast<long long>(schedule.frame_count()), wav_path.c_str());
    return 0;
}

int cmd_rx(const CommonOpts& common, const std::string& in_path, bool raw,
           const std::string& out_path, const std::string& report_path) {
    const TimingConfig timing = parse_timing(common.timing, common.sample_rate);
    ModulationParams params = params_from(common, timing);
    params.validate(timing);
    OfdmPlan plan;
    const OfdmPlan* plan_ptr = nullptr;
    if (params.scheme == Scheme::ofdm) {
        plan = OfdmPlan::make(common.ofdm_n, params.carrier_hz, params);
        plan_ptr = &plan;
    }

    const Waveform wave =
        raw ? read_raw_pcm16(in_path, common.sample_rate) : read_wav(in_path);
    std::vector<DecodeResult> results;
    if (!wave.samples.empty()) {
        const SpectraStream stream = demod_spectra(wave, params);
        results = params.scheme == Scheme::ofdm ? demodulate_ofdm(stream, plan, params)
                                                : scan_stream(stream, params, plan_ptr);
    }

    std::ostream* report = &std::cout;
    std::ofstream report_file;
    if (!report_path.empty()) {
        report_file.open(report_path);
        if (!report_file) throw std::runtime_error("cannot open: " + report_path);
        report = &report_file;
    }
    std::vector<std::uint8_t> decoded_bytes;
    *report << "time_s,status,payload_hex,crc_rx,crc_calc,mean_bit_confidence\n";
    for (const DecodeResult& r : results) {
        char line[160];
        std::snprintf(line, sizeof(line), "%.6f,%s,%08x,%02x,%02x,%.3f\n",
                      r.start_time_s, r.ok() ? "ok" : "crc-mismatch", r.payload,
                      r.received_crc, r.calculated_crc, r.mean_confidence());
        *report << line;
        if (r.ok()) {
            decoded_bytes.push_back(static_cast<std::uint8_t>(r.payload >> 24));
            decoded_bytes.push_back(static_cast<std::uint8_t>(r.payload >> 16));
            decoded_bytes.push_back(static_cast<std::uint8_t>(r.payload >> 8));
            decoded_bytes.push_back(static_cast<std::uint8_t>(r.payload));
        }
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open: " + out_path);
        out.write(reinterpret_cast<const char*>(decoded_bytes.data()),
                  static_cast<std::streamsize>(decoded_bytes.size()));
    }
    std::cerr << "packets=" << results.size() << " ok="
              << std::count_if(results.begin(), results.end(),
                               [](const DecodeResult& r) { return r.ok(); })
              << " bytes_out=" << decoded_bytes.size() << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& schemes_text,
              const std::string& bitrates_text, const std::string& snrs_text,
              const std::vector<std::string>& profile_keys,
              const std::string& profile_table, int packets,
              const std::string& brightness_text, double noise_sigma,
              const std::string& out_path) {
    SweepConfig config;
    config.timing = parse_timing(common.timing, common.sample_rate);
    config.base_params = params_from(common, config.timing);
    config.ofdm_subcarriers = common.ofdm_n;
    config.seed = common.seed;
    config.packets_per_point = packets;

    config.schemes.clear();
    for (const std::string& s : parse_string_list(schemes_text)) {
        config.schemes.push_back(scheme_from_name(s));
    }
    config.bit_rates = parse_int_list(bitrates_text);
    if (!brightness_text.empty()) {
        config.brightness_levels.clear();
        for (int v : parse_int_list(brightness_text)) {
            config.brightness_levels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    if (noise_sigma > 0.0) config.fixed_noise_sigma = noise_sigma;

    ChannelProfile profile;
    bool have_profile = false;
    if (!profile_keys.empty()) {
        profile = ChannelProfile::from_csv_file(profile_table);
        have_profile = true;
    }
    if (!snrs_text.empty()) {
        for (const std::string& item : parse_string_list(snrs_text)) {
            SnrPoint point;
            point.snr_db = parse_snr_value(item);
            config.snr_points.push_back(point);
        }
    }
    for (const std::string& key : profile_keys) {
        SnrPoint point;
        point.profile_key = parse_profile_key(key);
        config.snr_points.push_back(point);
    }
    if (config.snr_points.empty() && noise_sigma > 0.0) {
        config.snr_points.push_back(SnrPoint{});  // fixed-noise mode
    }
    if (config.snr_points.empty()) {
        throw CLI::ValidationError("--snrs", "need --snrs, --profile or --noise-sigma");
    }

    const SweepReport report = run_sweep(config, have_profile ? &profile : nullptr);
    for (const SweepSkip& skip : report.skipped) {
        std::cerr << "skipped " << scheme_name(skip.scheme) << "/" << skip.bit_rate
                  << "bps @ " << skip.point_label << ": " << skip.reason << "\n";
    }
    if (out_path.empty()) {
        std::cout << report.to_csv();
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open: " + out_path);
        out << report.to_csv();
    }
    return 0;
}

int cmd_multisource(const CommonOpts& common, int n, const std::string& carriers_text,
                    const std::string& gains_text, double snr_db, int packets,
                    const std::string& out_path) {
    MultisourceConfig config;
    config.timing = parse_timing(common.timing, common.sample_rate);
    config.sources = n;
    config.carriers_hz = parse_double_list(carriers_text);
    if (!gains_text.empty()) config.gains = parse_double_list(gains_text);
    config.snr_db = snr_db;
    config.packets_per_source = packets;
    config.bit_rate = common.bit_rate;
    config.seed = common.seed;
    config.amplitude = static_cast<std::uint8_t>(common.brightness);

    const MultisourceReport report = run_multisource(config);
    if (out_path.empty()) {
        std::cout << report.to_csv();
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open: " + out_path);
        out << report.to_csv();
    }
    return 0;
}

int cmd_profile_show(const std::string& table, bool positions,
                     const std::string& brand, double distance, int bitrate) {
    if (positions) {
        const auto rows = load_position_table_file(table);
        std::cout << "screen,model,resolution,position,snr_db\n";
        for (const PositionRow& r : rows) {
            std::cout << r.screen << ',' << r.model << ',' << r.resolution << ','
                      << r.position << ',' << r.snr_db << "\n";
        }
        return 0;
    }
    const ChannelProfile profile = ChannelProfile::from_csv_file(table);
    if (!brand.empty()) {
        const auto snr = profile.lookup(brand, distance, bitrate);
        if (snr) {
            std::printf("%s @ %.1f m, %d bps: %.1f dB\n", brand.c_str(), distance,
                        bitrate, *snr);
        } else {
            std::printf("%s @ %.1f m, %d bps: no measurement\n", brand.c_str(), distance,
                        bitrate);
        }
        return 0;
    }
    std::cout << "brand,distance_m,bit_rate_bps,snr_db\n";
    for (const ChannelProfile::Row& r : profile.rows()) {
        std::cout << r.brand << ',' << r.distance_m << ',' << r.bit_rate_bps << ',';
        if (r.snr_db) std::cout << *r.snr_db;
        else std::cout << '-';
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Software modem for the screen-raster acoustic covert channel"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* tx = app.add_subcommand("tx", "Modulate bytes into frames and a WAV");
    std::string tx_in = "-";
    std::string tx_out = "txout";
    bool tx_no_frames = false;
    int tx_gap_bits = 4;
    add_common(tx, &common);
    tx->add_option("--in", tx_in, "Input bytes file ('-' = stdin)");
    tx->add_option("--out", tx_out, "Output directory");
    tx->add_flag("--no-frames", tx_no_frames, "Skip writing PGM frames");
    tx->add_option("--gap-bits", tx_gap_bits, "Silent bit periods between packets");

    auto* rx = app.add_subcommand("rx", "Demodulate a WAV back to bytes");
    std::string rx_in;
    bool rx_raw = false;
    std::string rx_out;
    std::string rx_report;
    add_common(rx, &common);
    rx->add_option("--in", rx_in, "Input WAV (or raw PCM16 with --raw)")->required();
    rx->add_flag("--raw", rx_raw, "Input is headerless 16-bit LE PCM");
    rx->add_option("--out", rx_out, "Write recovered payload bytes here");
    rx->add_option("--report", rx_report, "Write decode records here (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "BER/SNR grid simulation");
    std::string sw_schemes = "ook";
    std::string sw_bitrates = "10";
    std::string sw_snrs;
    std::vector<std::string> sw_profiles;
    std::string sw_table = "profiles/table2_snr.csv";
    int sw_packets = 50;
    std::string sw_brightness;
    double sw_noise_sigma = 0.0;
    std::string sw_out;
    add_common(sweep, &common);
    sweep->add_option("--schemes", sw_schemes, "Comma-separated scheme list");
    sweep->add_option("--bitrates", sw_bitrates, "Comma-separated bit rates");
    sweep->add_option("--snrs,--snr", sw_snrs,
                      "Comma-separated SNR targets in dB ('inf' ok)");
    sweep->add_option("--profile", sw_profiles,
                      "Profile point brand:distance:bitrate (repeatable)");
    sweep->add_option("--profile-table", sw_table, "Profile CSV path");
    sweep->add_option("--packets", sw_packets, "Packets per grid point");
    sweep->add_option("--brightness-levels", sw_brightness,
                      "Comma-separated V values (with --noise-sigma)");
    sweep->add_option("--noise-sigma", sw_noise_sigma,
                      "Fixed per-sample noise sigma instead of target SNR");
    sweep->add_option("--out", sw_out, "Write CSV here (default stdout)");

    auto* multi = app.add_subcommand("multisource", "Simultaneous transmitters");
    int ms_n = 4;
    std::string ms_carriers = "6000,9000,14500,15500";
    std::string ms_gains;
    double ms_snr = 25.0;
    int ms_packets = 20;
    std::string ms_out;
    add_common(multi, &common);
    multi->add_option("--n", ms_n, "Number of transmitters (1-4)");
    multi->add_option("--carriers", ms_carriers, "Comma-separated carrier list");
    multi->add_option("--gains", ms_gains, "Comma-separated mixing gains");
    multi->add_option("--snr", ms_snr, "Channel SNR target (dB)");
    multi->add_option("--packets", ms_packets, "Packets per source");
    multi->add_option("--out", ms_out, "Write CSV here (default stdout)");

    auto* profile = app.add_subcommand("profile", "Measurement table access");
    auto* show = profile->add_subcommand("show", "Print or query a profile table");
    std::string pr_table = "profiles/table2_snr.csv";
    bool pr_positions = false;
    std::string pr_brand;
    double pr_distance = 0.0;
    int pr_bitrate = 10;
    show->add_option("--table", pr_table, "Profile CSV path");
    show->add_flag("--positions", pr_positions, "Table is the position table");
    show->add_option("--brand", pr_brand, "Lookup: brand");
    show->add_option("--distance", pr_distance, "Lookup: distance in meters");
    show->add_option("--bitrate", pr_bitrate, "Lookup: bit rate in bps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tx->parsed()) return cmd_tx(common, tx_in, tx_out, tx_no_frames, tx_gap_bits);
        if (rx->parsed()) return cmd_rx(common, rx_in, rx_raw, rx_out, rx_report);
        if (sweep->parsed()) {
            return cmd_sweep(common, sw_schemes, sw_bitrates, sw_snrs, sw_profiles,
                             sw_table, sw_packets, sw_brightness, sw_noise_sigma, sw_out);
        }
        if (multi->parsed()) {
            return cmd_multisource(common, ms_n, ms_carriers, ms_gains, ms_snr,
                                   ms_packets, ms_out);
        }
        if (profile->parsed()) {
            if (!show->parsed()) {
                std::cerr << "profile: expected 'show' subcommand\n";
                return kExitUsage;
            }
            return cmd_profile_show(pr_table, pr_positions, pr_brand, pr_distance,
                                    pr_bitrate);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
