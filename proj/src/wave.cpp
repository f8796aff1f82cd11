#include "rastertone/wave.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rastertone {

namespace {

void put_u32(std::ofstream& f, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    f.write(b, 4);
}

void put_u16(std::ofstream& f, std::uint16_t v) {
    char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
    f.write(b, 2);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::int16_t to_pcm16(double s) {
    const double c = std::clamp(s, -1.0, 1.0);
    return static_cast<std::int16_t>(std::lround(c * 32767.0));
}

}  // namespace

void write_wav(const Waveform& wave, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const std::uint32_t n = static_cast<std::uint32_t>(wave.samples.size());
    const std::uint32_t data_bytes = n * 2;
    f.write("RIFF", 4);
    put_u32(f, 36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(f, 16);
    put_u16(f, 1);  // PCM
    put_u16(f, 1);  // mono
    put_u32(f, static_cast<std::uint32_t>(wave.sample_rate));
    put_u32(f, static_cast<std::uint32_t>(wave.sample_rate) * 2);
    put_u16(f, 2);   // block align
    put_u16(f, 16);  // bits per sample
    f.write("data", 4);
    put_u32(f, data_bytes);
    std::vector<char> buf(static_cast<std::size_t>(data_bytes));
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::int16_t v = to_pcm16(wave.samples[i]);
        buf[2 * i] = static_cast<char>(v & 0xFF);
        buf[2 * i + 1] = static_cast<char>((v >> 8) & 0xFF);
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Waveform read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    unsigned char hdr[12];
    f.read(reinterpret_cast<char*>(hdr), 12);
    if (f.gcount() != 12 || std::memcmp(hdr, "RIFF", 4) != 0 ||
        std::memcmp(hdr + 8, "WAVE", 4) != 0) {
        throw std::runtime_error("not a RIFF/WAVE file: " + path);
    }
    int sample_rate = 0;
    int channels = 0;
    int bits = 0;
    int format = 0;
    bool have_fmt = false;
    Waveform wave;
    // Walk chunks; accept mono 16-bit PCM only.
    for (;;) {
        unsigned char chdr[8];
        f.read(reinterpret_cast<char*>(chdr), 8);
        if (f.gcount() != 8) break;
        const std::uint32_t size = get_u32(chdr + 4);
        if (std::memcmp(chdr, "fmt ", 4) == 0) {
            std::vector<unsigned char> fmt(size);
            f.read(reinterpret_cast<char*>(fmt.data()), size);
            if (f.gcount() != static_cast<std::streamsize>(size) || size < 16) {
                throw std::runtime_error("truncated fmt chunk: " + path);
            }
            format = get_u16(fmt.data());
            channels = get_u16(fmt.data() + 2);
            sample_rate = static_cast<int>(get_u32(fmt.data() + 4));
            bits = get_u16(fmt.data() + 14);
            have_fmt = true;
        } else if (std::memcmp(chdr, "data", 4) == 0) {
            if (!have_fmt) throw std::runtime_error("data chunk before fmt: " + path);
            if (format != 1 || channels != 1 || bits != 16) {
                throw std::runtime_error(
                    "unsupported WAV encoding (want mono 16-bit PCM): " + path);
            }
            std::vector<unsigned char> data(size);
            f.read(reinterpret_cast<char*>(data.data()), size);
            if (f.gcount() != static_cast<std::streamsize>(size)) {
                throw std::runtime_error("truncated data chunk: " + path);
            }
            wave.sample_rate = sample_rate;
            wave.samples.resize(size / 2);
            for (std::size_t i = 0; i < wave.samples.size(); ++i) {
                const std::int16_t v =
                    static_cast<std::int16_t>(get_u16(data.data() + 2 * i));
                wave.samples[i] = v / 32767.0;
            }
            return wave;
        } else {
            f.seekg(size + (size & 1), std::ios::cur);
        }
    }
    throw std::runtime_error("no data chunk found: " + path);
}

Waveform read_raw_pcm16(const std::string& path, int sample_rate) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    Waveform wave;
    wave.sample_rate = sample_rate;
    wave.samples.resize(data.size() / 2);
    for (std::size_t i = 0; i < wave.samples.size(); ++i) {
        const std::int16_t v = static_cast<std::int16_t>(get_u16(data.data() + 2 * i));
        wave.samples[i] = v / 32767.0;
    }
    return wave;
}

}  // namespace rastertone
