#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rastertone {

// Audio-rate sample stream standing in for the acoustic emission.
struct Waveform {
    int sample_rate = 48000;
    std::vector<double> samples;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

// Mono 16-bit signed little-endian PCM. Samples are clamped to [-1, 1]
// on export.
void write_wav(const Waveform& wave, const std::string& path);
Waveform read_wav(const std::string& path);
Waveform read_raw_pcm16(const std::string& path, int sample_rate);

}  // namespace rastertone
