#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "rastertone/wave.h"

namespace rastertone {

enum class WindowKind { hann, hamming, blackman, rectangular };

std::vector<double> make_window(WindowKind kind, std::size_t length);

// Real-input FFT for power-of-two sizes (packed half-size complex transform).
class RealFft {
  public:
    explicit RealFft(std::size_t n);
    std::size_t size() const { return n_; }
    // out must hold n/2 + 1 bins.
    void transform(const double* in, std::complex<double>* out);

  private:
    void fft_half();

    std::size_t n_ = 0;
    std::size_t m_ = 0;  // n/2
    std::vector<std::complex<double>> z_;
    std::vector<std::complex<double>> tw_half_;
    std::vector<std::complex<double>> tw_full_;
    std::vector<std::uint32_t> rev_;
};

// Magnitude spectrogram at uniform hops: windowed segments, FFT per segment.
struct SpectraStream {
    int sample_rate = 48000;
    std::size_t window_length = 4096;
    std::size_t hop = 512;
    std::size_t n_frames = 0;
    std::size_t n_bins = 0;  // window_length/2 + 1
    std::vector<float> mags;  // [frame * n_bins + bin]

    float mag(std::size_t frame, std::size_t bin) const {
        return mags[frame * n_bins + bin];
    }
    double hop_s() const { return static_cast<double>(hop) / sample_rate; }
    // Center time of a frame's window.
    double time_s(std::size_t frame) const {
        return (static_cast<double>(frame) * hop + window_length / 2.0) / sample_rate;
    }
    double frame_center_sample(std::size_t frame) const {
        return static_cast<double>(frame) * hop + window_length / 2.0;
    }
    double bin_hz() const {
        return static_cast<double>(sample_rate) / static_cast<double>(window_length);
    }
    std::size_t bin_of(double hz) const {
        return static_cast<std::size_t>(
            std::llround(hz * static_cast<double>(window_length) / sample_rate));
    }
};

SpectraStream spectral_stream(const Waveform& signal, std::size_t window_length,
                              std::size_t hop, WindowKind window = WindowKind::hann);

}  // namespace rastertone
