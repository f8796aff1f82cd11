#include "rastertone/spectra.h"

#include <numbers>
#include <stdexcept>

namespace rastertone {

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    std::vector<double> w(length);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < length; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(length);
        switch (kind) {
            case WindowKind::hann:
                w[i] = 0.5 * (1.0 - std::cos(two_pi * u));
                break;
            case WindowKind::hamming:
                w[i] = 0.54 - 0.46 * std::cos(two_pi * u);
                break;
            case WindowKind::blackman:
                w[i] = 0.42 - 0.5 * std::cos(two_pi * u) +
                       0.08 * std::cos(2.0 * two_pi * u);
                break;
            case WindowKind::rectangular:
                w[i] = 1.0;
                break;
        }
    }
    return w;
}

RealFft::RealFft(std::size_t n) : n_(n), m_(n / 2) {
    if (n < 4 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("FFT size must be a power of two >= 4");
    }
    z_.resize(m_);
    tw_half_.resize(m_ / 2);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < m_ / 2; ++j) {
        const double a = -two_pi * static_cast<double>(j) / static_cast<double>(m_);
        tw_half_[j] = {std::cos(a), std::sin(a)};
    }
    tw_full_.resize(m_ + 1);
    for (std::size_t j = 0; j <= m_; ++j) {
        const double a = -two_pi * static_cast<double>(j) / static_cast<double>(n_);
        tw_full_[j] = {std::cos(a), std::sin(a)};
    }
    rev_.resize(m_);
    std::size_t bits = 0;
    while ((1u << bits) < m_) ++bits;
    for (std::size_t i = 0; i < m_; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            if (i & (1u << b)) r |= 1u << (bits - 1 - b);
        }
        rev_[i] = static_cast<std::uint32_t>(r);
    }
}

void RealFft::fft_half() {
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = rev_[i];
        if (i < j) std::swap(z_[i], z_[j]);
    }
    for (std::size_t len = 2; len <= m_; len <<= 1) {
        const std::size_t stride = m_ / len;
        for (std::size_t base = 0; base < m_; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = tw_half_[k * stride];
                const std::complex<double> u = z_[base + k];
                const std::complex<double> v = z_[base + k + len / 2] * w;
                z_[base + k] = u + v;
                z_[base + k + len / 2] = u - v;
            }
        }
    }
}

void RealFft::transform(const double* in, std::complex<double>* out) {
    for (std::size_t j = 0; j < m_; ++j) z_[j] = {in[2 * j], in[2 * j + 1]};
    fft_half();
    // Untangle the packed transform into the real signal's half spectrum.
    for (std::size_t k = 0; k <= m_; ++k) {
        const std::complex<double> zk = z_[k % m_];
        const std::complex<double> zmk = std::conj(z_[(m_ - k) % m_]);
        const std::complex<double> fe = 0.5 * (zk + zmk);
        const std::complex<double> fo = std::complex<double>(0.0, -0.5) * (zk - zmk);
        out[k] = fe + tw_full_[k] * fo;
    }
}

SpectraStream spectral_stream(const Waveform& signal, std::size_t window_length,
                              std::size_t hop, WindowKind window) {
    if (window_length < 4 || (window_length & (window_length - 1)) != 0) {
        throw std::invalid_argument("window length must be a power of two >= 4");
    }
    if (hop == 0 || hop > window_length) {
        throw std::invalid_argument("hop must satisfy 0 < hop <= window length");
    }
    if (signal.samples.size() < window_length) {
        throw std::runtime_error("insufficient data: signal shorter than one window");
    }

    SpectraStream stream;
    stream.sample_rate = signal.sample_rate;
    stream.window_length = window_length;
    stream.hop = hop;
    stream.n_frames = (signal.samples.size() - window_length) / hop + 1;
    stream.n_bins = window_length / 2 + 1;
    stream.mags.resize(stream.n_frames * stream.n_bins);

    const std::vector<double> w = make_window(window, window_length);
    RealFft fft(window_length);
    std::vector<double> buf(window_length);
    std::vector<std::complex<double>> spec(stream.n_bins);

    for (std::size_t t = 0; t < stream.n_frames; ++t) {
        const double* src = signal.samples.data() + t * hop;
        for (std::size_t i = 0; i < window_length; ++i) buf[i] = src[i] * w[i];
        fft.transform(buf.data(), spec.data());
        float* dst = stream.mags.data() + t * stream.n_bins;
        for (std::size_t k = 0; k < stream.n_bins; ++k) {
            dst[k] = static_cast<float>(std::abs(spec[k]));
        }
    }
    return stream;
}

}  // namespace rastertone
