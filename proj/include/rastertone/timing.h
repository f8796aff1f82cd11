#pragma once

#include <cstdint>

namespace rastertone {

// Screen raster geometry and refresh rate. The scan covers h_total slots per
// row even though only the first h_res are visible; blanking slots drive no
// emission. h_total == h_res by default (no blanking).
struct TimingConfig {
    int h_res = 1680;
    int v_res = 1050;
    int refresh_rate = 60;
    int h_total = 1680;
    int sample_rate = 48000;

    // Throws std::invalid_argument when any dimension is out of range.
    void validate() const;

    // Visible pixels per second: h_res * v_res * refresh_rate.
    std::int64_t pixel_clock() const;

    // Raster slots per second including blanking: h_total * v_res * refresh.
    // Equals pixel_clock() when h_total == h_res.
    std::int64_t scan_rate() const;

    std::int64_t slots_per_frame() const {
        return static_cast<std::int64_t>(h_total) * v_res;
    }

    double frame_period_s() const { return 1.0 / refresh_rate; }
};

// Convenience constructor; h_total <= 0 means "same as h_res".
TimingConfig make_timing(int h_res, int v_res, int refresh_rate,
                         int h_total = 0, int sample_rate = 48000);

std::int64_t compute_pixel_clock(const TimingConfig& timing);

}  // namespace rastertone
