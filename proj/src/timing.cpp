#include "rastertone/timing.h"

#include <stdexcept>
#include <string>

namespace rastertone {

void TimingConfig::validate() const {
    if (h_res < 1 || v_res < 1 || refresh_rate < 1) {
        throw std::invalid_argument(
            "invalid timing: resolution and refresh rate must be >= 1 (got " +
            std::to_string(h_res) + "x" + std::to_string(v_res) + "@" +
            std::to_string(refresh_rate) + ")");
    }
    if (h_total < h_res) {
        throw std::invalid_argument("invalid timing: h_total (" +
                                    std::to_string(h_total) +
                                    ") must be >= h_res (" +
                                    std::to_string(h_res) + ")");
    }
    if (sample_rate < 1) {
        throw std::invalid_argument("invalid timing: sample_rate must be >= 1");
    }
}

std::int64_t TimingConfig::pixel_clock() const {
    return static_cast<std::int64_t>(h_res) * v_res * refresh_rate;
}

std::int64_t TimingConfig::scan_rate() const {
    return static_cast<std::int64_t>(h_total) * v_res * refresh_rate;
}

TimingConfig make_timing(int h_res, int v_res, int refresh_rate, int h_total,
                         int sample_rate) {
    TimingConfig t;
    t.h_res = h_res;
    t.v_res = v_res;
    t.refresh_rate = refresh_rate;
    t.h_total = h_total > 0 ? h_total : h_res;
    t.sample_rate = sample_rate;
    t.validate();
    return t;
}

std::int64_t compute_pixel_clock(const TimingConfig& timing) {
    timing.validate();
    return timing.pixel_clock();
}

}  // namespace rastertone
