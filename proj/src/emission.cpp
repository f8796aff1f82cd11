#include "rastertone/emission.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rastertone {

void FrameSchedule::append(const FramePattern& base, std::int64_t frames) {
    if (frames <= 0) throw std::invalid_argument("segment must have >= 1 frame");
    Segment seg;
    seg.base = base.advanced(total_frames_ * timing_.slots_per_frame());
    seg.start_frame = total_frames_;
    seg.frames = frames;
    segments_.push_back(std::move(seg));
    total_frames_ += frames;
}

void FrameSchedule::append_black(std::int64_t frames) {
    append(FramePattern::black(timing_), frames);
}

FramePattern FrameSchedule::pattern_at(std::int64_t frame_index) const {
    if (frame_index < 0 || frame_index >= total_frames_) {
        throw std::out_of_range("frame index out of schedule");
    }
    // Segments are ordered; binary search by start frame.
    std::size_t lo = 0, hi = segments_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments_[mid].start_frame <= frame_index) lo = mid;
        else hi = mid;
    }
    const Segment& seg = segments_[lo];
    const std::int64_t local = frame_index - seg.start_frame;
    return seg.base.advanced(local * timing_.slots_per_frame());
}

FrameBitmap FrameSchedule::render_frame(std::int64_t frame_index) const {
    return render_pattern(timing_, pattern_at(frame_index));
}

std::vector<FrameBitmap> FrameSchedule::render_all() const {
    std::vector<FrameBitmap> frames;
    frames.reserve(static_cast<std::size_t>(total_frames_));
    for (std::int64_t i = 0; i < total_frames_; ++i) frames.push_back(render_frame(i));
    return frames;
}

namespace {

// Drive signal addressed by (frame, row, in-row slot). The emitter integrates
// it over audio-sample-sized slot intervals.
class DriveSource {
  public:
    virtual ~DriveSource() = default;
    // Integral of drive over in-row slots [x0, x1), 0 <= x0 <= x1 <= h_total.
    virtual double row_integral(std::int64_t frame, int row, std::int64_t x0,
                                std::int64_t x1) = 0;
    virtual double drive_at(std::int64_t frame, int row, std::int64_t x) = 0;
    virtual double frame_mean(std::int64_t frame) = 0;
};

class ScheduleSource final : public DriveSource {
  public:
    explicit ScheduleSource(const FrameSchedule& schedule)
        : schedule_(schedule), timing_(schedule.timing()) {}

    double row_integral(std::int64_t frame, int row, std::int64_t x0,
                        std::int64_t x1) override {
        x1 = std::min<std::int64_t>(x1, timing_.h_res);
        if (x0 >= x1) return 0.0;
        const FrameSchedule::Segment& seg = segment_for(frame);
        const StripSpec* strip = strip_for(seg, row);
        if (!strip || !strip->on || strip->tone.brightness == 0) return 0.0;
        const std::int64_t k = strip_offset(seg, *strip, frame, row);
        const std::int64_t whites = square_white_count(
            x1 - x0, k + x0, strip->tone.cycle_size, strip->tone.half_cycle);
        return static_cast<double>(whites) * (strip->tone.brightness / 255.0);
    }

    double drive_at(std::int64_t frame, int row, std::int64_t x) override {
        if (x >= timing_.h_res) return 0.0;
        const FrameSchedule::Segment& seg = segment_for(frame);
        const StripSpec* strip = strip_for(seg, row);
        if (!strip || !strip->on || strip->tone.brightness == 0) return 0.0;
        const std::int64_t k = strip_offset(seg, *strip, frame, row);
        std::int64_t rem = (x + k) % strip->tone.cycle_size;
        if (rem < 0) rem += strip->tone.cycle_size;
        return rem < strip->tone.half_cycle ? strip->tone.brightness / 255.0 : 0.0;
    }

    double frame_mean(std::int64_t frame) override {
        if (frame == mean_frame_) return mean_value_;
        double total = 0.0;
        for (int row = 0; row < timing_.v_res; ++row) {
            total += row_integral(frame, row, 0, timing_.h_res);
        }
        mean_frame_ = frame;
        mean_value_ = total / static_cast<double>(timing_.slots_per_frame());
        return mean_value_;
    }

  private:
    const FrameSchedule::Segment& segment_for(std::int64_t frame) {
        const auto& segs = schedule_.segments();
        while (seg_idx_ + 1 < segs.size() && segs[seg_idx_ + 1].start_frame <= frame) {
            ++seg_idx_;
        }
        while (seg_idx_ > 0 && segs[seg_idx_].start_frame > frame) --seg_idx_;
        return segs[seg_idx_];
    }

    static const StripSpec* strip_for(const FrameSchedule::Segment& seg, int row) {
        for (const StripSpec& s : seg.base.strips) {
            if (row >= s.row_begin && row < s.row_end) return &s;
        }
        return nullptr;
    }

    // Pattern offset so that white <=> ((x + offset) mod cycle) < half.
    std::int64_t strip_offset(const FrameSchedule::Segment& seg, const StripSpec& s,
                              std::int64_t frame, int row) const {
        const std::int64_t local = frame - seg.start_frame;
        return static_cast<std::int64_t>(row - s.row_begin) * timing_.h_total +
               s.phase + local * timing_.slots_per_frame();
    }

    const FrameSchedule& schedule_;
    TimingConfig timing_;
    std::size_t seg_idx_ = 0;
    std::int64_t mean_frame_ = -1;
    double mean_value_ = 0.0;
};

class BitmapSource final : public DriveSource {
  public:
    BitmapSource(std::span<const FrameBitmap> frames, const TimingConfig& timing)
        : frames_(frames), timing_(timing) {}

    double row_integral(std::int64_t frame, int row, std::int64_t x0,
                        std::int64_t x1) override {
        x1 = std::min<std::int64_t>(x1, timing_.h_res);
        if (x0 >= x1) return 0.0;
        load(frame);
        const std::uint32_t* p = prefix_.data() +
                                 static_cast<std::size_t>(row) * (timing_.h_res + 1);
        return static_cast<double>(p[x1] - p[x0]) / 255.0;
    }

    double drive_at(std::int64_t frame, int row, std::int64_t x) override {
        if (x >= timing_.h_res) return 0.0;
        load(frame);
        return frames_[static_cast<std::size_t>(frame)].at(static_cast<int>(x), row) /
               255.0;
    }

    double frame_mean(std::int64_t frame) override {
        load(frame);
        return mean_;
    }

  private:
    void load(std::int64_t frame) {
        if (frame == loaded_) return;
        const FrameBitmap& fb = frames_[static_cast<std::size_t>(frame)];
        const int w = timing_.h_res;
        prefix_.resize(static_cast<std::size_t>(w + 1) * timing_.v_res);
        std::uint64_t total = 0;
        for (int y = 0; y < timing_.v_res; ++y) {
            const std::uint8_t* src = fb.row(y);
            std::uint32_t* dst = prefix_.data() + static_cast<std::size_t>(y) * (w + 1);
            std::uint32_t acc = 0;
            dst[0] = 0;
            for (int x = 0; x < w; ++x) {
                acc += src[x];
                dst[x + 1] = acc;
            }
            total += acc;
        }
        mean_ = static_cast<double>(total) /
                (255.0 * static_cast<double>(timing_.slots_per_frame()));
        loaded_ = frame;
    }

    std::span<const FrameBitmap> frames_;
    TimingConfig timing_;
    std::vector<std::uint32_t> prefix_;
    std::int64_t loaded_ = -1;
    double mean_ = 0.0;
};

Waveform emit_from_source(DriveSource& src, const TimingConfig& timing,
                          std::int64_t n_frames) {
    const std::int64_t slots_per_frame = timing.slots_per_frame();
    const std::int64_t total_slots = n_frames * slots_per_frame;
    const std::int64_t scan_rate = timing.scan_rate();
    const std::int64_t fs = timing.sample_rate;
    const std::int64_t n_samples =
        std::llround(static_cast<double>(n_frames) * fs / timing.refresh_rate);

    Waveform wave;
    wave.sample_rate = timing.sample_rate;
    wave.samples.resize(static_cast<std::size_t>(n_samples));

    // Integral of the whole-slot drive over global slots [a, b).
    auto slot_integral = [&](std::int64_t a, std::int64_t b) {
        double acc = 0.0;
        std::int64_t g = a;
        while (g < b) {
            const std::int64_t frame = g / slots_per_frame;
            const std::int64_t in_frame = g - frame * slots_per_frame;
            const int row = static_cast<int>(in_frame / timing.h_total);
            const std::int64_t row_start =
                frame * slots_per_frame + static_cast<std::int64_t>(row) * timing.h_total;
            const std::int64_t row_end = row_start + timing.h_total;
            const std::int64_t e = std::min(b, row_end);
            acc += src.row_integral(frame, row, g - row_start, e - row_start);
            g = e;
        }
        return acc;
    };

    auto drive_at_slot = [&](std::int64_t g) {
        if (g >= total_slots) return 0.0;
        const std::int64_t frame = g / slots_per_frame;
        const std::int64_t in_frame = g - frame * slots_per_frame;
        const int row = static_cast<int>(in_frame / timing.h_total);
        return src.drive_at(frame, row,
                            in_frame - static_cast<std::int64_t>(row) * timing.h_total);
    };

    for (std::int64_t k = 0; k < n_samples; ++k) {
        // Sample k covers slots [k, k+1) * scan_rate / fs; exact rational
        // boundaries keep the decimation deterministic.
        const std::int64_t a_num = k * scan_rate;
        std::int64_t b_num = (k + 1) * scan_rate;
        if (b_num > total_slots * fs) b_num = total_slots * fs;
        std::int64_t aw = a_num / fs;
        const std::int64_t af = a_num % fs;
        std::int64_t bw = b_num / fs;
        const std::int64_t bf = b_num % fs;
        const double a = static_cast<double>(aw) + static_cast<double>(af) / fs;
        const double b = static_cast<double>(bw) + static_cast<double>(bf) / fs;
        const double len = b - a;
        if (len <= 0.0) {
            wave.samples[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }

        double integral = slot_integral(aw, bw);
        if (af != 0) integral -= (static_cast<double>(af) / fs) * drive_at_slot(aw);
        if (bf != 0) integral += (static_cast<double>(bf) / fs) * drive_at_slot(bw);

        // Per-frame DC removal at the drive level.
        double mean_integral = 0.0;
        const std::int64_t first_frame = aw / slots_per_frame;
        const std::int64_t last_frame = std::min(n_frames - 1, bw / slots_per_frame);
        for (std::int64_t f = first_frame; f <= last_frame; ++f) {
            const double fs0 = static_cast<double>(f * slots_per_frame);
            const double fs1 = static_cast<double>((f + 1) * slots_per_frame);
            const double overlap = std::min(b, fs1) - std::max(a, fs0);
            if (overlap > 0.0) mean_integral += overlap * src.frame_mean(f);
        }

        wave.samples[static_cast<std::size_t>(k)] = (integral - mean_integral) / len;
    }
    return wave;
}

}  // namespace

Waveform emit_waveform(std::span<const FrameBitmap> frames, const TimingConfig& timing) {
    timing.validate();
    if (frames.empty()) throw std::invalid_argument("emit_waveform: empty frame sequence");
    for (const FrameBitmap& f : frames) {
        if (f.width != timing.h_res || f.height != timing.v_res) {
            throw std::invalid_argument("invalid frame: dimensions do not match timing");
        }
    }
    BitmapSource src(frames, timing);
    return emit_from_source(src, timing, static_cast<std::int64_t>(frames.size()));
}

Waveform emit_waveform(const std::vector<FrameBitmap>& frames,
                       const TimingConfig& timing) {
    return emit_waveform(std::span<const FrameBitmap>(frames.data(), frames.size()),
                         timing);
}

Waveform emit_schedule(const FrameSchedule& schedule) {
    if (schedule.empty()) {
        throw std::invalid_argument("emit_schedule: empty schedule");
    }
    ScheduleSource src(schedule);
    return emit_from_source(src, schedule.timing(), schedule.frame_count());
}

}  // namespace rastertone
