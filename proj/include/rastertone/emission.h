#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rastertone/frame.h"
#include "rastertone/pattern.h"
#include "rastertone/timing.h"
#include "rastertone/wave.h"

namespace rastertone {

// A run-length sequence of frame patterns. append() advances every tone's
// phase by the slots elapsed since schedule start, so a carrier spanning
// several frames (or resuming after a pause) stays phase-continuous with the
// raster clock instead of restarting each frame.
class FrameSchedule {
  public:
    explicit FrameSchedule(const TimingConfig& timing) : timing_(timing) {
        timing.validate();
    }

    // base carries strip phases relative to schedule frame 0.
    void append(const FramePattern& base, std::int64_t frames);
    void append_black(std::int64_t frames);

    const TimingConfig& timing() const { return timing_; }
    std::int64_t frame_count() const { return total_frames_; }
    bool empty() const { return total_frames_ == 0; }

    struct Segment {
        FramePattern base;  // phases at the segment's first frame
        std::int64_t start_frame = 0;
        std::int64_t frames = 0;
    };
    const std::vector<Segment>& segments() const { return segments_; }

    FramePattern pattern_at(std::int64_t frame_index) const;
    FrameBitmap render_frame(std::int64_t frame_index) const;
    std::vector<FrameBitmap> render_all() const;

  private:
    TimingConfig timing_;
    std::vector<Segment> segments_;
    std::int64_t total_frames_ = 0;
};

// Models the screen's acoustic emission: the frame sequence is raster-scanned
// at the slot rate (blanking slots drive 0), the instantaneous drive level is
// luma/255, the drive is decimated to sample_rate by block-averaging, and the
// per-frame mean drive is removed. Output length is
// round(frames * sample_rate / refresh_rate) samples.
Waveform emit_waveform(std::span<const FrameBitmap> frames, const TimingConfig& timing);
Waveform emit_waveform(const std::vector<FrameBitmap>& frames, const TimingConfig& timing);

// Same model computed from pattern descriptors in closed form; equal to
// emit_waveform(render_all()) within floating-point rounding.
Waveform emit_schedule(const FrameSchedule& schedule);

}  // namespace rastertone
