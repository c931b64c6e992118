#include "vmag/schedule.hpp"

#include <algorithm>

namespace vmag {

ClipSchedule build_schedule(int total_frames, int clip_length) {
    require(total_frames >= 1, "build_schedule: total_frames must be >= 1");
    require(clip_length >= 2, "build_schedule: clip_length must be >= 2");

    ClipSchedule schedule;
    schedule.total_frames = total_frames;
    schedule.clip_length = clip_length;

    const int stride = clip_length - 1;
    for (int k = 0; k * stride <= total_frames - 1; ++k) {
        Clip clip;
        clip.index = k;
        clip.start = k * stride;
        const int last = std::min(clip.start + stride, total_frames - 1);
        for (int t = clip.start; t <= last; ++t) {
            clip.frames.push_back(t);
        }
        schedule.clips.push_back(std::move(clip));
    }
    return schedule;
}

int reference_of(const ClipSchedule& schedule, int t) {
    require(t >= 0 && t < schedule.total_frames, "reference_of: frame index out of range");
    const int stride = schedule.clip_length - 1;
    return (t / stride) * stride;
}

}  // namespace vmag
