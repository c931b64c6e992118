#pragma once

#include <vector>

#include "vmag/types.hpp"

namespace vmag {

// One clip of the periodic reference-resetting schedule. Frames are listed in
// order; the first one is the clip's reference.
struct Clip {
    int index = 0;              // k
    int start = 0;              // first frame = reference frame
    std::vector<int> frames;    // consecutive, at most clip_length long
};

struct ClipSchedule {
    int total_frames = 0;
    int clip_length = 0;
    std::vector<Clip> clips;
};

// Partition frames 0..total_frames-1 into clips of clip_length frames that
// overlap by exactly one frame: clip k starts at k * (clip_length - 1). The
// final clip is truncated at the sequence end. Boundary frames belong to two
// clips and are processed in the later one, where they serve as reference.
ClipSchedule build_schedule(int total_frames, int clip_length);

// Reference frame index used when processing frame t under the schedule.
int reference_of(const ClipSchedule& schedule, int t);

}  // namespace vmag
