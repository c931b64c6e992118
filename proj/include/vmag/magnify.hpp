#pragma once

#include <vector>

#include "vmag/flow.hpp"
#include "vmag/mask_ops.hpp"
#include "vmag/schedule.hpp"
#include "vmag/types.hpp"

namespace vmag {

struct MagnifyConfig {
    double alpha = 2.0;    // >= 1; 1 bypasses magnification
    int clip_length = 4;   // >= 2
    DilationSpec dilation;
    SofteningSpec softening;
    FlowParams flow;
    int threads = 1;       // worker threads for the per-frame stage
    bool keep_maps = true; // retain per-frame weight maps in the result
};

struct FrameRecord {
    int frame = 0;
    int reference = 0;
    long mask_area = 0;          // set pixels of the tracked inner mask
    double ring_max_flow = -1.0; // peak ring flow magnitude; < 0 when not computed
    bool collapsed = false;      // tracking lost the region by this frame
};

struct MagnifiedSequence {
    std::vector<Frame> frames;
    std::vector<WeightMap> maps;  // empty unless keep_maps
    ClipSchedule schedule;
    std::vector<FrameRecord> log;
};

// Warp ref towards an amplified version of cur: each output pixel samples
// ref at x + (1 + (alpha - 1) * map(x)) * flow(x). If alpha == 1 or the map
// is all zero, cur is returned bit-exactly.
Frame magnify_frame(const Frame& ref, const Frame& cur, const WeightMap& map, double alpha,
                    const FlowParams& params = {});

// Same, reusing an already-estimated reference-to-current field.
Frame magnify_frame_with_flow(const Frame& ref, const Frame& cur, const WeightMap& map,
                              double alpha, const FlowField& flow);

// Full pipeline over a sequence: track the region mask frame to frame, build
// per-frame amplification maps (dilation + softening), and re-render every
// frame against its clip reference. If the tracked mask collapses, later
// frames pass through unmagnified and the log records the collapse.
MagnifiedSequence magnify_sequence(const std::vector<Frame>& frames, const Mask& initial_mask,
                                   const MagnifyConfig& config);

}  // namespace vmag
