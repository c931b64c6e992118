#include "vmag/magnify.hpp"

#include "vmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace vmag {

namespace {

void validate_config(const MagnifyConfig& c) {
    require(c.alpha >= 1.0, "magnify: alpha must be >= 1");
    require(c.clip_length >= 2, "magnify: clip_length must be >= 2");
    require(c.threads >= 1, "magnify: threads must be >= 1");
}

bool all_zero(const WeightMap& map) {
    return (map == 0.0f).all();
}

WeightMap ring_ones(const Mask& inner, const Mask& dilated) {
    WeightMap ring = WeightMap::Zero(inner.rows(), inner.cols());
    for (int y = 0; y < inner.rows(); ++y) {
        for (int x = 0; x < inner.cols(); ++x) {
            if (dilated(y, x) && !inner(y, x)) ring(y, x) = 1.0f;
        }
    }
    return ring;
}

float ring_peak_flow(const Mask& inner, const Mask& dilated, const FlowField& flow) {
    float peak = 0.0f;
    for (int y = 0; y < inner.rows(); ++y) {
        for (int x = 0; x < inner.cols(); ++x) {
            if (dilated(y, x) && !inner(y, x)) {
                peak = std::max(peak, std::hypot(flow.u(y, x), flow.v(y, x)));
            }
        }
    }
    return peak;
}

// Run fn(t) for t in [0, count) across the requested number of workers.
// Indices are strided so each is visited exactly once regardless of worker
// count, and every t writes only its own output slots, which keeps results
// independent of scheduling.
void parallel_frames(int count, int threads, const std::function<void(int)>& fn) {
    const int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        for (int t = 0; t < count; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&fn, w, workers, count]() {
            for (int t = w; t < count; t += workers) fn(t);
        });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace

Frame magnify_frame_with_flow(const Frame& ref, const Frame& cur, const WeightMap& map,
                              double alpha, const FlowField& flow) {
    require(ref.same_size(cur), "magnify_frame: frames must share dimensions");
    require(ref.channels() == cur.channels(), "magnify_frame: frames must share channel count");
    require(map.rows() == cur.height() && map.cols() == cur.width(),
            "magnify_frame: map must match frame dimensions");
    require(flow.height() == cur.height() && flow.width() == cur.width(),
            "magnify_frame: flow must match frame dimensions");
    require(alpha >= 1.0, "magnify_frame: alpha must be >= 1");

    if (alpha == 1.0 || all_zero(map)) {
        return cur;
    }

    const int h = cur.height();
    const int w = cur.width();
    Frame out;
    out.planes.reserve(cur.planes.size());
    for (const Image& ref_plane : ref.planes) {
        Image plane(h, w);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const float gain = 1.0f + static_cast<float>(alpha - 1.0) * map(y, x);
                plane(y, x) = bilinear_sample(ref_plane,
                                              static_cast<float>(x) + gain * flow.u(y, x),
                                              static_cast<float>(y) + gain * flow.v(y, x));
            }
        }
        out.planes.push_back(std::move(plane));
    }
    return out;
}

Frame magnify_frame(const Frame& ref, const Frame& cur, const WeightMap& map, double alpha,
                    const FlowParams& params) {
    require(alpha >= 1.0, "magnify_frame: alpha must be >= 1");
    if (alpha == 1.0 || all_zero(map)) {
        require(ref.same_size(cur), "magnify_frame: frames must share dimensions");
        require(map.rows() == cur.height() && map.cols() == cur.width(),
                "magnify_frame: map must match frame dimensions");
        return cur;
    }
    const FlowField flow = estimate_flow(ref, cur, params);
    return magnify_frame_with_flow(ref, cur, map, alpha, flow);
}

MagnifiedSequence magnify_sequence(const std::vector<Frame>& frames, const Mask& initial_mask,
                                   const MagnifyConfig& config) {
    validate_config(config);
    require(!frames.empty(), "magnify_sequence: empty sequence");
    const int count = static_cast<int>(frames.size());
    for (const Frame& f : frames) {
        require(f.same_size(frames[0]) && f.channels() == frames[0].channels(),
                "magnify_sequence: all frames must share dimensions");
    }
    require(initial_mask.rows() == frames[0].height() && initial_mask.cols() == frames[0].width(),
            "magnify_sequence: mask must match frame dimensions");

    MagnifiedSequence result;
    result.schedule = build_schedule(count, config.clip_length);
    result.frames.resize(count);
    result.log.resize(count);
    if (config.keep_maps) {
        result.maps.resize(count);
    }

    // Stage 1: carry the region mask through the sequence. The chain is
    // inherently serial; once the mask dies it stays dead.
    std::vector<Mask> masks(count);
    masks[0] = initial_mask;
    for (int t = 1; t < count; ++t) {
        if (!masks[t - 1].any()) {
            masks[t] = masks[t - 1];
            continue;
        }
        masks[t] = propagate_mask(masks[t - 1], frames[t - 1], frames[t], config.flow);
    }

    // Stage 2: per-frame map construction and re-rendering. Frames are
    // independent of each other here, so the loop parallelizes cleanly.
    auto process = [&](int t) {
        const int r = reference_of(result.schedule, t);
        FrameRecord rec;
        rec.frame = t;
        rec.reference = r;
        rec.mask_area = masks[t].count();
        rec.collapsed = (rec.mask_area == 0);

        WeightMap map;
        if (rec.collapsed) {
            map = WeightMap::Zero(frames[0].height(), frames[0].width());
            result.frames[t] = frames[t];
        } else {
            const int radius = dilation_radius(masks[t], config.dilation);
            const Mask dil = dilate(masks[t], radius);

            // Reference frames re-render against themselves: the flow is
            // identically zero, so skip estimating it.
            const bool self_ref = (t == r);
            FlowField flow;
            if (!self_ref) {
                flow = estimate_flow(frames[r], frames[t], config.flow);
            } else {
                flow = FlowField::zero(frames[0].height(), frames[0].width());
            }

            WeightMap ring;
            switch (config.softening.mode) {
                case SofteningMode::motion:
                    ring = soften_motion(masks[t], dil, flow, config.softening);
                    rec.ring_max_flow = ring_peak_flow(masks[t], dil, flow);
                    break;
                case SofteningMode::distance:
                    ring = soften_distance(masks[t], dil, radius, config.softening);
                    break;
                case SofteningMode::none:
                    ring = ring_ones(masks[t], dil);
                    break;
            }
            map = unified_map(masks[t], dil, ring);
            result.frames[t] =
                self_ref ? frames[t]
                         : magnify_frame_with_flow(frames[r], frames[t], map, config.alpha, flow);
        }

        if (config.keep_maps) {
            result.maps[t] = std::move(map);
        }
        result.log[t] = rec;
    };

    parallel_frames(count, config.threads, process);
    return result;
}

}  // namespace vmag
