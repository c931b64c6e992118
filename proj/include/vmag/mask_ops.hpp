#pragma once

#include "vmag/flow.hpp"
#include "vmag/types.hpp"

namespace vmag {

struct DilationSpec {
    double gamma = 1.0 / 15.0;  // radius as a fraction of the centroid-boundary distance
    int min_radius = 1;         // lower bound applied after the scale
};

enum class SofteningMode {
    motion,    // ring weights follow local flow magnitude
    distance,  // ring weights decay with distance from the inner region
    none,      // ring weights are 1
};

struct SofteningSpec {
    SofteningMode mode = SofteningMode::distance;
    double beta = 1.0;          // decay rate of the distance law
    double flow_epsilon = 1e-3; // ring flow below this collapses motion weights to zero
};

// Carry a region mask from frame_prev to frame_cur: sample it along the
// estimated flow, threshold at 0.5, then apply one radius-1 closing to seal
// pinholes. An empty input mask stays empty.
Mask propagate_mask(const Mask& prev, const Frame& frame_prev, const Frame& frame_cur,
                    const FlowParams& params = {});

// Exact Euclidean distance (in pixels) from each pixel to the nearest set
// pixel; zero inside the mask. The mask must contain at least one set pixel.
Image distance_to_mask(const Mask& mask);

// Morphology with an exact Euclidean disc of integer radius. radius = 0 is
// the identity.
Mask dilate(const Mask& mask, int radius);
Mask erode(const Mask& mask, int radius);

// Smallest distance from the mask's centroid (mean of set pixel coordinates)
// to any boundary pixel, where boundary pixels are set pixels with an unset
// or out-of-image 4-neighbour. Throws on an empty mask.
double min_centroid_boundary_distance(const Mask& mask);

// Dilation radius rule: max(min_radius, floor(gamma * d_min)).
int dilation_radius(const Mask& mask, const DilationSpec& spec);

// Ring weights W(x) = exp(-beta * d(x) / radius) on dilated \ inner, where
// d(x) is the exact Euclidean distance to the inner region and radius is the
// dilation radius that produced the ring. Zero outside the ring; all zeros if
// radius <= 0.
WeightMap soften_distance(const Mask& inner, const Mask& dilated, int radius,
                          const SofteningSpec& spec);

// Ring weights W(x) = |flow(x)| / max_ring |flow| on dilated \ inner. If the
// ring's peak magnitude falls below spec.flow_epsilon the weights are all
// zero. Zero outside the ring.
WeightMap soften_motion(const Mask& inner, const Mask& dilated, const FlowField& flow,
                        const SofteningSpec& spec);

// Stitch the final per-pixel amplification map: 1 on inner, ring_weights on
// dilated \ inner, 0 elsewhere.
WeightMap unified_map(const Mask& inner, const Mask& dilated, const WeightMap& ring_weights);

}  // namespace vmag
