#pragma once

#include "vmag/types.hpp"

namespace vmag {

struct FlowParams {
    int pyramid_levels = 4;        // >= 1; clamped internally for small images
    int window_radius = 7;         // half-width of the matching window, >= 1
    int refinement_iterations = 3; // warp-and-solve passes per pyramid level, >= 1
    double presmooth_sigma = 1.0;  // Gaussian smoothing of both inputs; <= 0 disables
};

// Dense displacement field F on cur's grid such that
//   bilinear_sample(ref, x + F(x)) ~= cur(x).
// Multi-channel frames are converted to grayscale first. Identical inputs
// produce an exactly zero field. Pixels whose matching window lacks solvable
// texture in either input at full resolution report zero displacement: there
// is no local evidence to support any other value (in particular, a flat
// occluder painted over moving content yields zero flow there, not a guess).
FlowField estimate_flow(const Frame& ref, const Frame& cur, const FlowParams& params = {});

struct EndpointError {
    double mean = 0.0;
    double max = 0.0;
};

// Mean and max Euclidean distance between two fields, per pixel.
EndpointError endpoint_error(const FlowField& flow, const FlowField& truth);

// Per-pixel Euclidean magnitude of a field.
Image flow_magnitude(const FlowField& flow);

}  // namespace vmag
