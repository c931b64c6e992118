#pragma once

#include "vmag/types.hpp"

namespace vmag {

// Sample a plane at a continuous position with bilinear interpolation.
// Coordinates are clamped to the image rectangle, so the function is total:
// sampling exactly on the lattice returns the stored value bit-exactly.
float bilinear_sample(const Image& plane, float x, float y);

// Backward warp: out(x) = plane(x + flow(x)), sampled bilinearly.
// The flow lives on the output grid and must match the plane's dimensions.
Image warp_backward(const Image& plane, const FlowField& flow);
Frame warp_backward(const Frame& frame, const FlowField& flow);

// Rec.601 luma for RGB frames; single-plane frames pass through unchanged.
Frame to_grayscale(const Frame& frame);

// Separable Gaussian smoothing with clamp-to-edge borders.
// sigma <= 0 returns the input unchanged.
Image gaussian_blur(const Image& plane, double sigma);

}  // namespace vmag
