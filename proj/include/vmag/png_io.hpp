#pragma once

#include <string>

#include "vmag/types.hpp"

namespace vmag {

// 8-bit PNG I/O. Intensities map linearly between [0, 255] bytes and the
// [0, 1] floats used everywhere else; writing rounds to nearest. Grayscale
// files become single-plane frames, color files three-plane frames (palette
// images are expanded, alpha and 16-bit depth are reduced on read).
Frame read_frame_png(const std::string& path);
void write_frame_png(const std::string& path, const Frame& frame);

// Masks are single-channel PNGs: any nonzero byte reads as set; writing
// stores 255 for set and 0 for unset.
Mask read_mask_png(const std::string& path);
void write_mask_png(const std::string& path, const Mask& mask);

// Weight maps serialize like grayscale frames (weight 1 -> 255).
void write_weights_png(const std::string& path, const WeightMap& weights);

}  // namespace vmag
