#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "vmag/types.hpp"

namespace vmag {

enum class Scenario {
    easy,        // oscillating disk over a static background
    occlusion,   // a flat rectangle hides the disk for an interval
    view_change, // the whole scene drifts while the disk oscillates
    deformation, // the disk radius breathes while oscillating
};

struct OccluderSpec {
    int x = 0, y = 0;           // top-left corner, pixels
    int width = 0, height = 0;
    int first_frame = 0;        // inclusive interval of covered frames
    int last_frame = -1;
    float value = 0.45f;        // flat intensity painted over the rectangle
};

struct SceneSpec {
    int width = 128;
    int height = 128;
    int frame_count = 30;
    double fps = 30.0;

    double disk_x = 64.0;       // rest-position centre
    double disk_y = 64.0;
    double disk_radius = 25.0;

    double amplitude = 0.5;     // peak oscillation displacement, pixels
    double frequency = 1.0;     // Hz; oscillation is amplitude * sin(2*pi*f*t/fps)
    double dir_x = 1.0;         // oscillation direction, normalized internally
    double dir_y = 0.0;

    std::uint32_t seed = 1;
    Scenario scenario = Scenario::easy;

    OccluderSpec occluder;             // occlusion only
    double drift_x = 0.0;              // pixels per frame, view_change only
    double drift_y = 0.0;
    double radius_modulation = 0.0;    // relative radius swing, deformation only
};

struct SceneEvent {
    std::string kind;
    int first_frame = 0;
    int last_frame = 0;
};

struct GroundTruth {
    std::vector<Eigen::Vector2d> displacement;  // disk-centre offset vs frame 0
    std::vector<Mask> masks;                    // exact disk raster per frame
    std::vector<SceneEvent> events;
};

struct Scene {
    std::vector<Frame> frames;
    Mask initial_mask;   // copy of truth.masks[0]
    GroundTruth truth;
};

// Deterministic analytic scene: a brightly textured disk over a dimmer
// band-limited background, both built from trigonometric polynomials so
// sub-pixel motion is exact. The background is flattened to its mean in a
// moat around everywhere the disk can reach, which keeps the brightness
// centroid of the above-threshold signal exactly on the disk centre.
Scene make_scene(const SceneSpec& spec);

// Intensities above this belong to the disk; the background (and the moat)
// stay below it.
constexpr float kCentroidThreshold = 0.575f;

// Brightness-weighted centroid of the above-threshold signal inside region,
// in pixel coordinates (x, y). Throws if the region holds no signal.
Eigen::Vector2d measure_centroid(const Frame& frame, const Mask& region);

}  // namespace vmag
