#include "vmag/synth.hpp"

#include "vmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace vmag {

namespace {

constexpr double kBgMean = 0.35;
constexpr double kBgSpan = 0.15;   // background stays in [0.2, 0.5]
constexpr double kDiskMean = 0.8;
constexpr double kDiskSpan = 0.15; // disk texture stays in [0.65, 0.95]

// Uniform double in [0, 1) from the raw engine output; keeps results
// identical across standard libraries.
double uniform01(std::mt19937& rng) {
    return rng() * (1.0 / 4294967296.0);
}

struct Wave {
    double kx, ky;   // integer cycle counts over the period
    double amp;
    double phase;
};

// Sum of cosines with amplitudes normalized to sum to 1, so the texture is
// mean + span * [-1, 1].
struct TrigTexture {
    std::vector<Wave> waves;
    double period_x = 1.0, period_y = 1.0;
    double mean = 0.0, span = 0.0;

    double eval(double x, double y) const {
        double acc = 0.0;
        for (const Wave& w : waves) {
            acc += w.amp * std::cos(2.0 * std::numbers::pi *
                                        (w.kx * x / period_x + w.ky * y / period_y) +
                                    w.phase);
        }
        return mean + span * acc;
    }
};

// A few guaranteed low-frequency waves for coarse alignment plus random ones
// within a frequency disc; random phases unless the texture must be even.
TrigTexture make_texture(std::mt19937& rng, double period_x, double period_y, double mean,
                         double span, int random_waves, int max_cycles, bool even) {
    TrigTexture tex;
    tex.period_x = period_x;
    tex.period_y = period_y;
    tex.mean = mean;
    tex.span = span;

    auto push = [&](double kx, double ky) {
        Wave w;
        w.kx = kx;
        w.ky = ky;
        w.amp = 0.5 + 0.5 * uniform01(rng);
        w.phase = even ? 0.0 : 2.0 * std::numbers::pi * uniform01(rng);
        tex.waves.push_back(w);
    };

    push(1, 0);
    push(0, 1);
    push(1, -1);
    const int span_k = 2 * max_cycles + 1;
    while (static_cast<int>(tex.waves.size()) < random_waves + 3) {
        const int kx = static_cast<int>(rng() % span_k) - max_cycles;
        const int ky = static_cast<int>(rng() % span_k) - max_cycles;
        if ((kx == 0 && ky == 0) || kx * kx + ky * ky > max_cycles * max_cycles) {
            continue;
        }
        push(kx, ky);
    }

    double total = 0.0;
    for (const Wave& w : tex.waves) total += w.amp;
    for (Wave& w : tex.waves) w.amp /= total;
    return tex;
}

double smoothstep(double edge0, double edge1, double x) {
    const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

void validate(const SceneSpec& s) {
    require(s.width >= 16 && s.height >= 16, "scene: dimensions must be at least 16");
    require(s.frame_count >= 1, "scene: frame_count must be >= 1");
    require(s.fps > 0.0, "scene: fps must be positive");
    require(s.disk_radius >= 3.0, "scene: disk_radius must be >= 3");
    require(s.amplitude >= 0.0, "scene: amplitude must be >= 0");
    require(s.frequency >= 0.0, "scene: frequency must be >= 0");
    require(2.0 * s.frequency < s.fps, "scene: oscillation must stay below the Nyquist rate");
    require(std::hypot(s.dir_x, s.dir_y) > 0.0, "scene: oscillation direction must be non-zero");
    require(std::abs(s.radius_modulation) < 0.5, "scene: radius_modulation must be within (-0.5, 0.5)");

    const int last = s.frame_count - 1;
    const double drift = (s.scenario == Scenario::view_change)
                             ? std::hypot(s.drift_x, s.drift_y) * last
                             : 0.0;
    const double reach = s.disk_radius * (1.0 + std::abs(s.radius_modulation)) + s.amplitude +
                         drift + 1.5;
    require(s.disk_x - reach >= 0.0 && s.disk_x + reach <= s.width - 1.0 &&
                s.disk_y - reach >= 0.0 && s.disk_y + reach <= s.height - 1.0,
            "scene: disk leaves the frame at maximum excursion");

    if (s.scenario == Scenario::occlusion) {
        const OccluderSpec& o = s.occluder;
        require(o.width > 0 && o.height > 0, "scene: occluder rectangle must be non-empty");
        require(o.x >= 0 && o.y >= 0 && o.x + o.width <= s.width && o.y + o.height <= s.height,
                "scene: occluder rectangle must stay inside the frame");
        require(o.first_frame >= 0 && o.last_frame >= o.first_frame &&
                    o.last_frame < s.frame_count,
                "scene: occluder interval must lie inside the sequence");
        require(o.value >= 0.0f && o.value <= 1.0f, "scene: occluder value must be in [0, 1]");
    }
}

}  // namespace

Scene make_scene(const SceneSpec& spec) {
    validate(spec);

    std::mt19937 rng(spec.seed);
    const TrigTexture bg_tex =
        make_texture(rng, spec.width, spec.height, kBgMean, kBgSpan, 17, 6, false);
    const TrigTexture disk_tex = make_texture(rng, 4.0 * spec.disk_radius, 4.0 * spec.disk_radius,
                                              kDiskMean, kDiskSpan, 9, 5, true);

    const double dir_norm = std::hypot(spec.dir_x, spec.dir_y);
    const double ux = spec.dir_x / dir_norm;
    const double uy = spec.dir_y / dir_norm;
    const bool drifting = spec.scenario == Scenario::view_change;
    const double drift_span =
        drifting ? std::hypot(spec.drift_x, spec.drift_y) * (spec.frame_count - 1) : 0.0;

    // Background flattened to its mean wherever the disk boundary can get
    // close, with a smooth shoulder back to full texture. Distances are in
    // background coordinates, where the disk centre stays at the rest
    // position plus its oscillation.
    const double moat_inner = spec.disk_radius * (1.0 + std::abs(spec.radius_modulation)) +
                              spec.amplitude + 6.0;
    const double moat_outer = moat_inner + 8.0;
    auto background_at = [&](double qx, double qy) {
        const double d = std::hypot(qx - spec.disk_x, qy - spec.disk_y);
        const double e = smoothstep(moat_inner, moat_outer, d);
        return kBgMean + e * (bg_tex.eval(qx, qy) - kBgMean);
    };

    Scene scene;
    scene.frames.reserve(spec.frame_count);
    scene.truth.displacement.reserve(spec.frame_count);
    scene.truth.masks.reserve(spec.frame_count);

    // Static-background scenarios render the backdrop once.
    Image static_bg;
    if (!drifting) {
        static_bg.resize(spec.height, spec.width);
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                static_bg(y, x) = static_cast<float>(background_at(x, y));
            }
        }
    }

    for (int t = 0; t < spec.frame_count; ++t) {
        const double phase = 2.0 * std::numbers::pi * spec.frequency * t / spec.fps;
        const double osc = spec.amplitude * std::sin(phase);
        const double ox = drifting ? spec.drift_x * t : 0.0;
        const double oy = drifting ? spec.drift_y * t : 0.0;
        const double cx = spec.disk_x + osc * ux + ox;
        const double cy = spec.disk_y + osc * uy + oy;
        const double radius =
            spec.scenario == Scenario::deformation
                ? spec.disk_radius * (1.0 + spec.radius_modulation * std::sin(phase))
                : spec.disk_radius;

        scene.truth.displacement.emplace_back(cx - spec.disk_x, cy - spec.disk_y);

        Image plane;
        if (drifting) {
            plane.resize(spec.height, spec.width);
            for (int y = 0; y < spec.height; ++y) {
                for (int x = 0; x < spec.width; ++x) {
                    plane(y, x) = static_cast<float>(background_at(x - ox, y - oy));
                }
            }
        } else {
            plane = static_bg;
        }

        // Composite the disk over its bounding box with antialiased coverage.
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1.5)));
        const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(cx + radius + 1.5)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1.5)));
        const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(cy + radius + 1.5)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double sdf = std::hypot(x - cx, y - cy) - radius;
                const double cov = std::clamp(0.5 - sdf, 0.0, 1.0);
                if (cov > 0.0) {
                    const double tex = disk_tex.eval(x - cx, y - cy);
                    const double base = plane(y, x);
                    plane(y, x) = static_cast<float>(base + cov * (tex - base));
                }
            }
        }

        if (spec.scenario == Scenario::occlusion && t >= spec.occluder.first_frame &&
            t <= spec.occluder.last_frame) {
            for (int y = spec.occluder.y; y < spec.occluder.y + spec.occluder.height; ++y) {
                for (int x = spec.occluder.x; x < spec.occluder.x + spec.occluder.width; ++x) {
                    plane(y, x) = spec.occluder.value;
                }
            }
        }

        Mask mask(spec.height, spec.width);
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                mask(y, x) = std::hypot(x - cx, y - cy) <= radius;
            }
        }

        scene.frames.emplace_back(std::move(plane));
        scene.truth.masks.push_back(std::move(mask));
    }

    switch (spec.scenario) {
        case Scenario::easy:
            break;
        case Scenario::occlusion:
            scene.truth.events.push_back(
                {"occlusion", spec.occluder.first_frame, spec.occluder.last_frame});
            break;
        case Scenario::view_change:
            scene.truth.events.push_back({"drift", 0, spec.frame_count - 1});
            break;
        case Scenario::deformation:
            scene.truth.events.push_back({"deformation", 0, spec.frame_count - 1});
            break;
    }

    scene.initial_mask = scene.truth.masks.front();
    return scene;
}

Eigen::Vector2d measure_centroid(const Frame& frame, const Mask& region) {
    require(region.rows() == frame.height() && region.cols() == frame.width(),
            "measure_centroid: region must match frame dimensions");
    const Image gray = to_grayscale(frame).planes[0];
    double sum = 0.0, sx = 0.0, sy = 0.0;
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            if (!region(y, x)) continue;
            const double w = std::max(0.0, static_cast<double>(gray(y, x)) - kCentroidThreshold);
            sum += w;
            sx += w * x;
            sy += w * y;
        }
    }
    require(sum > 1e-9, "measure_centroid: region holds no above-threshold signal");
    return {sx / sum, sy / sum};
}

}  // namespace vmag
