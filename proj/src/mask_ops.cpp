#include "vmag/mask_ops.hpp"

#include "vmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vmag {

namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (Felzenszwalb/Huttenlocher): given sampled
// costs f, produce d(p) = min_q ((p - q)^2 + f(q)). Squared distances stay
// integer-valued, so the transform is exact in doubles.
void transform_1d(const double* f, double* d, int n, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Squared Euclidean distance to the nearest set pixel, exact.
PlaneT<double> squared_distance(const Mask& mask) {
    const int h = static_cast<int>(mask.rows());
    const int w = static_cast<int>(mask.cols());
    PlaneT<double> dist(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            dist(y, x) = mask(y, x) ? 0.0 : kFar;
        }
    }

    const int n = std::max(h, w);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int x = 0; x < w; ++x) {  // columns
        for (int y = 0; y < h; ++y) f[y] = dist(y, x);
        transform_1d(f.data(), d.data(), h, v.data(), z.data());
        for (int y = 0; y < h; ++y) dist(y, x) = d[y];
    }
    for (int y = 0; y < h; ++y) {  // rows
        for (int x = 0; x < w; ++x) f[x] = dist(y, x);
        transform_1d(f.data(), d.data(), w, v.data(), z.data());
        for (int x = 0; x < w; ++x) dist(y, x) = d[x];
    }
    return dist;
}

void require_same_shape(const Mask& a, const Mask& b, const char* what) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), what);
}

}  // namespace

Image distance_to_mask(const Mask& mask) {
    require(mask.size() > 0, "distance_to_mask: empty mask plane");
    require(mask.any(), "distance_to_mask: mask has no set pixels");
    return squared_distance(mask).sqrt().cast<float>();
}

Mask dilate(const Mask& mask, int radius) {
    require(radius >= 0, "dilate: radius must be >= 0");
    if (radius == 0 || !mask.any()) {
        return mask;
    }
    const PlaneT<double> d2 = squared_distance(mask);
    const double r2 = static_cast<double>(radius) * radius;
    return d2 <= r2;
}

Mask erode(const Mask& mask, int radius) {
    require(radius >= 0, "erode: radius must be >= 0");
    if (radius == 0) {
        return mask;
    }
    Mask complement = !mask;
    if (!complement.any()) {
        return mask;  // nothing unset anywhere: erosion cannot bite
    }
    const PlaneT<double> d2 = squared_distance(complement);
    const double r2 = static_cast<double>(radius) * radius;
    return d2 > r2;
}

Mask propagate_mask(const Mask& prev, const Frame& frame_prev, const Frame& frame_cur,
                    const FlowParams& params) {
    require(frame_prev.same_size(frame_cur), "propagate_mask: frames must share dimensions");
    require(prev.rows() == frame_prev.height() && prev.cols() == frame_prev.width(),
            "propagate_mask: mask must match frame dimensions");

    const FlowField flow = estimate_flow(frame_prev, frame_cur, params);

    const int h = static_cast<int>(prev.rows());
    const int w = static_cast<int>(prev.cols());
    Image prev_real(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            prev_real(y, x) = prev(y, x) ? 1.0f : 0.0f;
        }
    }

    // Pull the mask along the flow and re-binarize.
    Mask carried(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float m = bilinear_sample(prev_real,
                                            static_cast<float>(x) + flow.u(y, x),
                                            static_cast<float>(y) + flow.v(y, x));
            carried(y, x) = m >= 0.5f;
        }
    }

    // One closing seals interpolation pinholes without growing the region.
    return erode(dilate(carried, 1), 1);
}

double min_centroid_boundary_distance(const Mask& mask) {
    require(mask.size() > 0 && mask.any(),
            "min_centroid_boundary_distance: mask has no set pixels");
    const int h = static_cast<int>(mask.rows());
    const int w = static_cast<int>(mask.cols());

    double cx = 0.0, cy = 0.0;
    long count = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (mask(y, x)) {
                cx += x;
                cy += y;
                ++count;
            }
        }
    }
    cx /= static_cast<double>(count);
    cy /= static_cast<double>(count);

    // Boundary = set pixels with an unset (or out-of-image) 4-neighbour.
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask(y, x)) continue;
            const bool boundary = (x == 0 || !mask(y, x - 1)) || (x == w - 1 || !mask(y, x + 1)) ||
                                  (y == 0 || !mask(y - 1, x)) || (y == h - 1 || !mask(y + 1, x));
            if (boundary) {
                best = std::min(best, std::hypot(x - cx, y - cy));
            }
        }
    }
    return best;
}

int dilation_radius(const Mask& mask, const DilationSpec& spec) {
    require(spec.gamma > 0.0, "dilation_radius: gamma must be positive");
    require(spec.min_radius >= 0, "dilation_radius: min_radius must be >= 0");
    const double d_min = min_centroid_boundary_distance(mask);
    return std::max(spec.min_radius, static_cast<int>(std::floor(spec.gamma * d_min)));
}

WeightMap soften_distance(const Mask& inner, const Mask& dilated, int radius,
                          const SofteningSpec& spec) {
    require_same_shape(inner, dilated, "soften_distance: masks must share dimensions");
    WeightMap weights = WeightMap::Zero(inner.rows(), inner.cols());
    if (radius <= 0 || !inner.any()) {
        return weights;
    }
    const PlaneT<double> d2 = squared_distance(inner);
    const int h = static_cast<int>(inner.rows());
    const int w = static_cast<int>(inner.cols());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (dilated(y, x) && !inner(y, x)) {
                const double d = std::sqrt(d2(y, x));
                weights(y, x) = static_cast<float>(std::exp(-spec.beta * d / radius));
            }
        }
    }
    return weights;
}

WeightMap soften_motion(const Mask& inner, const Mask& dilated, const FlowField& flow,
                        const SofteningSpec& spec) {
    require_same_shape(inner, dilated, "soften_motion: masks must share dimensions");
    require(flow.u.rows() == inner.rows() && flow.u.cols() == inner.cols(),
            "soften_motion: flow must match mask dimensions");
    const int h = static_cast<int>(inner.rows());
    const int w = static_cast<int>(inner.cols());
    WeightMap weights = WeightMap::Zero(h, w);

    float peak = 0.0f;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (dilated(y, x) && !inner(y, x)) {
                peak = std::max(peak, std::hypot(flow.u(y, x), flow.v(y, x)));
            }
        }
    }
    if (peak < spec.flow_epsilon) {
        return weights;  // essentially static ring: no spill-over to amplify
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (dilated(y, x) && !inner(y, x)) {
                weights(y, x) = std::hypot(flow.u(y, x), flow.v(y, x)) / peak;
            }
        }
    }
    return weights;
}

WeightMap unified_map(const Mask& inner, const Mask& dilated, const WeightMap& ring_weights) {
    require_same_shape(inner, dilated, "unified_map: masks must share dimensions");
    require(ring_weights.rows() == inner.rows() && ring_weights.cols() == inner.cols(),
            "unified_map: ring weights must match mask dimensions");
    const int h = static_cast<int>(inner.rows());
    const int w = static_cast<int>(inner.cols());
    WeightMap map = WeightMap::Zero(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (inner(y, x)) {
                map(y, x) = 1.0f;
            } else if (dilated(y, x)) {
                map(y, x) = ring_weights(y, x);
            }
        }
    }
    return map;
}

}  // namespace vmag
