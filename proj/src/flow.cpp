#include "vmag/flow.hpp"

#include "vmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vmag {

namespace {

using PlaneD = PlaneT<double>;

// Summed-area table: S(y, x) = sum of f over the half-open box [0,y) x [0,x).
PlaneD integral_image(const PlaneD& f) {
    const int h = static_cast<int>(f.rows());
    const int w = static_cast<int>(f.cols());
    PlaneD s = PlaneD::Zero(h + 1, w + 1);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            row += f(y, x);
            s(y + 1, x + 1) = s(y, x + 1) + row;
        }
    }
    return s;
}

// Sum of f over the (2r+1)^2 window around each pixel, clipped to the image.
PlaneD box_sum(const PlaneD& f, int radius) {
    const int h = static_cast<int>(f.rows());
    const int w = static_cast<int>(f.cols());
    const PlaneD s = integral_image(f);
    PlaneD out(h, w);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            out(y, x) = s(y1 + 1, x1 + 1) - s(y0, x1 + 1) - s(y1 + 1, x0) + s(y0, x0);
        }
    }
    return out;
}

// Central differences with clamped borders (one-sided half-differences there).
void gradients(const Image& f, PlaneD& gx, PlaneD& gy) {
    const int h = static_cast<int>(f.rows());
    const int w = static_cast<int>(f.cols());
    gx.resize(h, w);
    gy.resize(h, w);
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(0, y - 1);
        const int yp = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(0, x - 1);
            const int xp = std::min(w - 1, x + 1);
            gx(y, x) = 0.5 * (static_cast<double>(f(y, xp)) - static_cast<double>(f(y, xm)));
            gy(y, x) = 0.5 * (static_cast<double>(f(yp, x)) - static_cast<double>(f(ym, x)));
        }
    }
}

// Smooth then keep every other sample; output is ceil(n/2) per axis.
Image downsample2(const Image& f) {
    const Image blurred = gaussian_blur(f, 1.0);
    const int h2 = (static_cast<int>(f.rows()) + 1) / 2;
    const int w2 = (static_cast<int>(f.cols()) + 1) / 2;
    Image out(h2, w2);
    for (int y = 0; y < h2; ++y) {
        for (int x = 0; x < w2; ++x) {
            out(y, x) = blurred(2 * y, 2 * x);
        }
    }
    return out;
}

// Smallest eigenvalue of the symmetric 2x2 matrix [[a, b], [b, c]].
double min_eig2x2(double a, double b, double c) {
    const double trace = a + c;
    const double disc = std::max(0.0, trace * trace - 4.0 * (a * c - b * b));
    return 0.5 * (trace - std::sqrt(disc));
}

// Below this, a window's normal equations count as rank deficient.
constexpr double kEigenFloor = 1e-8;

// Per-pixel minimum eigenvalue of the windowed gradient structure tensor;
// measures whether the window holds enough texture to pin down both flow
// components.
PlaneD window_min_eig(const Image& gray, int window_radius) {
    PlaneD gx, gy;
    gradients(gray, gx, gy);
    const PlaneD sxx = box_sum(gx * gx, window_radius);
    const PlaneD sxy = box_sum(gx * gy, window_radius);
    const PlaneD syy = box_sum(gy * gy, window_radius);
    PlaneD out(gray.rows(), gray.cols());
    for (int y = 0; y < gray.rows(); ++y) {
        for (int x = 0; x < gray.cols(); ++x) {
            out(y, x) = min_eig2x2(sxx(y, x), sxy(y, x), syy(y, x));
        }
    }
    return out;
}

// Lift a coarse-level flow onto a grid twice the size: interpolate the
// components and double them to account for the change of units.
FlowField upsample_flow(const FlowField& coarse, int h, int w) {
    FlowField fine = FlowField::zero(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float cx = 0.5f * static_cast<float>(x);
            const float cy = 0.5f * static_cast<float>(y);
            fine.u(y, x) = 2.0f * bilinear_sample(coarse.u, cx, cy);
            fine.v(y, x) = 2.0f * bilinear_sample(coarse.v, cx, cy);
        }
    }
    return fine;
}

// One warp-and-solve pass of windowed least squares on a single level.
void refine_level(const Image& ref, const Image& cur, FlowField& flow, int window_radius) {
    const int h = static_cast<int>(ref.rows());
    const int w = static_cast<int>(ref.cols());

    const Image ref_w = warp_backward(ref, flow);

    PlaneD gx_ref, gy_ref, gx_cur, gy_cur;
    gradients(ref_w, gx_ref, gy_ref);
    gradients(cur, gx_cur, gy_cur);
    const PlaneD gx = 0.5 * (gx_ref + gx_cur);
    const PlaneD gy = 0.5 * (gy_ref + gy_cur);
    const PlaneD resid = cur.cast<double>() - ref_w.cast<double>();

    const PlaneD sxx = box_sum(gx * gx, window_radius);
    const PlaneD sxy = box_sum(gx * gy, window_radius);
    const PlaneD syy = box_sum(gy * gy, window_radius);
    const PlaneD sxr = box_sum(gx * resid, window_radius);
    const PlaneD syr = box_sum(gy * resid, window_radius);

    // Regularized 2x2 normal equations per pixel. Windows whose unregularized
    // system is rank deficient (flat or single-orientation texture) get no
    // update; elsewhere the step is capped at the window radius.
    constexpr double kDiagonal = 1e-4;
    const double step_cap = static_cast<double>(window_radius);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = sxx(y, x);
            const double b = sxy(y, x);
            const double c = syy(y, x);
            if (!(min_eig2x2(a, b, c) > kEigenFloor)) {
                continue;
            }
            const double ar = a + kDiagonal;
            const double cr = c + kDiagonal;
            const double det = ar * cr - b * b;
            double du = (cr * sxr(y, x) - b * syr(y, x)) / det;
            double dv = (ar * syr(y, x) - b * sxr(y, x)) / det;
            du = std::clamp(du, -step_cap, step_cap);
            dv = std::clamp(dv, -step_cap, step_cap);
            flow.u(y, x) += static_cast<float>(du);
            flow.v(y, x) += static_cast<float>(dv);
        }
    }
}

// Step acceptance at full resolution: keep a pixel's flow only where warping
// by it strictly reduces the window residual versus no flow at all; ties and
// regressions reset to zero. This discards values the data cannot support —
// coarse-level guesses landing on static regions, or content that appears or
// disappears between the frames (nothing the estimator proposes can explain
// those, so the honest answer is no displacement). Run only on the finest
// level: coarse levels compare heavily smoothed subpixel signals against
// interpolation noise, where the test is unreliable.
void reset_unimproved(const Image& ref, const Image& cur, FlowField& flow, int window_radius) {
    const Image ref_w = warp_backward(ref, flow);
    const PlaneD e_zero =
        box_sum((cur.cast<double>() - ref.cast<double>()).square(), window_radius);
    const PlaneD e_flow =
        box_sum((cur.cast<double>() - ref_w.cast<double>()).square(), window_radius);
    for (int y = 0; y < ref.rows(); ++y) {
        for (int x = 0; x < ref.cols(); ++x) {
            if (!(e_flow(y, x) < e_zero(y, x))) {
                flow.u(y, x) = 0.0f;
                flow.v(y, x) = 0.0f;
            }
        }
    }
}

}  // namespace

FlowField estimate_flow(const Frame& ref, const Frame& cur, const FlowParams& params) {
    require(ref.same_size(cur), "estimate_flow: frames must share dimensions");
    require(ref.channels() == cur.channels(), "estimate_flow: frames must share channel count");
    require(ref.height() > 0 && ref.width() > 0, "estimate_flow: empty frames");
    require(params.pyramid_levels >= 1, "estimate_flow: pyramid_levels must be >= 1");
    require(params.window_radius >= 1, "estimate_flow: window_radius must be >= 1");
    require(params.refinement_iterations >= 1,
            "estimate_flow: refinement_iterations must be >= 1");

    Image ref_gray = to_grayscale(ref).planes[0];
    Image cur_gray = to_grayscale(cur).planes[0];

    // Identical frames short-circuit to an exactly zero field.
    bool identical = true;
    for (size_t p = 0; p < ref.planes.size() && identical; ++p) {
        identical = (ref.planes[p] == cur.planes[p]).all();
    }
    if (identical) {
        return FlowField::zero(ref.height(), ref.width());
    }

    if (params.presmooth_sigma > 0.0) {
        ref_gray = gaussian_blur(ref_gray, params.presmooth_sigma);
        cur_gray = gaussian_blur(cur_gray, params.presmooth_sigma);
    }

    // Cap the pyramid so the coarsest level keeps enough pixels to match on.
    int levels = params.pyramid_levels;
    const int min_dim = std::min(ref.height(), ref.width());
    while (levels > 1 && (min_dim >> (levels - 1)) < 8) {
        --levels;
    }

    std::vector<Image> ref_pyr{ref_gray};
    std::vector<Image> cur_pyr{cur_gray};
    for (int l = 1; l < levels; ++l) {
        ref_pyr.push_back(downsample2(ref_pyr.back()));
        cur_pyr.push_back(downsample2(cur_pyr.back()));
    }

    FlowField flow = FlowField::zero(static_cast<int>(ref_pyr.back().rows()),
                                     static_cast<int>(ref_pyr.back().cols()));
    for (int l = levels - 1; l >= 0; --l) {
        if (l != levels - 1) {
            flow = upsample_flow(flow, static_cast<int>(ref_pyr[l].rows()),
                                 static_cast<int>(ref_pyr[l].cols()));
        }
        for (int it = 0; it < params.refinement_iterations; ++it) {
            refine_level(ref_pyr[l], cur_pyr[l], flow, params.window_radius);
        }
    }
    reset_unimproved(ref_pyr[0], cur_pyr[0], flow, params.window_radius);

    // A window that is textureless in either input at full resolution offers
    // no evidence of displacement. Coarse pyramid levels see past such a
    // window and would fill in whatever surrounds it (arbitrarily wrong when
    // content appears or disappears, e.g. under an occluder), so those pixels
    // report zero instead of inherited context.
    const PlaneD eig_ref = window_min_eig(ref_pyr[0], params.window_radius);
    const PlaneD eig_cur = window_min_eig(cur_pyr[0], params.window_radius);
    for (int y = 0; y < ref.height(); ++y) {
        for (int x = 0; x < ref.width(); ++x) {
            if (!(eig_ref(y, x) > kEigenFloor) || !(eig_cur(y, x) > kEigenFloor)) {
                flow.u(y, x) = 0.0f;
                flow.v(y, x) = 0.0f;
            }
        }
    }
    return flow;
}

EndpointError endpoint_error(const FlowField& flow, const FlowField& truth) {
    require(flow.height() == truth.height() && flow.width() == truth.width(),
            "endpoint_error: fields must share dimensions");
    require(flow.height() > 0 && flow.width() > 0, "endpoint_error: empty fields");
    EndpointError err;
    double sum = 0.0;
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            const double du = static_cast<double>(flow.u(y, x)) - truth.u(y, x);
            const double dv = static_cast<double>(flow.v(y, x)) - truth.v(y, x);
            const double e = std::hypot(du, dv);
            sum += e;
            err.max = std::max(err.max, e);
        }
    }
    err.mean = sum / (static_cast<double>(flow.height()) * flow.width());
    return err;
}

Image flow_magnitude(const FlowField& flow) {
    return (flow.u.square() + flow.v.square()).sqrt();
}

}  // namespace vmag
