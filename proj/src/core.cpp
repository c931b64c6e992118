#include "vmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vmag {

float bilinear_sample(const Image& plane, float x, float y) {
    const int w = static_cast<int>(plane.cols());
    const int h = static_cast<int>(plane.rows());
    require(w > 0 && h > 0, "bilinear_sample: empty plane");

    // Clamp to the valid rectangle; everything past the border repeats the
    // edge pixel.
    x = std::clamp(x, 0.0f, static_cast<float>(w - 1));
    y = std::clamp(y, 0.0f, static_cast<float>(h - 1));

    const int x0 = std::min(static_cast<int>(x), w - 1);
    const int y0 = std::min(static_cast<int>(y), h - 1);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const float fx = x - static_cast<float>(x0);
    const float fy = y - static_cast<float>(y0);

    // On-lattice queries take the fx == fy == 0 path and reproduce the stored
    // value exactly.
    const float top = plane(y0, x0) + fx * (plane(y0, x1) - plane(y0, x0));
    const float bot = plane(y1, x0) + fx * (plane(y1, x1) - plane(y1, x0));
    return top + fy * (bot - top);
}

Image warp_backward(const Image& plane, const FlowField& flow) {
    require(plane.rows() == flow.u.rows() && plane.cols() == flow.u.cols(),
            "warp_backward: flow dimensions must match the plane");
    const int h = static_cast<int>(plane.rows());
    const int w = static_cast<int>(plane.cols());
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            out(y, x) = bilinear_sample(plane,
                                        static_cast<float>(x) + flow.u(y, x),
                                        static_cast<float>(y) + flow.v(y, x));
        }
    }
    return out;
}

Frame warp_backward(const Frame& frame, const FlowField& flow) {
    require(frame.channels() == 1 || frame.channels() == 3,
            "warp_backward: frame must have 1 or 3 planes");
    Frame out;
    out.planes.reserve(frame.planes.size());
    for (const Image& plane : frame.planes) {
        out.planes.push_back(warp_backward(plane, flow));
    }
    return out;
}

Frame to_grayscale(const Frame& frame) {
    require(frame.channels() == 1 || frame.channels() == 3,
            "to_grayscale: frame must have 1 or 3 planes");
    if (frame.channels() == 1) {
        return frame;
    }
    Image gray = 0.299f * frame.planes[0] + 0.587f * frame.planes[1] + 0.114f * frame.planes[2];
    return Frame(std::move(gray));
}

Image gaussian_blur(const Image& plane, double sigma) {
    if (sigma <= 0.0) {
        return plane;
    }
    const int h = static_cast<int>(plane.rows());
    const int w = static_cast<int>(plane.cols());
    require(h > 0 && w > 0, "gaussian_blur: empty plane");

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        kernel[i + radius] = v;
        norm += v;
    }
    for (double& k : kernel) k /= norm;

    // Horizontal pass, then vertical, accumulating in double.
    Image tmp(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xi = std::clamp(x + i, 0, w - 1);
                acc += kernel[i + radius] * plane(y, xi);
            }
            tmp(y, x) = static_cast<float>(acc);
        }
    }
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yi = std::clamp(y + i, 0, h - 1);
                acc += kernel[i + radius] * tmp(yi, x);
            }
            out(y, x) = static_cast<float>(acc);
        }
    }
    return out;
}

}  // namespace vmag
