#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vmag {

// Dense pixel grids. Row-major so plane(y, x) walks memory the same way the
// image files do.
template <typename Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Image = PlaneT<float>;
using Mask = PlaneT<bool>;

// Per-pixel amplification weights in [0, 1]; 1 = full effect, 0 = bypass.
using WeightMap = Image;

// Contract violation on caller-supplied data. The CLI maps it to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidInput(message);
}

// A video frame: 1 (grayscale) or 3 (RGB) planes of intensities in [0, 1].
struct Frame {
    std::vector<Image> planes;

    Frame() = default;

    explicit Frame(Image gray) {
        planes.push_back(std::move(gray));
    }

    Frame(Image r, Image g, Image b) {
        planes.reserve(3);
        planes.push_back(std::move(r));
        planes.push_back(std::move(g));
        planes.push_back(std::move(b));
        require(planes[1].rows() == planes[0].rows() && planes[1].cols() == planes[0].cols() &&
                    planes[2].rows() == planes[0].rows() && planes[2].cols() == planes[0].cols(),
                "frame planes must share dimensions");
    }

    int height() const { return planes.empty() ? 0 : static_cast<int>(planes.front().rows()); }
    int width() const { return planes.empty() ? 0 : static_cast<int>(planes.front().cols()); }
    int channels() const { return static_cast<int>(planes.size()); }

    bool same_size(const Frame& other) const {
        return height() == other.height() && width() == other.width();
    }
};

// Dense displacement field in pixel units. u is horizontal (+x right along
// columns), v vertical (+y down along rows); both live on the target grid.
struct FlowField {
    Image u, v;

    FlowField() = default;

    FlowField(Image u_, Image v_) : u(std::move(u_)), v(std::move(v_)) {
        require(u.rows() == v.rows() && u.cols() == v.cols(),
                "flow components must share dimensions");
    }

    static FlowField zero(int height, int width) {
        return {Image::Zero(height, width), Image::Zero(height, width)};
    }

    int height() const { return static_cast<int>(u.rows()); }
    int width() const { return static_cast<int>(u.cols()); }
};

}  // namespace vmag
