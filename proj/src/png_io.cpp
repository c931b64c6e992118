#include "vmag/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace vmag {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Decode any 8/16-bit gray/palette/color PNG into packed 8-bit rows with
// either 1 or 3 channels.
void read_rows(const std::string& path, int& width, int& height, int& channels,
               std::vector<unsigned char>& data) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    require(file != nullptr, "png: cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png != nullptr, "png: reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw InvalidInput("png: reader allocation failed");
    }
    // Row pointers live outside the setjmp scope so the error path does not
    // jump over live destructors.
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InvalidInput("png: failed to decode " + path);
    }

    png_init_io(png, file.get());
    png_read_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InvalidInput("png: unsupported channel layout in " + path);
    }

    data.resize(static_cast<size_t>(width) * height * channels);
    rows.resize(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = data.data() + static_cast<size_t>(y) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
}

// Encode packed 8-bit rows with fixed settings so identical pixels always
// produce identical bytes.
void write_rows(const std::string& path, int width, int height, int channels,
                const std::vector<unsigned char>& data) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    require(file != nullptr, "png: cannot create " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png != nullptr, "png: writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png: writer allocation failed");
    }
    std::vector<png_bytep> rows(height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: failed to encode " + path);
    }

    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (int y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(data.data()) + static_cast<size_t>(y) * width * channels;
    }
    png_write_image(png, rows.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

unsigned char to_byte(float v) {
    const float scaled = std::round(std::clamp(v, 0.0f, 1.0f) * 255.0f);
    return static_cast<unsigned char>(scaled);
}

}  // namespace

Frame read_frame_png(const std::string& path) {
    int w = 0, h = 0, channels = 0;
    std::vector<unsigned char> data;
    read_rows(path, w, h, channels, data);

    Frame frame;
    for (int c = 0; c < channels; ++c) {
        frame.planes.emplace_back(h, w);
    }
    constexpr float kInv = 1.0f / 255.0f;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                frame.planes[c](y, x) =
                    kInv * data[(static_cast<size_t>(y) * w + x) * channels + c];
            }
        }
    }
    return frame;
}

void write_frame_png(const std::string& path, const Frame& frame) {
    require(frame.channels() == 1 || frame.channels() == 3,
            "png: frame must have 1 or 3 planes");
    require(frame.height() > 0 && frame.width() > 0, "png: empty frame");
    const int h = frame.height();
    const int w = frame.width();
    const int channels = frame.channels();
    std::vector<unsigned char> data(static_cast<size_t>(h) * w * channels);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                data[(static_cast<size_t>(y) * w + x) * channels + c] =
                    to_byte(frame.planes[c](y, x));
            }
        }
    }
    write_rows(path, w, h, channels, data);
}

Mask read_mask_png(const std::string& path) {
    int w = 0, h = 0, channels = 0;
    std::vector<unsigned char> data;
    read_rows(path, w, h, channels, data);
    require(channels == 1, "png: mask must be a single-channel image: " + path);
    Mask mask(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            mask(y, x) = data[static_cast<size_t>(y) * w + x] != 0;
        }
    }
    return mask;
}

void write_mask_png(const std::string& path, const Mask& mask) {
    require(mask.rows() > 0 && mask.cols() > 0, "png: empty mask");
    const int h = static_cast<int>(mask.rows());
    const int w = static_cast<int>(mask.cols());
    std::vector<unsigned char> data(static_cast<size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            data[static_cast<size_t>(y) * w + x] = mask(y, x) ? 255 : 0;
        }
    }
    write_rows(path, w, h, 1, data);
}

void write_weights_png(const std::string& path, const WeightMap& weights) {
    require(weights.rows() > 0 && weights.cols() > 0, "png: empty weight map");
    Frame frame((Image(weights)));
    write_frame_png(path, frame);
}

}  // namespace vmag
