#ifndef POLARFUSE_IMAGE_HPP
#define POLARFUSE_IMAGE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polarfuse/error.hpp"

namespace polarfuse {

/// Single-channel raster, row-major, intensities in [0,1].
///
/// Images are plain values: copying is cheap enough at face-image sizes and
/// every pipeline stage returns a fresh image instead of mutating its input.
class GrayImage {
public:
    /// Slack allowed above 1 (or below 0) for values produced by exact
    /// floating-point arithmetic such as a weighted sum with a+b = 1.
    static constexpr double kRangeSlack = 1e-9;

    GrayImage() = default;

    GrayImage(std::size_t width, std::size_t height, double fill = 0.0)
        : GrayImage(width, height, std::vector<double>(width * height, fill)) {}

    GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (width_ == 0 || height_ == 0) {
            throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
        }
        if (pixels_.size() != width_ * height_) {
            throw Error(ErrorCode::LengthMismatch,
                        "pixel count " + std::to_string(pixels_.size()) + " != " +
                            std::to_string(width_) + "x" + std::to_string(height_));
        }
        for (double p : pixels_) {
            if (!(p >= -kRangeSlack && p <= 1.0 + kRangeSlack)) {
                throw Error(ErrorCode::InvalidArgument, "pixel value outside [0,1]");
            }
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }

    std::span<const double> pixels() const noexcept { return pixels_; }

    bool same_shape(const GrayImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> pixels_;
};

/// Nearest-neighbour resize with pixel-centre sampling:
/// out(i,j) = in(floor((i+0.5)*in_h/out_h), floor((j+0.5)*in_w/out_w)).
inline GrayImage resize_nearest(const GrayImage& img, std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) {
        throw Error(ErrorCode::InvalidArgument, "resize target must be at least 1x1");
    }
    const std::size_t in_w = img.width();
    const std::size_t in_h = img.height();

    // Integer form of the centre-sampling formula: floor((2i+1)*in / (2*out)).
    std::vector<std::size_t> src_col(out_w);
    for (std::size_t j = 0; j < out_w; ++j) {
        src_col[j] = ((2 * j + 1) * in_w) / (2 * out_w);
    }
    std::vector<double> out;
    out.reserve(out_w * out_h);
    for (std::size_t i = 0; i < out_h; ++i) {
        const std::size_t src_row = ((2 * i + 1) * in_h) / (2 * out_h);
        for (std::size_t j = 0; j < out_w; ++j) {
            out.push_back(img.at(src_row, src_col[j]));
        }
    }
    return GrayImage(out_w, out_h, std::move(out));
}

}  // namespace polarfuse

#endif
