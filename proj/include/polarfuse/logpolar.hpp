#ifndef POLARFUSE_LOGPOLAR_HPP
#define POLARFUSE_LOGPOLAR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/image.hpp"

namespace polarfuse {

struct PixelPoint {
    double row = 0.0;
    double col = 0.0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Sampling geometry of the log-polar map.
///
/// The intermediate grid has `radial_samples` rows (log radius, from 1 at
/// the top row to R at the bottom row) and `angular_samples` columns (angle
/// 0..2pi, counter-clockwise from the +column axis with rows pointing down).
/// It is then resized to an `out_size` square.
struct LogPolarParams {
    std::size_t angular_samples = 360;
    std::size_t radial_samples = 128;
    std::size_t out_size = 128;
    std::optional<PixelPoint> center;
    /// Overrides the inscribed radius. Samples that fall outside the image
    /// read as 0.
    std::optional<double> radius;

    void validate() const {
        if (angular_samples < 4 || angular_samples % 2 != 0) {
            throw Error(ErrorCode::InvalidArgument, "angular_samples must be even and >= 4");
        }
        if (radial_samples < 2) {
            throw Error(ErrorCode::InvalidArgument, "radial_samples must be >= 2");
        }
        if (out_size < 2) {
            throw Error(ErrorCode::InvalidArgument, "out_size must be >= 2");
        }
        if (radius && !(*radius > 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "radius override must be > 1");
        }
    }
};

struct CenterRadius {
    PixelPoint center;
    double radius = 0.0;
};

/// Geometric centre and largest inscribed radius.
inline CenterRadius center_and_radius(const GrayImage& img) {
    if (img.width() < 3 || img.height() < 3) {
        throw Error(ErrorCode::ImageTooSmall, "log-polar needs at least 3x3, got " +
                                                  std::to_string(img.width()) + "x" +
                                                  std::to_string(img.height()));
    }
    const double h1 = static_cast<double>(img.height() - 1);
    const double w1 = static_cast<double>(img.width() - 1);
    return {{h1 / 2.0, w1 / 2.0}, std::min(h1, w1) / 2.0};
}

namespace detail {

// cos/sin for theta_j = 2*pi*j/n. The second half of the table is the exact
// negation of the first so a half-turn maps sample offsets to their exact
// negatives.
inline void angle_table(std::size_t n, std::vector<double>& cos_t, std::vector<double>& sin_t) {
    cos_t.resize(n);
    sin_t.resize(n);
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < half; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        cos_t[j] = std::cos(theta);
        sin_t[j] = std::sin(theta);
        cos_t[j + half] = -cos_t[j];
        sin_t[j + half] = -sin_t[j];
    }
}

inline double sample_nearest(const GrayImage& img, double row, double col) {
    const double r = std::floor(row + 0.5);
    const double c = std::floor(col + 0.5);
    if (r < 0.0 || c < 0.0 || r >= static_cast<double>(img.height()) ||
        c >= static_cast<double>(img.width())) {
        return 0.0;
    }
    return img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

}  // namespace detail

/// Radius of row i: R^(i/(rows-1)), so row 0 is radius 1 and the last row is R.
inline double log_polar_radius(std::size_t i, std::size_t radial_samples, double radius) {
    return std::pow(radius, static_cast<double>(i) / static_cast<double>(radial_samples - 1));
}

/// The radial_samples x angular_samples log-polar grid, before the final
/// square resize.
inline GrayImage log_polar_grid(const GrayImage& img, const LogPolarParams& p) {
    p.validate();
    const CenterRadius geom = center_and_radius(img);
    const PixelPoint c = p.center.value_or(geom.center);
    const double radius = p.radius.value_or(geom.radius);
    if (!(radius >= 1.0)) {
        throw Error(ErrorCode::ImageTooSmall, "radius must be at least 1");
    }

    std::vector<double> cos_t, sin_t;
    detail::angle_table(p.angular_samples, cos_t, sin_t);

    std::vector<double> out;
    out.reserve(p.radial_samples * p.angular_samples);
    for (std::size_t i = 0; i < p.radial_samples; ++i) {
        const double r = log_polar_radius(i, p.radial_samples, radius);
        for (std::size_t j = 0; j < p.angular_samples; ++j) {
            out.push_back(detail::sample_nearest(img, c.row + r * sin_t[j], c.col + r * cos_t[j]));
        }
    }
    return GrayImage(p.angular_samples, p.radial_samples, std::move(out));
}

/// Log-polar transform resized to an out_size x out_size square. Rotation
/// about the centre becomes a circular column shift.
inline GrayImage log_polar(const GrayImage& img, const LogPolarParams& p) {
    return resize_nearest(log_polar_grid(img, p), p.out_size, p.out_size);
}

/// Circularly shifts columns right by `shift` (negative shifts left).
inline GrayImage column_shift(const GrayImage& img, long shift) {
    const long w = static_cast<long>(img.width());
    const long s = ((shift % w) + w) % w;
    std::vector<double> out(img.size());
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (long c = 0; c < w; ++c) {
            out[r * img.width() + static_cast<std::size_t>((c + s) % w)] =
                img.at(r, static_cast<std::size_t>(c));
        }
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace polarfuse

#endif
