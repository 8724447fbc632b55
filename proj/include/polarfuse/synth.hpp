#ifndef POLARFUSE_SYNTH_HPP
#define POLARFUSE_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/image.hpp"
#include "polarfuse/manifest.hpp"
#include "polarfuse/pgm.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

struct SynthParams {
    std::size_t classes = 14;
    std::size_t per_class = 15;
    std::size_t width = 65;
    std::size_t height = 65;
    std::uint64_t seed = 7;
    double noise_sigma = 0.02;
    double max_rotation_deg = 10.0;
    std::size_t blobs = 5;
};

/// Class template: Gaussian blobs placed in polar coordinates about the
/// image centre, expressed relative to the inscribed radius.
struct BlobLayout {
    struct Blob {
        double radius;  // fraction of the inscribed radius
        double angle;   // radians
        double sigma;   // fraction of the inscribed radius
        double amp;
    };
    std::vector<Blob> blobs;
};

namespace detail {

inline BlobLayout random_layout(Rng& rng, std::size_t count) {
    BlobLayout l;
    for (std::size_t i = 0; i < count; ++i) {
        l.blobs.push_back({rng.uniform(0.15, 0.8), rng.uniform(0.0, 2.0 * std::numbers::pi),
                           rng.uniform(0.12, 0.25), rng.uniform(0.4, 1.0)});
    }
    return l;
}

// Thermal blur widens each blob by this fraction of the inscribed radius;
// convolving Gaussians adds variances and conserves mass.
inline constexpr double kThermalBlur = 0.15;

// Renders the layout rotated by `rotation` (radians, counter-clockwise in
// row-down image coordinates), so rotation needs no resampling.
inline std::vector<double> render_layout(const BlobLayout& l, std::size_t w, std::size_t h,
                                         double rotation, bool thermal) {
    const double cr = static_cast<double>(h - 1) / 2.0;
    const double cc = static_cast<double>(w - 1) / 2.0;
    const double R = std::min(cr, cc);
    std::vector<double> img(w * h, 0.0);
    for (const auto& b : l.blobs) {
        const double ang = b.angle + rotation;
        const double by = cr + b.radius * R * std::sin(ang);
        const double bx = cc + b.radius * R * std::cos(ang);
        double s = b.sigma * R;
        double amp = b.amp;
        if (thermal) {
            const double s2 = s * s + (kThermalBlur * R) * (kThermalBlur * R);
            amp *= s * s / s2;
            s = std::sqrt(s2);
        }
        const double inv = 1.0 / (2.0 * s * s);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const double dy = static_cast<double>(y) - by;
                const double dx = static_cast<double>(x) - bx;
                img[y * w + x] += amp * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    for (double& p : img) {
        const double v = 0.1 + 0.8 * std::min(p, 1.0);
        p = thermal ? 1.0 - v : v;
    }
    return img;
}

inline std::string padded_id(char prefix, std::size_t v, std::size_t max) {
    const int digits = std::max(2, static_cast<int>(std::to_string(max).size()));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, digits, v);
    return buf;
}

}  // namespace detail


/// Generates a paired visual/thermal dataset: each class is a distinct blob
/// layout (visual) and its blurred, inverted counterpart (thermal); every
/// sample is rotated by up to +-max_rotation_deg about the centre and gets
/// independent Gaussian pixel noise. Writes PGM pairs and manifest.tsv into
/// `out_dir` and returns the manifest.
inline DatasetManifest synth_dataset(const SynthParams& p, const std::filesystem::path& out_dir) {
    if (p.classes < 2 || p.per_class < 2) {
        throw Error(ErrorCode::InvalidArgument, "synth needs at least 2 classes and 2 samples per class");
    }
    if (p.width < 3 || p.height < 3) {
        throw Error(ErrorCode::ImageTooSmall, "synth images must be at least 3x3");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

    Rng rng(p.seed);
    std::vector<BlobLayout> layouts;
    for (std::size_t c = 0; c < p.classes; ++c) layouts.push_back(detail::random_layout(rng, p.blobs));

    DatasetManifest m;
    const double max_rot = p.max_rotation_deg * std::numbers::pi / 180.0;
    for (std::size_t c = 0; c < p.classes; ++c) {
        const std::string subject = detail::padded_id('s', c + 1, p.classes);
        for (std::size_t s = 0; s < p.per_class; ++s) {
            const std::string sample = detail::padded_id('a', s + 1, p.per_class);
            const double rot = rng.uniform(-max_rot, max_rot);
            ManifestRecord rec{subject, sample, out_dir / (subject + "_" + sample + "_visual.pgm"),
                               out_dir / (subject + "_" + sample + "_thermal.pgm")};
            for (bool thermal : {false, true}) {
                auto px = detail::render_layout(layouts[c], p.width, p.height, rot, thermal);
                for (double& v : px) v = std::clamp(v + p.noise_sigma * rng.normal(), 0.0, 1.0);
                save_pgm(GrayImage(p.width, p.height, std::move(px)),
                         thermal ? rec.thermal_path : rec.visual_path);
            }
            m.records.push_back(std::move(rec));
        }
    }
    save_manifest(m, out_dir / "manifest.tsv");
    return m;
}

}  // namespace polarfuse

#endif
