#ifndef POLARFUSE_FUSION_HPP
#define POLARFUSE_FUSION_HPP

#include <string>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/image.hpp"

namespace polarfuse {

/// Weights of the pixel-level weighted sum F = a*V + b*T.
struct FusionWeights {
    double a = 0.70;  // visual
    double b = 0.30;  // thermal

    void validate() const {
        if (!(a >= 0.0) || !(b >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "fusion weights must be nonnegative");
        }
        if (a + b > 1.0 + 1e-12) {
            throw Error(ErrorCode::InvalidArgument,
                        "fusion weights must satisfy a + b <= 1 (got " + std::to_string(a + b) + ")");
        }
    }
};

/// Pixel-wise weighted fusion of two registered images of identical size.
/// No clipping is needed: the weight invariant keeps every output in [0,1].
inline GrayImage fuse(const GrayImage& visual, const GrayImage& thermal, const FusionWeights& w) {
    w.validate();
    if (!visual.same_shape(thermal)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "fusion inputs differ: " + std::to_string(visual.width()) + "x" +
                        std::to_string(visual.height()) + " vs " + std::to_string(thermal.width()) +
                        "x" + std::to_string(thermal.height()));
    }
    const auto v = visual.pixels();
    const auto t = thermal.pixels();
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = w.a * v[i] + w.b * t[i];
    }
    return GrayImage(visual.width(), visual.height(), std::move(out));
}

}  // namespace polarfuse

#endif
