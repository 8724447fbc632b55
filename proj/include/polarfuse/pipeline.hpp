#ifndef POLARFUSE_PIPELINE_HPP
#define POLARFUSE_PIPELINE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarfuse/binary_io.hpp"
#include "polarfuse/eigenspace.hpp"
#include "polarfuse/error.hpp"
#include "polarfuse/fusion.hpp"
#include "polarfuse/image.hpp"
#include "polarfuse/logpolar.hpp"
#include "polarfuse/mlp.hpp"

namespace polarfuse {

/// FuseFirst: log-polar of the fused pair. PolarFirst: fusion of the two
/// log-polar images.
enum class Method { FuseFirst, PolarFirst };

inline std::string_view to_string(Method m) noexcept {
    return m == Method::FuseFirst ? "fuse-first" : "polar-first";
}

inline constexpr double kTargetOn = 0.9;
inline constexpr double kTargetOff = -0.9;

struct PipelineConfig {
    Method method = Method::PolarFirst;
    FusionWeights weights;
    LogPolarParams lp;
    ComponentPolicy pca;
    std::vector<std::size_t> mlp_hidden{100};
    TrainConfig train;

    void validate() const {
        weights.validate();
        lp.validate();
        pca.validate();
        train.validate();
        for (auto h : mlp_hidden) {
            if (h == 0) throw Error(ErrorCode::BadArchitecture, "hidden layer sizes must be >= 1");
        }
    }
};

struct ImagePair {
    GrayImage visual;
    GrayImage thermal;
};

struct LabeledPair {
    ImagePair pair;
    std::string subject;
};

/// A preprocessed (fused, log-polar) image with its subject label.
struct PreparedSample {
    GrayImage image;
    std::string subject;
};

inline GrayImage preprocess(const ImagePair& pair, const PipelineConfig& cfg) {
    // Checked up front: PolarFirst would otherwise fuse two equal-size
    // log-polar images of an unregistered pair.
    if (!pair.visual.same_shape(pair.thermal)) {
        throw Error(ErrorCode::DimensionMismatch, "visual and thermal images differ in size");
    }
    if (cfg.method == Method::FuseFirst) {
        return log_polar(fuse(pair.visual, pair.thermal, cfg.weights), cfg.lp);
    }
    return fuse(log_polar(pair.visual, cfg.lp), log_polar(pair.thermal, cfg.lp), cfg.weights);
}

inline std::vector<PreparedSample> prepare(std::span<const LabeledPair> data, const PipelineConfig& cfg) {
    std::vector<PreparedSample> out;
    out.reserve(data.size());
    for (const auto& d : data) out.push_back({preprocess(d.pair, cfg), d.subject});
    return out;
}

/// Eigenspace, classifier and the class-index -> subject map.
struct TrainedPipeline {
    EigenspaceModel eigen;
    MlpModel mlp;
    std::vector<std::string> subjects;
    TrainLog log;  // not persisted
};

/// Fits the eigenspace on the prepared images, then trains one tanh output
/// per subject with +0.9 / -0.9 one-hot targets.
inline TrainedPipeline train_prepared(std::span<const PreparedSample> training, const PipelineConfig& cfg) {
    cfg.validate();
    std::map<std::string, std::size_t> index;
    for (const auto& s : training) index.emplace(s.subject, 0);
    if (index.size() < 2) {
        throw Error(ErrorCode::TooFewSubjects, "training needs at least 2 subjects");
    }
    if (training.size() < 2) {
        throw Error(ErrorCode::TooFewImages, "training needs at least 2 samples");
    }
    TrainedPipeline tp;
    for (auto& [name, idx] : index) {
        idx = tp.subjects.size();
        tp.subjects.push_back(name);
    }

    std::vector<GrayImage> images;
    images.reserve(training.size());
    for (const auto& s : training) images.push_back(s.image);
    tp.eigen = fit_eigenspace(images, cfg.pca);
    if (tp.eigen.k() == 0) {
        throw Error(ErrorCode::DegenerateData, "all training images are identical after preprocessing");
    }

    std::vector<TrainingPair> pairs;
    pairs.reserve(training.size());
    for (const auto& s : training) {
        std::vector<double> target(tp.subjects.size(), kTargetOff);
        target[index.at(s.subject)] = kTargetOn;
        pairs.push_back({project(tp.eigen, s.image), std::move(target)});
    }

    std::vector<std::size_t> sizes{tp.eigen.k()};
    sizes.insert(sizes.end(), cfg.mlp_hidden.begin(), cfg.mlp_hidden.end());
    sizes.push_back(tp.subjects.size());
    auto [mlp, log] = train(new_network(sizes, cfg.train.seed), pairs, cfg.train);
    tp.mlp = std::move(mlp);
    tp.log = std::move(log);
    return tp;
}

inline TrainedPipeline train_pipeline(std::span<const LabeledPair> training, const PipelineConfig& cfg) {
    cfg.validate();
    const auto prepared = prepare(training, cfg);
    return train_prepared(prepared, cfg);
}

/// Predicted subject for one preprocessed image.
inline const std::string& predict_prepared(const TrainedPipeline& tp, const GrayImage& image) {
    return tp.subjects[classify(tp.mlp, project(tp.eigen, image))];
}

struct EvalResult {
    std::size_t correct = 0;
    std::size_t total = 0;
};

inline EvalResult evaluate_prepared(const TrainedPipeline& tp, std::span<const PreparedSample> testing) {
    if (testing.empty()) throw Error(ErrorCode::InvalidArgument, "testing set is empty");
    EvalResult r;
    for (const auto& s : testing) {
        ++r.total;
        if (predict_prepared(tp, s.image) == s.subject) ++r.correct;
    }
    return r;
}

inline EvalResult evaluate(const TrainedPipeline& tp, std::span<const LabeledPair> testing,
                           const PipelineConfig& cfg) {
    if (testing.empty()) throw Error(ErrorCode::InvalidArgument, "testing set is empty");
    const auto prepared = prepare(testing, cfg);
    return evaluate_prepared(tp, prepared);
}

// Container: "PFPIP1", subject count, each subject as (u64 length, bytes),
// then the eigenspace and network containers back to back.

inline std::string encode_pipeline(const TrainedPipeline& tp) {
    std::string out = "PFPIP1";
    binio::put_u64(out, tp.subjects.size());
    for (const auto& s : tp.subjects) {
        binio::put_u64(out, s.size());
        binio::put_bytes(out, s);
    }
    out += encode_eigenspace(tp.eigen);
    out += encode_mlp(tp.mlp);
    return out;
}

inline TrainedPipeline decode_pipeline(std::string_view bytes) {
    binio::Reader in(bytes);
    in.expect_magic("PFPIP1");
    TrainedPipeline tp;
    const std::size_t n = in.count(8);
    for (std::size_t i = 0; i < n; ++i) tp.subjects.push_back(in.bytes(in.count(1)));
    tp.eigen = decode_eigenspace(in);
    tp.mlp = decode_mlp(in);
    if (!in.done()) throw Error(ErrorCode::BadModelFile, "trailing bytes after pipeline");
    if (tp.mlp.input_dim() != tp.eigen.k() || tp.mlp.output_dim() != tp.subjects.size()) {
        throw Error(ErrorCode::BadModelFile, "pipeline components do not fit together");
    }
    return tp;
}

}  // namespace polarfuse

#endif
