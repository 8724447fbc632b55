#ifndef POLARFUSE_PROTOCOLS_HPP
#define POLARFUSE_PROTOCOLS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/manifest.hpp"
#include "polarfuse/pgm.hpp"
#include "polarfuse/pipeline.hpp"
#include "polarfuse/report.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

inline std::vector<LabeledPair> load_dataset(const DatasetManifest& m) {
    std::vector<LabeledPair> out;
    out.reserve(m.records.size());
    for (const auto& r : m.records) {
        ImagePair pair{load_pgm(r.visual_path), load_pgm(r.thermal_path)};
        if (!pair.visual.same_shape(pair.thermal)) {
            throw Error(ErrorCode::PairDimensionMismatch, r.subject_id + "/" + r.sample_id);
        }
        out.push_back({std::move(pair), r.subject_id});
    }
    return out;
}

/// Sample indices grouped by subject; subjects sorted, members kept in
/// input order.
struct SubjectGroups {
    std::vector<std::string> subjects;
    std::vector<std::vector<std::size_t>> members;
};

template <typename Labeled>
SubjectGroups group_by_subject(std::span<const Labeled> samples) {
    std::map<std::string, std::vector<std::size_t>> by;
    for (std::size_t i = 0; i < samples.size(); ++i) by[samples[i].subject].push_back(i);
    SubjectGroups g;
    for (auto& [s, idx] : by) {
        g.subjects.push_back(s);
        g.members.push_back(std::move(idx));
    }
    return g;
}

/// Fixed train/test reservation for the incremental protocol. Each subject's
/// samples are shuffled; the first floor(n/2) train, the rest are reserved
/// for testing in shuffled order.
struct IncrementalSplit {
    std::vector<std::size_t> train;
    std::vector<std::vector<std::size_t>> reserved;  // per subject

    /// Test set of step c (1-based): the first c reserved samples of every
    /// subject. Step c's set is contained in step c+1's.
    std::vector<std::size_t> test_set(std::size_t step) const {
        std::vector<std::size_t> out;
        for (const auto& r : reserved) out.insert(out.end(), r.begin(), r.begin() + static_cast<long>(step));
        return out;
    }
};

inline IncrementalSplit incremental_split(const SubjectGroups& g, std::size_t steps, std::uint64_t seed) {
    if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be >= 1");
    Rng rng(seed);
    IncrementalSplit split;
    for (std::size_t s = 0; s < g.subjects.size(); ++s) {
        auto idx = g.members[s];
        rng.shuffle(idx);
        const std::size_t n_train = idx.size() / 2;
        if (idx.size() - n_train < steps || n_train == 0) {
            throw Error(ErrorCode::InsufficientSamples,
                        "subject " + g.subjects[s] + " has " + std::to_string(idx.size()) +
                            " samples; " + std::to_string(steps) + " test steps need at least " +
                            std::to_string(2 * steps));
        }
        split.train.insert(split.train.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
        split.reserved.emplace_back(idx.begin() + static_cast<long>(n_train), idx.end());
    }
    return split;
}

/// Stratified k-fold partition: each subject's samples are shuffled and cut
/// into k equal slices; fold i collects slice i of every subject.
inline std::vector<std::vector<std::size_t>> kfold_split(const SubjectGroups& g, std::size_t k,
                                                         std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t s = 0; s < g.subjects.size(); ++s) {
        auto idx = g.members[s];
        if (idx.size() % k != 0) {
            throw Error(ErrorCode::IndivisibleFolds, "subject " + g.subjects[s] + " has " +
                                                         std::to_string(idx.size()) +
                                                         " samples, not divisible by k = " +
                                                         std::to_string(k));
        }
        rng.shuffle(idx);
        const std::size_t per = idx.size() / k;
        for (std::size_t f = 0; f < k; ++f) {
            folds[f].insert(folds[f].end(), idx.begin() + static_cast<long>(f * per),
                            idx.begin() + static_cast<long>((f + 1) * per));
        }
    }
    return folds;
}

inline std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& cfg) {
    auto num = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    std::string hidden;
    for (auto h : cfg.mlp_hidden) hidden += (hidden.empty() ? "" : ",") + std::to_string(h);
    return {
        {"method", std::string(to_string(cfg.method))},
        {"alpha", num(cfg.weights.a)},
        {"beta", num(cfg.weights.b)},
        {"logpolar", std::to_string(cfg.lp.radial_samples) + "x" + std::to_string(cfg.lp.angular_samples) +
                         " -> " + std::to_string(cfg.lp.out_size)},
        {"pca", cfg.pca.kind == ComponentPolicy::Kind::Fixed ? "k=" + std::to_string(cfg.pca.k)
                                                             : "tau=" + num(cfg.pca.tau)},
        {"hidden", hidden},
        {"lr", num(cfg.train.lr)},
        {"mc", num(cfg.train.mc)},
        {"epochs", std::to_string(cfg.train.epochs)},
        {"goal", num(cfg.train.grad_goal)},
        {"seed", std::to_string(cfg.train.seed)},
    };
}

namespace detail {

inline std::vector<PreparedSample> pick(std::span<const PreparedSample> all,
                                        std::span<const std::size_t> idx) {
    std::vector<PreparedSample> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(all[i]);
    return out;
}

}  // namespace detail

/// Trains once on half of every subject's samples, then tests on 1, 2, ...,
/// `steps` reserved samples per subject.
inline ExperimentReport incremental_protocol(std::span<const PreparedSample> samples,
                                             const PipelineConfig& cfg, std::size_t steps,
                                             std::uint64_t seed) {
    const auto groups = group_by_subject(samples);
    const auto split = incremental_split(groups, steps, seed);
    const auto tp = train_prepared(detail::pick(samples, split.train), cfg);

    std::vector<ReportRow> rows;
    for (std::size_t c = 1; c <= steps; ++c) {
        const auto test = split.test_set(c);
        const auto r = evaluate_prepared(tp, detail::pick(samples, test));
        rows.push_back({c, r.total, c, r.correct, 0.0});
    }
    auto report = make_report(std::move(rows));
    report.title = "incremental protocol, " + std::string(to_string(cfg.method));
    report.config = describe(cfg);
    return report;
}

/// Stratified k-fold cross-validation: one row per held-out fold.
inline ExperimentReport kfold_protocol(std::span<const PreparedSample> samples, const PipelineConfig& cfg,
                                       std::size_t k, std::uint64_t seed) {
    const auto groups = group_by_subject(samples);
    const auto folds = kfold_split(groups, k, seed);
    const std::size_t per_class = groups.members.front().size() / k;

    std::vector<ReportRow> rows;
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        }
        const auto tp = train_prepared(detail::pick(samples, train_idx), cfg);
        const auto r = evaluate_prepared(tp, detail::pick(samples, folds[f]));
        rows.push_back({f + 1, r.total, per_class, r.correct, 0.0});
    }
    auto report = make_report(std::move(rows));
    report.title = std::to_string(k) + "-fold protocol, " + std::string(to_string(cfg.method));
    report.config = describe(cfg);
    return report;
}

inline ExperimentReport incremental_protocol(const DatasetManifest& m, const PipelineConfig& cfg,
                                             std::size_t steps, std::uint64_t seed) {
    cfg.validate();
    const auto data = load_dataset(m);
    const auto prepared = prepare(data, cfg);
    return incremental_protocol(std::span<const PreparedSample>(prepared), cfg, steps, seed);
}

inline ExperimentReport kfold_protocol(const DatasetManifest& m, const PipelineConfig& cfg,
                                       std::size_t k, std::uint64_t seed) {
    cfg.validate();
    const auto data = load_dataset(m);
    const auto prepared = prepare(data, cfg);
    return kfold_protocol(std::span<const PreparedSample>(prepared), cfg, k, seed);
}

}  // namespace polarfuse

#endif
