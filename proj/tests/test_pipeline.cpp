#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "polarfuse/manifest.hpp"
#include "polarfuse/pipeline.hpp"
#include "polarfuse/protocols.hpp"
#include "polarfuse/synth.hpp"
#include "test_util.hpp"

using namespace polarfuse;
using polarfuse::testing::random_image;
using polarfuse::testing::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

PipelineConfig small_config(Method method = Method::PolarFirst) {
    PipelineConfig cfg;
    cfg.method = method;
    cfg.lp.angular_samples = 32;
    cfg.lp.radial_samples = 12;
    cfg.lp.out_size = 16;
    cfg.mlp_hidden = {12};
    cfg.train.epochs = 3000;
    cfg.train.lr = 0.1;
    cfg.train.mc = 0.5;
    cfg.train.seed = 3;
    return cfg;
}

std::vector<PreparedSample> prepare_all(const DatasetManifest& m, const PipelineConfig& cfg) {
    const auto data = load_dataset(m);
    return prepare(data, cfg);
}

SynthParams small_synth(std::size_t classes, std::size_t per_class) {
    SynthParams p;
    p.classes = classes;
    p.per_class = per_class;
    p.width = 21;
    p.height = 21;
    p.seed = 5;
    return p;
}

}  // namespace

TEST(Manifest, ParsesRecordsAndResolvesPaths) {
    const auto m = parse_manifest(
        "#polarfuse-manifest v1\n# comment\ns01\ta01\tv1.pgm\tt1.pgm\n\ns02\ta01\tsub/v2.pgm\tt2.pgm\n", "/data");
    ASSERT_EQ(m.records.size(), 2u);
    EXPECT_EQ(m.records[1].visual_path, std::filesystem::path("/data/sub/v2.pgm"));
    EXPECT_EQ(m.subjects(), (std::vector<std::string>{"s01", "s02"}));
}

TEST(Manifest, ParseErrorsCarryLineNumbers) {
    try {
        parse_manifest("#polarfuse-manifest v1\ns01\ta01\tv.pgm\n", ".");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { parse_manifest("s01\ta01\tv\tt\n", "."); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_manifest("#polarfuse-manifest v1\ns01\ta01\tv\tt\ns01\ta01\tx\ty\n", "."); }),
              ErrorCode::DuplicateSample);
}

TEST(Manifest, LoadValidatesFiles) {
    TempDir dir("manifest");
    save_pgm(GrayImage(320, 240, 0.5), dir / "v.pgm");
    save_pgm(GrayImage(160, 120, 0.5), dir / "t.pgm");
    save_pgm(GrayImage(320, 240, 0.2), dir / "t2.pgm");
    polarfuse::testing::write_bytes(dir / "ok.tsv", "#polarfuse-manifest v1\ns01\ta01\tv.pgm\tt2.pgm\ns02\ta01\tv.pgm\tt2.pgm\n");
    EXPECT_EQ(load_manifest(dir / "ok.tsv").records.size(), 2u);
    polarfuse::testing::write_bytes(dir / "bad.tsv", "#polarfuse-manifest v1\ns01\ta01\tv.pgm\tt.pgm\n");
    EXPECT_EQ(code_of([&] { load_manifest(dir / "bad.tsv"); }), ErrorCode::PairDimensionMismatch);
    polarfuse::testing::write_bytes(dir / "missing.tsv", "#polarfuse-manifest v1\ns01\ta01\tv.pgm\tnope.pgm\n");
    EXPECT_EQ(code_of([&] { load_manifest(dir / "missing.tsv"); }), ErrorCode::MissingFile);
    EXPECT_EQ(code_of([&] { load_manifest(dir / "absent.tsv"); }), ErrorCode::MissingFile);
}

TEST(Preprocess, EqualModalitiesCollapseBothOrderings) {
    Rng rng(1);
    const GrayImage v = random_image(rng, 19, 15);
    const ImagePair pair{v, v};
    const auto cfg_a = small_config(Method::FuseFirst);
    const auto cfg_b = small_config(Method::PolarFirst);
    EXPECT_EQ(preprocess(pair, cfg_a), preprocess(pair, cfg_b));
}

TEST(Preprocess, VisualOnlyWeightsGiveVisualLogPolar) {
    Rng rng(2);
    const ImagePair pair{random_image(rng, 17, 17), random_image(rng, 17, 17)};
    for (Method m : {Method::FuseFirst, Method::PolarFirst}) {
        auto cfg = small_config(m);
        cfg.weights = {1.0, 0.0};
        EXPECT_EQ(preprocess(pair, cfg), log_polar(pair.visual, cfg.lp));
    }
}

TEST(Preprocess, ConstantPairGivesWeightedConstant) {
    // 0.7 * 0.2 + 0.3 * 0.6 = 0.32
    const ImagePair pair{GrayImage(11, 9, 0.2), GrayImage(11, 9, 0.6)};
    for (Method m : {Method::FuseFirst, Method::PolarFirst}) {
        const GrayImage out = preprocess(pair, small_config(m));
        EXPECT_EQ(out.width(), 16u);
        for (double p : out.pixels()) EXPECT_NEAR(p, 0.32, 1e-15);
    }
}

TEST(Preprocess, MismatchedPairPropagates) {
    const ImagePair pair{GrayImage(11, 9), GrayImage(9, 11)};
    EXPECT_EQ(code_of([&] { preprocess(pair, small_config(Method::FuseFirst)); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([&] { preprocess(pair, small_config(Method::PolarFirst)); }), ErrorCode::DimensionMismatch);
}

TEST(TrainPipeline, SeparableConstantsReachFullTrainingAccuracy) {
    std::vector<LabeledPair> data;
    for (int s = 0; s < 3; ++s) {
        const double lo = 0.1 + 0.02 * s, hi = 0.8 + 0.02 * s;
        data.push_back({{GrayImage(9, 9, lo), GrayImage(9, 9, lo)}, "dark"});
        data.push_back({{GrayImage(9, 9, hi), GrayImage(9, 9, hi)}, "light"});
    }
    const auto cfg = small_config();
    const TrainedPipeline tp = train_pipeline(data, cfg);
    EXPECT_EQ(tp.subjects, (std::vector<std::string>{"dark", "light"}));
    const auto r = evaluate(tp, data, cfg);
    EXPECT_EQ(r.correct, r.total);
    EXPECT_EQ(r.total, 6u);
}

TEST(TrainPipeline, DegenerateAndTooFewSubjects) {
    const GrayImage img(9, 9, 0.4);
    const std::vector<LabeledPair> same{{{img, img}, "a"}, {{img, img}, "b"}};
    EXPECT_EQ(code_of([&] { train_pipeline(same, small_config()); }), ErrorCode::DegenerateData);
    const std::vector<LabeledPair> one{{{img, img}, "a"}, {{GrayImage(9, 9, 0.9), img}, "a"}};
    EXPECT_EQ(code_of([&] { train_pipeline(one, small_config()); }), ErrorCode::TooFewSubjects);
}

TEST(TrainPipeline, DeterministicPersistedBytes) {
    TempDir dir("det");
    const auto m = synth_dataset(small_synth(3, 4), dir.path());
    const auto data = load_dataset(m);
    auto cfg = small_config();
    cfg.train.epochs = 300;
    const std::string a = encode_pipeline(train_pipeline(data, cfg));
    const std::string b = encode_pipeline(train_pipeline(data, cfg));
    EXPECT_EQ(a, b);
    const TrainedPipeline back = decode_pipeline(a);
    EXPECT_EQ(encode_pipeline(back), a);
    EXPECT_EQ(a.substr(0, 6), "PFPIP1");
}

TEST(Evaluate, PredictionsAlwaysNameATrainingSubject) {
    TempDir dir("eval");
    const auto m = synth_dataset(small_synth(3, 4), dir.path());
    const auto cfg = small_config();
    const auto prepared = prepare_all(m, cfg);
    const std::vector<PreparedSample> train_set(prepared.begin(), prepared.begin() + 8);
    const auto tp = train_prepared(train_set, cfg);
    const std::set<std::string> known(tp.subjects.begin(), tp.subjects.end());
    for (const auto& s : prepared) EXPECT_TRUE(known.count(predict_prepared(tp, s.image)));
    EXPECT_THROW(evaluate_prepared(tp, {}), Error);
}

TEST(Splits, KFoldPartitionIsDisjointCoveringStratified) {
    TempDir dir("kfold");
    const auto m = synth_dataset(small_synth(4, 6), dir.path());
    const auto prepared = prepare_all(m, small_config());
    const auto groups = group_by_subject(std::span<const PreparedSample>(prepared));
    const auto folds = kfold_split(groups, 3, 11);
    std::multiset<std::size_t> all;
    for (const auto& f : folds) {
        std::map<std::string, int> per;
        for (auto i : f) {
            all.insert(i);
            ++per[prepared[i].subject];
        }
        EXPECT_EQ(per.size(), 4u);
        for (const auto& [s, c] : per) EXPECT_EQ(c, 2);
    }
    EXPECT_EQ(all.size(), prepared.size());
    EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), prepared.size());
    EXPECT_EQ(kfold_split(groups, 3, 11), folds);
    EXPECT_NE(kfold_split(groups, 3, 12), folds);

    // k equal to the per-subject count is leave-one-out per subject.
    for (const auto& f : kfold_split(groups, 6, 1)) EXPECT_EQ(f.size(), 4u);
    EXPECT_EQ(code_of([&] { kfold_split(groups, 4, 1); }), ErrorCode::IndivisibleFolds);
}

TEST(Splits, IncrementalSetsNestAndStayDisjointFromTraining) {
    TempDir dir("inc");
    const auto m = synth_dataset(small_synth(3, 8), dir.path());
    const auto prepared = prepare_all(m, small_config());
    const auto groups = group_by_subject(std::span<const PreparedSample>(prepared));
    const auto split = incremental_split(groups, 4, 2);
    EXPECT_EQ(split.train.size(), 12u);
    const std::set<std::size_t> train(split.train.begin(), split.train.end());
    for (std::size_t c = 1; c <= 4; ++c) {
        const auto now = split.test_set(c);
        EXPECT_EQ(now.size(), 3 * c);
        for (auto i : now) EXPECT_FALSE(train.count(i));
        if (c < 4) {
            const auto next = split.test_set(c + 1);
            const std::set<std::size_t> next_set(next.begin(), next.end());
            for (auto i : now) EXPECT_TRUE(next_set.count(i));
        }
    }
    EXPECT_EQ(code_of([&] { incremental_split(groups, 5, 2); }), ErrorCode::InsufficientSamples);
}

TEST(Protocols, IncrementalReportStructure) {
    TempDir dir("incp");
    const auto m = synth_dataset(small_synth(3, 6), dir.path());
    const auto cfg = small_config();
    const auto r = incremental_protocol(m, cfg, 3, 4);
    ASSERT_EQ(r.rows.size(), 3u);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(r.rows[c].test_case, c + 1);
        EXPECT_EQ(r.rows[c].per_class, c + 1);
        EXPECT_EQ(r.rows[c].total, 3 * (c + 1));
        EXPECT_NEAR(r.rows[c].rate_percent, 100.0 * r.rows[c].correct / r.rows[c].total, 0.005);
    }
    const auto again = incremental_protocol(m, cfg, 3, 4);
    EXPECT_EQ(report_csv(again), report_csv(r));
}

TEST(Protocols, SingleStepPerfectClassifier) {
    TempDir dir("one");
    const auto m = synth_dataset(small_synth(2, 2), dir.path());
    const auto r = incremental_protocol(m, small_config(), 1, 1);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].correct, r.rows[0].total);
    EXPECT_EQ(format_percent(r.average_rate), "100.00");
}

TEST(Protocols, KFoldReportAndMethodEquivalenceOnEqualModalities) {
    TempDir dir("kfp");
    const auto m = synth_dataset(small_synth(3, 6), dir.path());
    // Point every record's thermal path at its visual image.
    DatasetManifest same = m;
    for (auto& rec : same.records) rec.thermal_path = rec.visual_path;
    const auto a = kfold_protocol(same, small_config(Method::FuseFirst), 3, 9);
    const auto b = kfold_protocol(same, small_config(Method::PolarFirst), 3, 9);
    EXPECT_EQ(report_csv(a), report_csv(b));
    ASSERT_EQ(a.rows.size(), 3u);
    for (const auto& row : a.rows) {
        EXPECT_EQ(row.total, 6u);
        EXPECT_EQ(row.per_class, 2u);
    }
}

TEST(Synth, StructureAndDeterminism) {
    TempDir a("syna"), b("synb");
    const auto ma = synth_dataset(SynthParams{}, a.path());
    const auto mb = synth_dataset(SynthParams{}, b.path());
    ASSERT_EQ(ma.records.size(), 210u);
    EXPECT_EQ(ma.subjects().size(), 14u);
    const auto loaded = load_manifest(a / "manifest.tsv");
    EXPECT_EQ(loaded.records.size(), 210u);
    for (std::size_t i = 0; i < ma.records.size(); ++i) {
        EXPECT_EQ(polarfuse::testing::read_bytes(ma.records[i].visual_path),
                  polarfuse::testing::read_bytes(mb.records[i].visual_path));
        EXPECT_EQ(polarfuse::testing::read_bytes(ma.records[i].thermal_path),
                  polarfuse::testing::read_bytes(mb.records[i].thermal_path));
    }
    EXPECT_EQ(polarfuse::testing::read_bytes(a / "manifest.tsv"), polarfuse::testing::read_bytes(b / "manifest.tsv"));
}

TEST(Synth, ClassMeansAreFarApartRelativeToNoise) {
    TempDir dir("synm");
    const SynthParams p;
    const auto m = synth_dataset(p, dir.path());
    const auto data = load_dataset(m);
    std::vector<std::vector<double>> means(p.classes, std::vector<double>(p.width * p.height, 0.0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto px = data[i].pair.visual.pixels();
        for (std::size_t j = 0; j < px.size(); ++j) means[i / p.per_class][j] += px[j] / static_cast<double>(p.per_class);
    }
    double closest = 1e300;
    for (std::size_t a = 0; a < p.classes; ++a) {
        for (std::size_t b = a + 1; b < p.classes; ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < means[a].size(); ++j) s += (means[a][j] - means[b][j]) * (means[a][j] - means[b][j]);
            closest = std::min(closest, std::sqrt(s));
        }
    }
    EXPECT_GT(closest, 10.0 * p.noise_sigma);
}

TEST(Synth, RejectsTinyRequests) {
    TempDir dir("tiny");
    EXPECT_THROW(synth_dataset(small_synth(1, 4), dir.path()), Error);
    EXPECT_THROW(synth_dataset(small_synth(3, 1), dir.path()), Error);
}
