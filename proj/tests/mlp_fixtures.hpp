#ifndef POLARFUSE_MLP_FIXTURES_HPP
#define POLARFUSE_MLP_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "polarfuse/mlp.hpp"

namespace polarfuse::testing {

/// Central-difference oracle for every weight and bias of `m`.
inline MlpGradient finite_difference_gradient(MlpModel m, std::span<const TrainingPair> batch,
                                              double h = 1e-5) {
    MlpGradient g = zero_like(m);
    auto probe = [&](double& param, double& out) {
        const double saved = param;
        param = saved + h;
        const double up = loss(m, batch);
        param = saved - h;
        const double down = loss(m, batch);
        param = saved;
        out = (up - down) / (2.0 * h);
    };
    for (std::size_t l = 0; l < m.layers(); ++l) {
        for (std::size_t i = 0; i < m.weights[l].size(); ++i) probe(m.weights[l][i], g.weights[l][i]);
        for (std::size_t i = 0; i < m.biases[l].size(); ++i) probe(m.biases[l][i], g.biases[l][i]);
    }
    return g;
}

/// Largest relative error between two gradients; components are compared
/// relative to max(|a|, |b|, 1e-6) so that exact zeros do not divide by 0.
inline double max_relative_error(const MlpGradient& a, const MlpGradient& b) {
    double worst = 0.0;
    auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double denom = std::max({std::abs(x[i]), std::abs(y[i]), 1e-6});
            worst = std::max(worst, std::abs(x[i] - y[i]) / denom);
        }
    };
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        cmp(a.weights[l], b.weights[l]);
        cmp(a.biases[l], b.biases[l]);
    }
    return worst;
}

/// Random network with 1..3 hidden layers, nontrivial input scaling, and a
/// random batch with targets in [-0.9, 0.9].
struct GradientFixture {
    MlpModel model;
    std::vector<TrainingPair> batch;
};

inline GradientFixture random_gradient_fixture(Rng& rng, std::size_t hidden_layers) {
    std::vector<std::size_t> sizes{1 + rng.below(5)};
    for (std::size_t i = 0; i < hidden_layers; ++i) sizes.push_back(1 + rng.below(6));
    sizes.push_back(1 + rng.below(4));
    GradientFixture f{new_network(sizes, rng.next()), {}};
    for (auto& r : f.model.input_scale) {
        r.lo = rng.uniform(-2, 0);
        r.hi = r.lo + rng.uniform(0.5, 3);
    }
    const std::size_t batch = 1 + rng.below(6);
    for (std::size_t s = 0; s < batch; ++s) {
        TrainingPair p;
        for (std::size_t i = 0; i < sizes.front(); ++i) p.input.push_back(rng.uniform(-2, 2));
        for (std::size_t o = 0; o < sizes.back(); ++o) p.target.push_back(rng.uniform(-0.9, 0.9));
        f.batch.push_back(std::move(p));
    }
    return f;
}

inline std::vector<TrainingPair> xor_data() {
    return {{{0, 0}, {-0.9}}, {{0, 1}, {0.9}}, {{1, 0}, {0.9}}, {{1, 1}, {-0.9}}};
}

}  // namespace polarfuse::testing

#endif
