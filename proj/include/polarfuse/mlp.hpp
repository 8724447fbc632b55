#ifndef POLARFUSE_MLP_HPP
#define POLARFUSE_MLP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarfuse/binary_io.hpp"
#include "polarfuse/error.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

/// Per-feature (lo, hi) range; the feature is mapped affinely so that lo
/// goes to -1 and hi to +1.
struct InputRange {
    double lo = -1.0;
    double hi = 1.0;

    friend bool operator==(const InputRange&, const InputRange&) = default;
};

/// Fully connected tanh network. weights[l] is a row-major
/// (layer_sizes[l+1] x layer_sizes[l]) matrix; biases[l] has
/// layer_sizes[l+1] entries.
struct MlpModel {
    std::vector<std::size_t> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<InputRange> input_scale;

    std::size_t layers() const noexcept { return weights.size(); }
    std::size_t input_dim() const noexcept { return layer_sizes.front(); }
    std::size_t output_dim() const noexcept { return layer_sizes.back(); }

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Same shape as the model's weights/biases.
struct MlpGradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    double inf_norm() const noexcept {
        double m = 0.0;
        for (const auto& w : weights)
            for (double g : w) m = std::max(m, std::abs(g));
        for (const auto& b : biases)
            for (double g : b) m = std::max(m, std::abs(g));
        return m;
    }
};

struct TrainingPair {
    std::vector<double> input;
    std::vector<double> target;
};

/// Gradient-descent-with-momentum hyperparameters.
struct TrainConfig {
    std::size_t epochs = 700000;
    double lr = 0.02;
    double mc = 0.09;
    double grad_goal = 1e-6;
    std::uint64_t seed = 1;

    void validate() const {
        if (epochs == 0) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
        if (!(lr > 0.0)) throw Error(ErrorCode::InvalidArgument, "lr must be > 0");
        if (!(mc >= 0.0 && mc < 1.0)) throw Error(ErrorCode::InvalidArgument, "mc must be in [0,1)");
        if (!(grad_goal > 0.0)) throw Error(ErrorCode::InvalidArgument, "goal must be > 0");
    }
};

enum class StopReason { GoalMet, EpochLimit };

struct TrainLog {
    std::vector<double> loss;  // E before each epoch's update
    StopReason reason = StopReason::EpochLimit;
    std::size_t epochs_run = 0;
    double final_grad_inf = 0.0;
};

/// Passed to the optional training observer once per epoch. `delta` is the
/// update applied in this epoch (empty when the goal stopped training first).
struct EpochTrace {
    std::size_t epoch = 0;
    double loss = 0.0;
    const MlpGradient& grad;
    const MlpGradient& delta;
};

using TrainObserver = std::function<void(const EpochTrace&)>;

/// Weights and biases i.i.d. uniform on [-0.5, 0.5]; identical for the same
/// (layer_sizes, seed) on any platform.
inline MlpModel new_network(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2) {
        throw Error(ErrorCode::BadArchitecture, "network needs an input and an output layer");
    }
    if (std::find(layer_sizes.begin(), layer_sizes.end(), std::size_t{0}) != layer_sizes.end()) {
        throw Error(ErrorCode::BadArchitecture, "layer sizes must be >= 1");
    }
    MlpModel m;
    m.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        std::vector<double> w(layer_sizes[l + 1] * layer_sizes[l]);
        for (double& x : w) x = rng.uniform(-0.5, 0.5);
        std::vector<double> b(layer_sizes[l + 1]);
        for (double& x : b) x = rng.uniform(-0.5, 0.5);
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    m.input_scale.assign(layer_sizes.front(), InputRange{});
    return m;
}

inline MlpModel new_network(std::initializer_list<std::size_t> layer_sizes, std::uint64_t seed) {
    return new_network(std::span<const std::size_t>(layer_sizes.begin(), layer_sizes.size()), seed);
}

inline MlpGradient zero_like(const MlpModel& m) {
    MlpGradient g;
    for (std::size_t l = 0; l < m.layers(); ++l) {
        g.weights.emplace_back(m.weights[l].size(), 0.0);
        g.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    return g;
}

inline std::vector<double> scale_input(const MlpModel& m, std::span<const double> x) {
    if (x.size() != m.input_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "input has length " + std::to_string(x.size()) +
                                                      ", network expects " +
                                                      std::to_string(m.input_dim()));
    }
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [lo, hi] = m.input_scale[i];
        s[i] = 2.0 * (x[i] - lo) / (hi - lo) - 1.0;
    }
    return s;
}

namespace detail {

// Activations for a batch: acts[l] is B x layer_sizes[l], row-major.
// acts[0] holds the already-scaled inputs.
inline void forward_batch(const MlpModel& m, std::vector<std::vector<double>>& acts,
                          std::size_t batch) {
    acts.resize(m.layers() + 1);
    for (std::size_t l = 0; l < m.layers(); ++l) {
        const std::size_t in = m.layer_sizes[l];
        const std::size_t out = m.layer_sizes[l + 1];
        const auto& w = m.weights[l];
        const auto& b = m.biases[l];
        auto& next = acts[l + 1];
        next.resize(batch * out);
        for (std::size_t s = 0; s < batch; ++s) {
            const double* a = acts[l].data() + s * in;
            for (std::size_t o = 0; o < out; ++o) {
                const double* wr = w.data() + o * in;
                double z = b[o];
                for (std::size_t i = 0; i < in; ++i) z += wr[i] * a[i];
                next[s * out + o] = std::tanh(z);
            }
        }
    }
}

// E = 1/(2B) * sum ||out - target||^2 and its exact gradient.
inline double loss_and_gradient_batch(const MlpModel& m, std::vector<std::vector<double>>& acts,
                                      std::span<const double> targets, std::size_t batch,
                                      MlpGradient& grad) {
    forward_batch(m, acts, batch);
    const std::size_t depth = m.layers();
    const std::size_t out_dim = m.output_dim();
    const double inv_b = 1.0 / static_cast<double>(batch);

    double loss = 0.0;
    std::vector<double> delta(batch * out_dim);
    const auto& y = acts[depth];
    for (std::size_t k = 0; k < delta.size(); ++k) {
        const double e = y[k] - targets[k];
        loss += e * e;
        delta[k] = e * (1.0 - y[k] * y[k]) * inv_b;
    }
    loss *= 0.5 * inv_b;

    std::vector<double> prev;
    for (std::size_t l = depth; l-- > 0;) {
        const std::size_t in = m.layer_sizes[l];
        const std::size_t out = m.layer_sizes[l + 1];
        auto& gw = grad.weights[l];
        auto& gb = grad.biases[l];
        std::fill(gw.begin(), gw.end(), 0.0);
        std::fill(gb.begin(), gb.end(), 0.0);
        const auto& a = acts[l];
        for (std::size_t s = 0; s < batch; ++s) {
            const double* as = a.data() + s * in;
            for (std::size_t o = 0; o < out; ++o) {
                const double d = delta[s * out + o];
                gb[o] += d;
                double* gr = gw.data() + o * in;
                for (std::size_t i = 0; i < in; ++i) gr[i] += d * as[i];
            }
        }
        if (l == 0) break;
        prev.assign(batch * in, 0.0);
        const auto& w = m.weights[l];
        for (std::size_t s = 0; s < batch; ++s) {
            double* ps = prev.data() + s * in;
            for (std::size_t o = 0; o < out; ++o) {
                const double d = delta[s * out + o];
                const double* wr = w.data() + o * in;
                for (std::size_t i = 0; i < in; ++i) ps[i] += d * wr[i];
            }
            const double* as = a.data() + s * in;
            for (std::size_t i = 0; i < in; ++i) ps[i] *= 1.0 - as[i] * as[i];
        }
        delta.swap(prev);
    }
    return loss;
}

struct PackedBatch {
    std::vector<double> inputs;   // scaled, B x input_dim
    std::vector<double> targets;  // B x output_dim
    std::size_t size = 0;
};

inline PackedBatch pack(const MlpModel& m, std::span<const TrainingPair> batch) {
    if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "batch must be nonempty");
    PackedBatch p;
    p.size = batch.size();
    for (const auto& pair : batch) {
        if (pair.target.size() != m.output_dim()) {
            throw Error(ErrorCode::DimensionMismatch, "target length " +
                                                          std::to_string(pair.target.size()) +
                                                          " != output dim " +
                                                          std::to_string(m.output_dim()));
        }
        const auto s = scale_input(m, pair.input);
        p.inputs.insert(p.inputs.end(), s.begin(), s.end());
        p.targets.insert(p.targets.end(), pair.target.begin(), pair.target.end());
    }
    return p;
}

}  // namespace detail

/// Network output for one input; components lie in (-1, 1).
inline std::vector<double> forward(const MlpModel& m, std::span<const double> x) {
    std::vector<std::vector<double>> acts(1);
    acts[0] = scale_input(m, x);
    detail::forward_batch(m, acts, 1);
    return acts.back();
}

/// Mean squared error objective E = 1/(2B) * sum ||out - target||^2.
inline double loss(const MlpModel& m, std::span<const TrainingPair> batch) {
    const auto p = detail::pack(m, batch);
    std::vector<std::vector<double>> acts(1);
    acts[0] = p.inputs;
    MlpGradient g = zero_like(m);
    return detail::loss_and_gradient_batch(m, acts, p.targets, p.size, g);
}

/// Reverse-mode gradient of `loss` with respect to every weight and bias.
inline MlpGradient gradient(const MlpModel& m, std::span<const TrainingPair> batch) {
    const auto p = detail::pack(m, batch);
    std::vector<std::vector<double>> acts(1);
    acts[0] = p.inputs;
    MlpGradient g = zero_like(m);
    detail::loss_and_gradient_batch(m, acts, p.targets, p.size, g);
    return g;
}

/// Mean over samples and output units of the squared error.
inline double mean_squared_error(const MlpModel& m, std::span<const TrainingPair> data) {
    return 2.0 * loss(m, data) / static_cast<double>(m.output_dim());
}

/// Sets input_scale from the per-feature min/max of `inputs`. Constant
/// features get (lo, lo + 1).
inline void fit_input_scale(MlpModel& m, std::span<const TrainingPair> data) {
    for (std::size_t i = 0; i < m.input_dim(); ++i) {
        double lo = data.front().input[i];
        double hi = lo;
        for (const auto& p : data) {
            lo = std::min(lo, p.input[i]);
            hi = std::max(hi, p.input[i]);
        }
        m.input_scale[i] = lo < hi ? InputRange{lo, hi} : InputRange{lo, lo + 1.0};
    }
}

/// Full-batch gradient descent with classic momentum:
///   dw(t) = mc * dw(t-1) - lr * grad E(w(t)),  w(t+1) = w(t) + dw(t).
/// Stops after cfg.epochs or once ||grad E||_inf < cfg.grad_goal.
inline std::pair<MlpModel, TrainLog> train(MlpModel model, std::span<const TrainingPair> data,
                                           const TrainConfig& cfg,
                                           const TrainObserver& observer = {}) {
    cfg.validate();
    if (data.empty()) throw Error(ErrorCode::InvalidArgument, "training data is empty");
    for (const auto& p : data) {
        if (p.input.size() != model.input_dim() || p.target.size() != model.output_dim()) {
            throw Error(ErrorCode::DimensionMismatch, "training pair does not match network shape");
        }
        for (double t : p.target) {
            if (!(t >= -1.0 && t <= 1.0)) {
                throw Error(ErrorCode::BadTargets, "target component outside [-1,1]");
            }
        }
    }
    fit_input_scale(model, data);
    const auto packed = detail::pack(model, data);

    std::vector<std::vector<double>> acts(1);
    acts[0] = packed.inputs;
    MlpGradient grad = zero_like(model);
    MlpGradient delta = zero_like(model);
    const MlpGradient no_delta;

    TrainLog log;
    log.loss.reserve(std::min<std::size_t>(cfg.epochs, 1u << 20));
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double e = detail::loss_and_gradient_batch(model, acts, packed.targets, packed.size, grad);
        log.loss.push_back(e);
        log.epochs_run = epoch;
        log.final_grad_inf = grad.inf_norm();
        if (log.final_grad_inf < cfg.grad_goal) {
            log.reason = StopReason::GoalMet;
            if (observer) observer(EpochTrace{epoch, e, grad, no_delta});
            return {std::move(model), std::move(log)};
        }
        for (std::size_t l = 0; l < model.layers(); ++l) {
            auto& w = model.weights[l];
            auto& dw = delta.weights[l];
            const auto& gw = grad.weights[l];
            for (std::size_t i = 0; i < w.size(); ++i) {
                dw[i] = cfg.mc * dw[i] - cfg.lr * gw[i];
                w[i] += dw[i];
            }
            auto& b = model.biases[l];
            auto& db = delta.biases[l];
            const auto& gb = grad.biases[l];
            for (std::size_t i = 0; i < b.size(); ++i) {
                db[i] = cfg.mc * db[i] - cfg.lr * gb[i];
                b[i] += db[i];
            }
        }
        if (observer) observer(EpochTrace{epoch, e, grad, delta});
    }
    log.reason = StopReason::EpochLimit;
    return {std::move(model), std::move(log)};
}

/// Index of the largest output; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> y) {
    if (y.empty()) throw Error(ErrorCode::InvalidArgument, "argmax of empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i] > y[best]) best = i;
    }
    return best;
}

inline std::size_t classify(const MlpModel& m, std::span<const double> x) {
    return argmax(forward(m, x));
}

// Container: "PFMLP1", layer count, layer sizes (u64), input_scale (lo, hi)
// pairs, then per layer the row-major weights followed by the biases (f64).

inline std::string encode_mlp(const MlpModel& m) {
    std::string out = "PFMLP1";
    binio::put_u64(out, m.layer_sizes.size());
    for (auto s : m.layer_sizes) binio::put_u64(out, s);
    for (const auto& r : m.input_scale) {
        binio::put_f64(out, r.lo);
        binio::put_f64(out, r.hi);
    }
    for (std::size_t l = 0; l < m.layers(); ++l) {
        for (double w : m.weights[l]) binio::put_f64(out, w);
        for (double b : m.biases[l]) binio::put_f64(out, b);
    }
    return out;
}

inline MlpModel decode_mlp(binio::Reader& in) {
    in.expect_magic("PFMLP1");
    MlpModel m;
    const std::size_t count = in.count(8);
    if (count < 2) throw Error(ErrorCode::BadModelFile, "network needs at least two layers");
    std::size_t params = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const auto s = static_cast<std::size_t>(in.u64());
        if (s == 0 || s > in.remaining()) throw Error(ErrorCode::BadModelFile, "bad layer size");
        if (!m.layer_sizes.empty()) params += s * (m.layer_sizes.back() + 1);
        m.layer_sizes.push_back(s);
    }
    if (in.remaining() / 8 < params + 2 * m.layer_sizes.front()) {
        throw Error(ErrorCode::BadModelFile, "network container truncated");
    }
    m.input_scale.resize(m.layer_sizes.front());
    for (auto& r : m.input_scale) {
        r.lo = in.f64();
        r.hi = in.f64();
    }
    for (std::size_t l = 0; l + 1 < count; ++l) {
        std::vector<double> w(m.layer_sizes[l + 1] * m.layer_sizes[l]);
        for (double& x : w) x = in.f64();
        std::vector<double> b(m.layer_sizes[l + 1]);
        for (double& x : b) x = in.f64();
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

inline MlpModel decode_mlp(std::string_view bytes) {
    binio::Reader in(bytes);
    MlpModel m = decode_mlp(in);
    if (!in.done()) throw Error(ErrorCode::BadModelFile, "trailing bytes after network");
    return m;
}

}  // namespace polarfuse

#endif
