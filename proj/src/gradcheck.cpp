/*
 * Copyright 2026 the dda authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dda/gradcheck.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "dda/errors.hpp"
#include "dda/kernels.hpp"
#include "dda/matrix.hpp"
#include "dda/rng.hpp"

namespace dda {

double finite_difference_check(const std::function<double()>& loss_fn,
                               const std::vector<ParamView>& params, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("finite_difference_check: epsilon must be > 0");
    }
    // Keeps dead-unit zero gradients from producing 0/0.
    constexpr double kDenomFloor = 1e-2;
    double worst = 0.0;
    for (const ParamView& p : params) {
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            const double saved = p.values[i];
            p.values[i] = saved + epsilon;
            const double up = loss_fn();
            p.values[i] = saved - epsilon;
            const double down = loss_fn();
            p.values[i] = saved;
            const double numeric = (up - down) / (2.0 * epsilon);
            const double analytic = p.analytic_grad[i];
            const double rel = std::abs(numeric - analytic) /
                               std::max(std::abs(numeric) + std::abs(analytic), kDenomFloor);
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

namespace {

enum class LossKind { squared, softmax_ce, sigmoid_bce };

// A throwaway dense/ReLU stack with optional frozen dropout masks on hidden
// layers; used only to exercise the kernels against finite differences.
struct CheckNet {
    std::vector<DenseLayer> layers;
    std::vector<std::optional<DropoutMask>> hidden_masks;  // per hidden layer
    LossKind loss_kind = LossKind::squared;
    Matrix input;
    std::vector<int> int_targets;  // class labels or binary domain targets
    Matrix real_targets;           // squared loss only

    // Forward state recorded by the most recent forward.
    std::vector<Matrix> layer_inputs;
    std::vector<Matrix> pre_acts;

    double forward_loss() {
        Matrix h = input;
        layer_inputs.clear();
        pre_acts.clear();
        for (std::size_t i = 0; i < layers.size(); ++i) {
            layer_inputs.push_back(h);
            Matrix z = dense_forward(h, layers[i]);
            if (i + 1 < layers.size()) {
                pre_acts.push_back(z);
                Matrix r = relu(z);
                h = hidden_masks[i] ? apply_dropout(r, *hidden_masks[i]) : std::move(r);
            } else {
                h = std::move(z);
            }
        }
        switch (loss_kind) {
            case LossKind::squared: {
                double acc = 0.0;
                for (std::size_t i = 0; i < h.data.size(); ++i) {
                    const double d = h.data[i] - real_targets.data[i];
                    acc += 0.5 * d * d;
                }
                last_output_ = std::move(h);
                return acc / static_cast<double>(input.rows);
            }
            case LossKind::softmax_ce: {
                auto res = softmax_cross_entropy(h, int_targets);
                last_loss_grad_ = std::move(res.grad_logits);
                last_output_ = std::move(h);
                return res.loss;
            }
            case LossKind::sigmoid_bce: {
                auto res = sigmoid_bce(h, int_targets);
                last_loss_grad_ = std::move(res.grad_logits);
                last_output_ = std::move(h);
                return res.loss;
            }
        }
        return 0.0;
    }

    // Call directly after forward_loss(); fills grad_weights/grad_bias.
    void backward() {
        Matrix g;
        if (loss_kind == LossKind::squared) {
            g = last_output_;
            for (std::size_t i = 0; i < g.data.size(); ++i) {
                g.data[i] = (g.data[i] - real_targets.data[i]) / static_cast<double>(input.rows);
            }
        } else {
            g = last_loss_grad_;
        }
        grad_weights.assign(layers.size(), Matrix());
        grad_bias.assign(layers.size(), {});
        for (std::size_t i = layers.size(); i-- > 0;) {
            DenseGrads dg = dense_backward(g, layers[i], layer_inputs[i]);
            grad_weights[i] = std::move(dg.grad_weights);
            grad_bias[i] = std::move(dg.grad_bias);
            g = std::move(dg.grad_input);
            if (i > 0) {
                if (hidden_masks[i - 1]) g = dropout_backward(g, *hidden_masks[i - 1]);
                g = relu_backward(g, pre_acts[i - 1]);
            }
        }
    }

    std::vector<Matrix> grad_weights;
    std::vector<std::vector<double>> grad_bias;

private:
    Matrix last_output_;
    Matrix last_loss_grad_;
};

}  // namespace

double gradient_check_suite(std::size_t n_configs, std::uint64_t seed, double epsilon) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
        CheckNet net;
        const std::size_t depth = 1 + rng.index(3);
        const std::size_t batch = 1 + rng.index(4);
        std::size_t in_dim = 1 + rng.index(4);
        net.loss_kind = static_cast<LossKind>(cfg % 3);

        std::vector<std::size_t> dims{in_dim};
        for (std::size_t i = 0; i + 1 < depth; ++i) dims.push_back(1 + rng.index(5));
        const std::size_t out_dim = net.loss_kind == LossKind::sigmoid_bce ? 1
                                    : net.loss_kind == LossKind::softmax_ce ? 2 + rng.index(3)
                                                                            : 1 + rng.index(3);
        dims.push_back(out_dim);

        for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
            net.layers.push_back(make_dense(dims[i], dims[i + 1], rng));
            // Random biases keep every pre-activation off the ReLU kink, where
            // the loss is not differentiable and central differences lie.
            for (double& b : net.layers.back().bias) b = rng.uniform(-0.5, 0.5);
            if (i + 2 < dims.size()) {
                // Roughly half the hidden layers get a frozen dropout mask.
                if (rng.uniform() < 0.5) {
                    net.hidden_masks.emplace_back(sample_dropout_mask(dims[i + 1], 0.3, rng));
                } else {
                    net.hidden_masks.emplace_back(std::nullopt);
                }
            }
        }

        net.input = Matrix(batch, in_dim);
        for (double& v : net.input.data) v = rng.uniform(-2.0, 2.0);
        if (net.loss_kind == LossKind::squared) {
            net.real_targets = Matrix(batch, out_dim);
            for (double& v : net.real_targets.data) v = rng.uniform(-1.0, 1.0);
        } else if (net.loss_kind == LossKind::softmax_ce) {
            for (std::size_t i = 0; i < batch; ++i) {
                net.int_targets.push_back(static_cast<int>(rng.index(out_dim)));
            }
        } else {
            for (std::size_t i = 0; i < batch; ++i) {
                net.int_targets.push_back(static_cast<int>(rng.index(2)));
            }
        }

        net.forward_loss();
        net.backward();

        std::vector<ParamView> views;
        for (std::size_t i = 0; i < net.layers.size(); ++i) {
            views.push_back({std::span<double>(net.layers[i].weights.data),
                             std::span<const double>(net.grad_weights[i].data)});
            views.push_back({std::span<double>(net.layers[i].bias),
                             std::span<const double>(net.grad_bias[i])});
        }
        const double err = finite_difference_check([&net] { return net.forward_loss(); }, views,
                                                   epsilon);
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace dda
