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

#include "dda/network.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dda/errors.hpp"

namespace dda::net {

std::size_t Topology::feature_dim() const {
    return extractor_hidden.empty() ? input_dim : extractor_hidden.back();
}

void Topology::validate() const {
    if (input_dim == 0) throw ValidationError("topology: input_dim must be > 0");
    if (n_classes < 2) throw ValidationError("topology: n_classes must be >= 2");
    for (std::size_t w : extractor_hidden) {
        if (w == 0) throw ValidationError("topology: extractor hidden width must be > 0");
    }
    for (std::size_t w : classifier_hidden) {
        if (w == 0) throw ValidationError("topology: classifier hidden width must be > 0");
    }
    for (std::size_t w : discriminator_hidden) {
        if (w == 0) throw ValidationError("topology: discriminator hidden width must be > 0");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw ValidationError("topology: dropout_rate must be in [0, 1)");
    }
}

namespace {

Stack make_stack(std::size_t in_dim, const std::vector<std::size_t>& hidden, std::size_t out_dim,
                 Rng& rng) {
    Stack stack;
    std::size_t prev = in_dim;
    for (std::size_t w : hidden) {
        stack.layers.push_back(make_dense(prev, w, rng));
        prev = w;
    }
    if (out_dim > 0) stack.layers.push_back(make_dense(prev, out_dim, rng));
    return stack;
}

}  // namespace

Network make_network(const Topology& topology, Rng& rng) {
    topology.validate();
    Network network;
    network.topology = topology;
    // The extractor has no separate output layer; its last hidden layer is
    // the feature space.
    network.extractor = make_stack(topology.input_dim, topology.extractor_hidden, 0, rng);
    network.classifier =
        make_stack(topology.feature_dim(), topology.classifier_hidden, topology.n_classes, rng);
    network.discriminator =
        make_stack(topology.feature_dim(), topology.discriminator_hidden, 1, rng);
    return network;
}

Matrix extract_features(const Matrix& x, const Stack& extractor, StackCache* cache) {
    if (cache) {
        cache->dense_inputs.clear();
        cache->pre_activations.clear();
    }
    Matrix h = x;
    for (const DenseLayer& layer : extractor.layers) {
        if (cache) cache->dense_inputs.push_back(h);
        Matrix z = dense_forward(h, layer);
        if (cache) cache->pre_activations.push_back(z);
        h = relu(z);
    }
    return h;
}

Matrix classify(const Matrix& features, const Stack& classifier, StackCache* cache) {
    if (classifier.layers.empty()) throw StateError("classify: classifier has no layers");
    if (cache) {
        cache->dense_inputs.clear();
        cache->pre_activations.clear();
    }
    Matrix h = features;
    for (std::size_t i = 0; i < classifier.layers.size(); ++i) {
        if (cache) cache->dense_inputs.push_back(h);
        Matrix z = dense_forward(h, classifier.layers[i]);
        if (i + 1 < classifier.layers.size()) {
            if (cache) cache->pre_activations.push_back(z);
            h = relu(z);
        } else {
            h = std::move(z);
        }
    }
    return h;
}

namespace {

StackBackward stack_backward(const Matrix& grad_out, const Stack& stack, const StackCache& cache,
                             bool final_relu) {
    StackBackward out;
    out.grads.grad_weights.resize(stack.layers.size());
    out.grads.grad_bias.resize(stack.layers.size());
    Matrix g = grad_out;
    for (std::size_t i = stack.layers.size(); i-- > 0;) {
        const bool activated = final_relu || i + 1 < stack.layers.size();
        if (activated) g = relu_backward(g, cache.pre_activations[i]);
        DenseGrads dg = dense_backward(g, stack.layers[i], cache.dense_inputs[i]);
        out.grads.grad_weights[i] = std::move(dg.grad_weights);
        out.grads.grad_bias[i] = std::move(dg.grad_bias);
        g = std::move(dg.grad_input);
    }
    out.grad_input = std::move(g);
    return out;
}

}  // namespace

StackBackward extractor_backward(const Matrix& grad_features, const Stack& extractor,
                                 const StackCache& cache) {
    if (cache.dense_inputs.size() != extractor.layers.size() ||
        cache.pre_activations.size() != extractor.layers.size() ||
        (!cache.dense_inputs.empty() &&
         grad_features.rows != cache.dense_inputs.front().rows)) {
        throw StateError("extractor_backward: cache does not match forward pass");
    }
    return stack_backward(grad_features, extractor, cache, true);
}

StackBackward classifier_backward(const Matrix& grad_logits, const Stack& classifier,
                                  const StackCache& cache) {
    if (classifier.layers.empty()) throw StateError("classifier_backward: no layers");
    if (cache.dense_inputs.size() != classifier.layers.size() ||
        cache.pre_activations.size() + 1 != classifier.layers.size() ||
        grad_logits.rows != cache.dense_inputs.front().rows) {
        throw StateError("classifier_backward: cache does not match forward pass");
    }
    return stack_backward(grad_logits, classifier, cache, false);
}

std::vector<DropoutMask> sample_discriminator_masks(const Network& network, Rng& rng) {
    std::vector<DropoutMask> masks;
    masks.reserve(network.topology.discriminator_hidden.size());
    for (std::size_t w : network.topology.discriminator_hidden) {
        masks.push_back(sample_dropout_mask(w, network.topology.dropout_rate, rng));
    }
    return masks;
}

Matrix discriminator_forward(const Matrix& features, const Stack& discriminator,
                             const std::vector<DropoutMask>& masks, DiscPassCache* cache) {
    if (discriminator.layers.empty()) throw StateError("discriminator_forward: no layers");
    if (masks.size() + 1 != discriminator.layers.size()) {
        throw DimensionError("discriminator_forward: expected " +
                             std::to_string(discriminator.layers.size() - 1) + " masks, got " +
                             std::to_string(masks.size()));
    }
    if (cache) {
        cache->dense_inputs.clear();
        cache->pre_activations.clear();
        cache->masks = masks;
    }
    Matrix h = features;
    for (std::size_t i = 0; i < discriminator.layers.size(); ++i) {
        if (cache) cache->dense_inputs.push_back(h);
        Matrix z = dense_forward(h, discriminator.layers[i]);
        if (i + 1 < discriminator.layers.size()) {
            if (cache) cache->pre_activations.push_back(z);
            h = apply_dropout(relu(z), masks[i]);
        } else {
            h = std::move(z);
        }
    }
    return h;
}

StackBackward discriminator_backward(const Matrix& grad_logits, const Stack& discriminator,
                                     const DiscPassCache& cache) {
    if (cache.dense_inputs.size() != discriminator.layers.size() ||
        (!cache.dense_inputs.empty() &&
         grad_logits.rows != cache.dense_inputs.front().rows)) {
        throw StateError("discriminator_backward: cache does not match forward pass");
    }
    StackBackward out;
    out.grads.grad_weights.resize(discriminator.layers.size());
    out.grads.grad_bias.resize(discriminator.layers.size());
    Matrix g = grad_logits;
    for (std::size_t i = discriminator.layers.size(); i-- > 0;) {
        if (i + 1 < discriminator.layers.size()) {
            g = dropout_backward(g, cache.masks[i]);
            g = relu_backward(g, cache.pre_activations[i]);
        }
        DenseGrads dg = dense_backward(g, discriminator.layers[i], cache.dense_inputs[i]);
        out.grads.grad_weights[i] = std::move(dg.grad_weights);
        out.grads.grad_bias[i] = std::move(dg.grad_bias);
        g = std::move(dg.grad_input);
    }
    out.grad_input = std::move(g);
    return out;
}

McOutput discriminate_mc(const Matrix& features, const Network& network, std::size_t k, Rng& rng) {
    if (k == 0) throw ValidationError("discriminate_mc: ensemble size must be >= 1");
    McOutput out;
    out.logits.reserve(k);
    out.caches.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::vector<DropoutMask> masks = sample_discriminator_masks(network, rng);
        out.logits.push_back(
            discriminator_forward(features, network.discriminator, masks, &out.caches[j]));
    }
    return out;
}

double mc_output_variance(const std::vector<Matrix>& logits) {
    if (logits.size() < 2) {
        throw ValidationError("mc_output_variance: need at least 2 ensemble members");
    }
    const std::size_t k = logits.size();
    const std::size_t n = logits[0].rows;
    if (n == 0) throw ValidationError("mc_output_variance: empty logits");
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double mean = 0.0;
        for (const Matrix& m : logits) mean += m(r, 0);
        mean /= static_cast<double>(k);
        bool all_equal = true;
        double ss = 0.0;
        for (const Matrix& m : logits) {
            if (m(r, 0) != logits[0](r, 0)) all_equal = false;
            const double d = m(r, 0) - mean;
            ss += d * d;
        }
        // Identical members mean exactly zero disagreement, with no
        // floating-point residue from the mean subtraction.
        total += all_equal ? 0.0 : ss / static_cast<double>(k - 1);
    }
    return total / static_cast<double>(n);
}

std::vector<int> argmax_rows(const Matrix& logits) {
    if (logits.cols == 0) throw ValidationError("argmax_rows: no columns");
    std::vector<int> out(logits.rows);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < logits.cols; ++c) {
            if (logits(r, c) > logits(r, best)) best = c;
        }
        out[r] = static_cast<int>(best);
    }
    return out;
}

void accumulate(StackGrads& acc, const StackBackward& bwd) {
    if (acc.grad_weights.size() != bwd.grads.grad_weights.size()) {
        throw DimensionError("accumulate: layer count mismatch");
    }
    for (std::size_t i = 0; i < acc.grad_weights.size(); ++i) {
        axpy(acc.grad_weights[i], bwd.grads.grad_weights[i], 1.0);
        for (std::size_t j = 0; j < acc.grad_bias[i].size(); ++j) {
            acc.grad_bias[i][j] += bwd.grads.grad_bias[i][j];
        }
    }
}

void scale(StackGrads& grads, double factor) {
    for (Matrix& m : grads.grad_weights) scale_inplace(m, factor);
    for (std::vector<double>& b : grads.grad_bias) {
        for (double& v : b) v *= factor;
    }
}

StackGrads zero_grads_like(const Stack& stack) {
    StackGrads grads;
    for (const DenseLayer& layer : stack.layers) {
        grads.grad_weights.emplace_back(layer.weights.rows, layer.weights.cols);
        grads.grad_bias.emplace_back(layer.bias.size(), 0.0);
    }
    return grads;
}

}  // namespace dda::net
