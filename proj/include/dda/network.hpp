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

// Three-part adaptation network: a shared feature extractor, a softmax
// classifier head, and a dropout-randomized domain discriminator head.
//
// The discriminator is evaluated as a Monte Carlo ensemble: each of the K
// stochastic passes draws fresh Bernoulli dropout masks per hidden layer,
// shared across all rows of the batch. Backward passes replay the stored
// masks so gradients match the sampled forward exactly.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dda/kernels.hpp"
#include "dda/matrix.hpp"
#include "dda/rng.hpp"

namespace dda::net {

// Layer widths for each sub-network. Hidden vectors may be empty; an empty
// extractor_hidden makes the extractor the identity map.
struct Topology {
    std::size_t input_dim = 0;
    std::vector<std::size_t> extractor_hidden;
    std::vector<std::size_t> classifier_hidden;
    std::size_t n_classes = 0;
    std::vector<std::size_t> discriminator_hidden;
    double dropout_rate = 0.5;

    std::size_t feature_dim() const;
    void validate() const;
};

// A stack of dense layers with ReLU between them. Whether the final layer is
// followed by ReLU depends on the role (extractor: yes, heads: no).
struct Stack {
    std::vector<DenseLayer> layers;
};

struct Network {
    Topology topology;
    Stack extractor;       // every layer ReLU-activated
    Stack classifier;      // ReLU between hidden layers, raw logits out
    Stack discriminator;   // ReLU+dropout per hidden layer, one raw logit out
};

// Initializes all three sub-networks, consuming rng in a fixed order
// (extractor, classifier, discriminator).
Network make_network(const Topology& topology, Rng& rng);

// Forward state for one pass through a plain stack. Stacks themselves are
// never mutated by forward or backward, so frozen networks are safe to
// evaluate concurrently.
struct StackCache {
    std::vector<Matrix> dense_inputs;     // one per layer
    std::vector<Matrix> pre_activations;  // one per ReLU-activated layer
};

// cache == nullptr runs inference only.
Matrix extract_features(const Matrix& x, const Stack& extractor, StackCache* cache);
Matrix classify(const Matrix& features, const Stack& classifier, StackCache* cache);

struct StackGrads {
    std::vector<Matrix> grad_weights;
    std::vector<std::vector<double>> grad_bias;
};

struct StackBackward {
    Matrix grad_input;
    StackGrads grads;
};

StackBackward extractor_backward(const Matrix& grad_features, const Stack& extractor,
                                 const StackCache& cache);
StackBackward classifier_backward(const Matrix& grad_logits, const Stack& classifier,
                                  const StackCache& cache);

// One discriminator pass carries its masks along with the forward state, so
// the K passes of an ensemble stay independent.
struct DiscPassCache {
    std::vector<Matrix> dense_inputs;     // one per layer
    std::vector<Matrix> pre_activations;  // one per hidden layer
    std::vector<DropoutMask> masks;       // one per hidden layer
};

// Fresh masks for one stochastic pass, one per hidden layer.
std::vector<DropoutMask> sample_discriminator_masks(const Network& network, Rng& rng);

// Single pass with the given masks; logits come back as an n x 1 column.
Matrix discriminator_forward(const Matrix& features, const Stack& discriminator,
                             const std::vector<DropoutMask>& masks, DiscPassCache* cache);

StackBackward discriminator_backward(const Matrix& grad_logits, const Stack& discriminator,
                                     const DiscPassCache& cache);

struct McOutput {
    std::vector<Matrix> logits;        // K columns of n x 1 logits
    std::vector<DiscPassCache> caches;
};

// K stochastic passes with fresh masks each. K == 0 is invalid.
McOutput discriminate_mc(const Matrix& features, const Network& network, std::size_t k, Rng& rng);

// Deterministic ensemble disagreement: per-row unbiased variance of the K
// logits, averaged over rows. Needs K >= 2.
double mc_output_variance(const std::vector<Matrix>& logits);

// Row-wise argmax class prediction from logits; first index wins ties.
std::vector<int> argmax_rows(const Matrix& logits);

void accumulate(StackGrads& acc, const StackBackward& bwd);
void scale(StackGrads& grads, double factor);
StackGrads zero_grads_like(const Stack& stack);

}  // namespace dda::net
