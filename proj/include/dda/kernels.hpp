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

// Differentiable building blocks: dense layers, ReLU, losses, dropout and
// the gradient reversal map. Forward passes are pure; backward passes take
// whatever forward state they need as explicit arguments, so layers can be
// shared read-only across threads.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dda/matrix.hpp"
#include "dda/rng.hpp"

namespace dda {

struct DenseLayer {
    Matrix weights;  // out_dim x in_dim
    std::vector<double> bias;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

// Glorot-uniform weights, zero bias.
DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Rng& rng);

// y = x * W^T + b for a batch of row vectors.
Matrix dense_forward(const Matrix& x, const DenseLayer& layer);

struct DenseGrads {
    Matrix grad_input;
    Matrix grad_weights;
    std::vector<double> grad_bias;
};

// input is the x that produced grad_out's forward pass.
DenseGrads dense_backward(const Matrix& grad_out, const DenseLayer& layer, const Matrix& input);

Matrix relu(const Matrix& x);

// cached_input holds the pre-activation values from the forward pass; the
// subgradient at exactly zero is zero.
Matrix relu_backward(const Matrix& grad_out, const Matrix& cached_input);

struct SoftmaxCeResult {
    double loss;         // mean over rows
    Matrix grad_logits;  // d(loss)/d(logits), already divided by the row count
};

SoftmaxCeResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels);

struct SigmoidBceResult {
    double loss;         // mean over rows
    Matrix grad_logits;  // n x 1
};

// logits must be a single column; targets are 0/1.
SigmoidBceResult sigmoid_bce(const Matrix& logits, const std::vector<int>& targets);

double sigmoid(double z);

// One Bernoulli keep/drop decision per unit, shared across batch rows.
struct DropoutMask {
    std::vector<std::uint8_t> keep;
    double rate = 0.0;
};

// Always consumes exactly n_units draws from rng, whatever the rate.
DropoutMask sample_dropout_mask(std::size_t n_units, double rate, Rng& rng);

// Inverted scaling: kept units are multiplied by 1/(1 - rate), so the
// expected activation matches the deterministic net and rate 0 is the
// exact identity.
Matrix apply_dropout(const Matrix& x, const DropoutMask& mask);
Matrix dropout_backward(const Matrix& grad_out, const DropoutMask& mask);

// Identity forward is implicit; this is the backward map grad -> -lambda*grad.
Matrix grad_reverse(const Matrix& grad, double lambda);

}  // namespace dda
