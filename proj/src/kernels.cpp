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

#include "dda/kernels.hpp"

#include <cmath>
#include <string>

#include "dda/errors.hpp"

namespace dda {

DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
    if (in_dim == 0 || out_dim == 0) {
        throw ValidationError("make_dense: dimensions must be > 0");
    }
    DenseLayer layer;
    layer.weights = Matrix(out_dim, in_dim);
    const double bound = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    layer.bias.assign(out_dim, 0.0);
    return layer;
}

Matrix dense_forward(const Matrix& x, const DenseLayer& layer) {
    if (x.cols != layer.in_dim()) {
        throw DimensionError("dense_forward: input has " + std::to_string(x.cols) +
                             " columns, layer expects " + std::to_string(layer.in_dim()));
    }
    Matrix y = matmul_nt(x, layer.weights);
    for (std::size_t r = 0; r < y.rows; ++r) {
        for (std::size_t c = 0; c < y.cols; ++c) y(r, c) += layer.bias[c];
    }
    return y;
}

DenseGrads dense_backward(const Matrix& grad_out, const DenseLayer& layer, const Matrix& input) {
    if (grad_out.cols != layer.out_dim()) {
        throw DimensionError("dense_backward: gradient has " + std::to_string(grad_out.cols) +
                             " columns, layer outputs " + std::to_string(layer.out_dim()));
    }
    if (input.cols != layer.in_dim() || input.rows != grad_out.rows) {
        throw DimensionError("dense_backward: input " + input.shape_str() +
                             " does not match gradient " + grad_out.shape_str());
    }
    DenseGrads grads;
    grads.grad_input = matmul(grad_out, layer.weights);
    grads.grad_weights = matmul_tn(grad_out, input);
    grads.grad_bias = column_sum(grad_out);
    return grads;
}

Matrix relu(const Matrix& x) {
    Matrix y = x;
    for (double& v : y.data) {
        if (v < 0.0) v = 0.0;
    }
    return y;
}

Matrix relu_backward(const Matrix& grad_out, const Matrix& cached_input) {
    if (!grad_out.same_shape(cached_input)) {
        throw DimensionError("relu_backward: gradient " + grad_out.shape_str() +
                             " vs cached input " + cached_input.shape_str());
    }
    Matrix g = grad_out;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (cached_input.data[i] <= 0.0) g.data[i] = 0.0;
    }
    return g;
}

SoftmaxCeResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    if (logits.rows == 0) throw ValidationError("softmax_cross_entropy: empty batch");
    if (labels.size() != logits.rows) {
        throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(logits.rows) + " rows");
    }
    const double inv_n = 1.0 / static_cast<double>(logits.rows);
    SoftmaxCeResult result;
    result.loss = 0.0;
    result.grad_logits = Matrix(logits.rows, logits.cols);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        const int label = labels[r];
        if (label < 0 || static_cast<std::size_t>(label) >= logits.cols) {
            throw ValidationError("softmax_cross_entropy: label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(logits.cols) + ")");
        }
        double row_max = logits(r, 0);
        for (std::size_t c = 1; c < logits.cols; ++c) row_max = std::max(row_max, logits(r, c));
        double denom = 0.0;
        for (std::size_t c = 0; c < logits.cols; ++c) {
            denom += std::exp(logits(r, c) - row_max);
        }
        const double log_denom = std::log(denom);
        result.loss += (log_denom - (logits(r, static_cast<std::size_t>(label)) - row_max)) * inv_n;
        for (std::size_t c = 0; c < logits.cols; ++c) {
            const double p = std::exp(logits(r, c) - row_max) / denom;
            const double indicator = static_cast<std::size_t>(label) == c ? 1.0 : 0.0;
            result.grad_logits(r, c) = (p - indicator) * inv_n;
        }
    }
    ensure_finite(result.loss, "softmax_cross_entropy loss");
    return result;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

SigmoidBceResult sigmoid_bce(const Matrix& logits, const std::vector<int>& targets) {
    if (logits.rows == 0) throw ValidationError("sigmoid_bce: empty batch");
    if (logits.cols != 1) {
        throw DimensionError("sigmoid_bce: logits must be a single column, got " +
                             logits.shape_str());
    }
    if (targets.size() != logits.rows) {
        throw DimensionError("sigmoid_bce: " + std::to_string(targets.size()) +
                             " targets for " + std::to_string(logits.rows) + " rows");
    }
    const double inv_n = 1.0 / static_cast<double>(logits.rows);
    SigmoidBceResult result;
    result.loss = 0.0;
    result.grad_logits = Matrix(logits.rows, 1);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        if (targets[r] != 0 && targets[r] != 1) {
            throw ValidationError("sigmoid_bce: target must be 0 or 1, got " +
                                  std::to_string(targets[r]));
        }
        const double z = logits(r, 0);
        const double y = static_cast<double>(targets[r]);
        // max(z,0) - z*y + log(1 + exp(-|z|)) is the overflow-safe BCE.
        result.loss += (std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)))) * inv_n;
        result.grad_logits(r, 0) = (sigmoid(z) - y) * inv_n;
    }
    ensure_finite(result.loss, "sigmoid_bce loss");
    return result;
}

DropoutMask sample_dropout_mask(std::size_t n_units, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw ValidationError("sample_dropout_mask: rate must be in [0, 1)");
    }
    DropoutMask mask;
    mask.rate = rate;
    mask.keep.resize(n_units);
    // Rate 0 still consumes n_units draws, keeping rng streams aligned
    // across configurations that differ only in dropout.
    for (std::size_t i = 0; i < n_units; ++i) {
        mask.keep[i] = rng.uniform() >= rate ? 1 : 0;
    }
    return mask;
}

Matrix apply_dropout(const Matrix& x, const DropoutMask& mask) {
    if (mask.keep.size() != x.cols) {
        throw DimensionError("apply_dropout: mask covers " + std::to_string(mask.keep.size()) +
                             " units, input has " + std::to_string(x.cols) + " columns");
    }
    const double scale = 1.0 / (1.0 - mask.rate);
    Matrix y = x;
    for (std::size_t r = 0; r < y.rows; ++r) {
        for (std::size_t c = 0; c < y.cols; ++c) {
            y(r, c) = mask.keep[c] ? y(r, c) * scale : 0.0;
        }
    }
    return y;
}

Matrix dropout_backward(const Matrix& grad_out, const DropoutMask& mask) {
    return apply_dropout(grad_out, mask);
}

Matrix grad_reverse(const Matrix& grad, double lambda) {
    Matrix g = grad;
    for (double& v : g.data) v = -lambda * v;
    return g;
}

}  // namespace dda
