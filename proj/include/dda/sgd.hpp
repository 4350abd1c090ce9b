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

#pragma once

#include <vector>

#include "dda/errors.hpp"
#include "dda/matrix.hpp"

namespace dda {

struct SgdConfig {
    double learning_rate = 0.05;  // > 0
    double momentum = 0.9;        // in [0, 1)
};

/// v <- mu*v - lr*g ; p <- p + v, elementwise.
inline void sgd_step(Matrix& param, const Matrix& grad, Matrix& velocity, const SgdConfig& cfg) {
    if (!param.same_shape(grad) || !param.same_shape(velocity)) {
        throw DimensionError("sgd_step: param " + param.shape_str() + ", grad " +
                             grad.shape_str() + ", velocity " + velocity.shape_str());
    }
    for (std::size_t i = 0; i < param.data.size(); ++i) {
        velocity.data[i] = cfg.momentum * velocity.data[i] - cfg.learning_rate * grad.data[i];
        param.data[i] += velocity.data[i];
    }
}

inline void sgd_step(std::vector<double>& param, const std::vector<double>& grad,
                     std::vector<double>& velocity, const SgdConfig& cfg) {
    if (param.size() != grad.size() || param.size() != velocity.size()) {
        throw DimensionError("sgd_step: vector sizes " + std::to_string(param.size()) + ", " +
                             std::to_string(grad.size()) + ", " + std::to_string(velocity.size()));
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
        param[i] += velocity[i];
    }
}

}  // namespace dda
