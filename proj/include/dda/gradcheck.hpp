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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dda {

/// One parameter array with its analytic gradient, viewed in place.
struct ParamView {
    std::span<double> values;
    std::span<const double> analytic_grad;
};

/// Central-difference check of analytic gradients against `loss_fn`, which
/// must recompute the scalar loss from the current parameter values (any
/// stochastic parts must be frozen inside the closure). Perturbs every
/// parameter by +-epsilon in turn and returns the worst relative error,
/// |numeric - analytic| / max(|numeric| + |analytic|, floor).
/// Zero parameters returns 0.
double finite_difference_check(const std::function<double()>& loss_fn,
                               const std::vector<ParamView>& params, double epsilon);

/// Runs `n_configs` randomized dense/ReLU network configurations (varying
/// depth, widths, batch size and loss) through the check above and returns
/// the worst relative error seen. Used by tests and the grad-check command.
double gradient_check_suite(std::size_t n_configs, std::uint64_t seed, double epsilon);

}  // namespace dda
