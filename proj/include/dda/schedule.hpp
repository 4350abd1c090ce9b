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

namespace dda::adapt {

// Linear ramp of the discriminator ensemble size from k_min at step 0 to
// k_max at step total_steps, in floor-quantized increments.
struct CurriculumSchedule {
    std::size_t k_min = 1;
    std::size_t k_max = 1;
    std::size_t total_steps = 1;
};

// k(t) = k_min + floor((t / total) * (k_max - k_min)); steps past the end
// clamp to k_max.
std::size_t curriculum_k(const CurriculumSchedule& schedule, std::size_t step);

// Sigmoid warm-up of the reversal strength over normalized progress p in
// [0, 1]: lambda(p) = lambda_max * (2 / (1 + exp(-gamma * p)) - 1).
struct LambdaSchedule {
    double gamma = 10.0;
    double lambda_max = 1.0;
};

double lambda_at(const LambdaSchedule& schedule, double progress);

}  // namespace dda::adapt
