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

#include "dda/schedule.hpp"

#include <cmath>

#include "dda/errors.hpp"

namespace dda::adapt {

std::size_t curriculum_k(const CurriculumSchedule& schedule, std::size_t step) {
    if (schedule.k_min == 0) throw ValidationError("curriculum: k_min must be >= 1");
    if (schedule.k_min > schedule.k_max) {
        throw ValidationError("curriculum: k_min must not exceed k_max");
    }
    if (schedule.total_steps == 0) throw ValidationError("curriculum: total_steps must be >= 1");
    if (step >= schedule.total_steps) return schedule.k_max;
    // Integer form of floor((step / total) * span); exact, no rounding hazard.
    const std::size_t span = schedule.k_max - schedule.k_min;
    return schedule.k_min + (step * span) / schedule.total_steps;
}

double lambda_at(const LambdaSchedule& schedule, double progress) {
    if (!(progress >= 0.0 && progress <= 1.0)) {
        throw ValidationError("lambda schedule: progress must be in [0, 1]");
    }
    if (!(schedule.gamma > 0.0)) throw ValidationError("lambda schedule: gamma must be > 0");
    if (schedule.lambda_max < 0.0) {
        throw ValidationError("lambda schedule: lambda_max must be >= 0");
    }
    return schedule.lambda_max * (2.0 / (1.0 + std::exp(-schedule.gamma * progress)) - 1.0);
}

}  // namespace dda::adapt
