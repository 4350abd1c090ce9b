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

// Analysis toolkit: accuracy, a proxy A-distance between feature clouds,
// the Nemenyi critical-difference test over average ranks, and the
// fixed-vs-curriculum ensemble-size sweep.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dda/data.hpp"
#include "dda/matrix.hpp"
#include "dda/network.hpp"
#include "dda/trainer.hpp"

namespace dda::eval {

// Fraction of argmax-correct predictions under the deterministic forward
// path (no dropout anywhere). Labels are required.
double accuracy(const net::Network& network, const data::Dataset& ds);

// Features of a dataset under the frozen extractor.
Matrix adapted_features(const net::Network& network, const data::Dataset& ds);

// Budget for the linear domain probe behind the proxy A-distance. The probe
// is a single zero-initialized dense layer trained with full-batch gradient
// descent on sigmoid BCE; a linear probe stands in for the customary kernel
// SVM, so the distance is a lower-bound-style proxy.
struct ProbeConfig {
    std::size_t steps = 200;
    double learning_rate = 0.1;
    std::uint64_t seed = 0;
};

struct ProxyAResult {
    double epsilon = 0.0;  // held-out domain-classification error
    double d_a = 0.0;      // 2 * (1 - 2 * epsilon), clamped to [0, 2]
};

// The clamped distance formula by itself.
double proxy_a_from_epsilon(double epsilon);

// Splits each domain 50/50 (per-domain shuffle seeded identically, so
// swapping the arguments mirrors the split), trains the probe on the first
// halves and reads epsilon off the second halves.
ProxyAResult proxy_a_distance(const Matrix& features_s, const Matrix& features_t,
                              const ProbeConfig& cfg);

struct RankTable {
    std::vector<std::string> methods;  // filled by the caller
    Matrix scores;                     // N datasets x k methods
    Matrix row_ranks;                  // per-row ranks, 1 = best, ties averaged
    std::vector<double> avg_ranks;     // column means of row_ranks
};

RankTable average_ranks(const Matrix& scores, bool higher_is_better);

// Critical difference q_alpha(k) * sqrt(k*(k+1) / (6*N)) with the bundled
// two-tailed Nemenyi q table (k in [2, 10], alpha in {0.05, 0.10}).
double nemenyi_cd(std::size_t k, std::size_t n_datasets, double alpha);

// One trained-and-measured sweep cell.
struct SweepCell {
    std::string variant;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double acc_tgt = 0.0;
    double acc_src = 0.0;
    double d_a = 0.0;
};

struct SweepSummaryRow {
    std::string variant;
    std::size_t k = 0;
    double mean_acc_tgt = 0.0;
    double std_acc_tgt = 0.0;
};

struct SweepFailure {
    std::string variant;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<SweepSummaryRow> summary;  // one row per K plus the curriculum row
    std::vector<SweepFailure> failures;
};

// Trains one variant at one seed and measures target/source accuracy plus
// the proxy A-distance of the adapted features. cfg.variant, cfg.seed and
// the ensemble-size fields must already be set.
SweepCell run_sweep_cell(const data::Dataset& source, const data::Dataset& target,
                         const data::Dataset& target_eval, const adapt::TrainConfig& cfg,
                         const ProbeConfig& probe);

// Answers "was this cell already computed?" so interrupted sweeps resume
// instead of recomputing.
using CellLookup =
    std::function<std::optional<SweepCell>(const std::string& variant, std::size_t k,
                                           std::uint64_t seed)>;

// Fixed-size runs for every (K, seed) pair plus one curriculum run per seed.
// Completed cells are reported through on_cell as they finish; a failing
// cell is recorded and the sweep continues, so partial results survive.
SweepResult sweep_k(const data::Dataset& source, const data::Dataset& target,
                    const data::Dataset& target_eval, const adapt::TrainConfig& base_cfg,
                    const std::vector<std::size_t>& k_values,
                    const std::vector<std::uint64_t>& seeds, const ProbeConfig& probe,
                    const std::function<void(const SweepCell&)>& on_cell = nullptr,
                    const CellLookup& lookup = nullptr);

}  // namespace dda::eval
