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

#include "dda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dda/errors.hpp"
#include "dda/kernels.hpp"
#include "dda/sgd.hpp"

namespace dda::eval {

double accuracy(const net::Network& network, const data::Dataset& ds) {
    if (ds.n_rows() == 0) throw ValidationError("accuracy: empty dataset");
    if (!ds.has_labels()) throw ValidationError("accuracy: labels required");
    const Matrix features = extract_features(ds.features, network.extractor, nullptr);
    const Matrix logits = classify(features, network.classifier, nullptr);
    const std::vector<int> preds = net::argmax_rows(logits);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == ds.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

Matrix adapted_features(const net::Network& network, const data::Dataset& ds) {
    return extract_features(ds.features, network.extractor, nullptr);
}

double proxy_a_from_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ValidationError("proxy_a_from_epsilon: epsilon must be in [0, 1]");
    }
    return std::clamp(2.0 * (1.0 - 2.0 * epsilon), 0.0, 2.0);
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    return idx;
}

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& idx, std::size_t begin,
                 std::size_t end) {
    Matrix out(end - begin, m.cols);
    for (std::size_t r = begin; r < end; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) out(r - begin, c) = m(idx[r], c);
    }
    return out;
}

}  // namespace

ProxyAResult proxy_a_distance(const Matrix& features_s, const Matrix& features_t,
                              const ProbeConfig& cfg) {
    if (features_s.cols != features_t.cols) {
        throw DimensionError("proxy_a_distance: feature dims differ (" +
                              std::to_string(features_s.cols) + " vs " +
                              std::to_string(features_t.cols) + ")");
    }
    if (features_s.rows < 2 || features_t.rows < 2) {
        throw ValidationError("proxy_a_distance: need at least 2 rows per domain");
    }
    if (cfg.steps == 0) throw ValidationError("proxy_a_distance: probe needs steps >= 1");
    if (!(cfg.learning_rate > 0.0)) {
        throw ValidationError("proxy_a_distance: probe learning_rate must be > 0");
    }

    // Each domain is shuffled with its own identically seeded stream, so
    // swapping the two arguments mirrors the split exactly.
    const std::vector<std::size_t> order_s = shuffled_indices(features_s.rows, cfg.seed);
    const std::vector<std::size_t> order_t = shuffled_indices(features_t.rows, cfg.seed);
    const std::size_t train_s = features_s.rows / 2;
    const std::size_t train_t = features_t.rows / 2;

    const Matrix x_train =
        vstack(take_rows(features_s, order_s, 0, train_s), take_rows(features_t, order_t, 0, train_t));
    std::vector<int> y_train(train_s, 0);
    y_train.insert(y_train.end(), train_t, 1);

    DenseLayer probe;
    probe.weights = Matrix(1, features_s.cols);
    probe.bias.assign(1, 0.0);
    Matrix w_vel(1, features_s.cols);
    std::vector<double> b_vel(1, 0.0);
    const SgdConfig sgd{cfg.learning_rate, 0.0};
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        const Matrix z = dense_forward(x_train, probe);
        const SigmoidBceResult bce = sigmoid_bce(z, y_train);
        const DenseGrads grads = dense_backward(bce.grad_logits, probe, x_train);
        sgd_step(probe.weights, grads.grad_weights, w_vel, sgd);
        sgd_step(probe.bias, grads.grad_bias, b_vel, sgd);
    }

    const Matrix x_test = vstack(take_rows(features_s, order_s, train_s, features_s.rows),
                                 take_rows(features_t, order_t, train_t, features_t.rows));
    const std::size_t test_s = features_s.rows - train_s;
    const std::size_t test_t = features_t.rows - train_t;
    const Matrix z_test = dense_forward(x_test, probe);
    std::size_t errors = 0;
    for (std::size_t r = 0; r < z_test.rows; ++r) {
        const int pred = z_test(r, 0) > 0.0 ? 1 : 0;
        const int truth = r < test_s ? 0 : 1;
        if (pred != truth) ++errors;
    }
    ProxyAResult result;
    result.epsilon = static_cast<double>(errors) / static_cast<double>(test_s + test_t);
    result.d_a = proxy_a_from_epsilon(result.epsilon);
    return result;
}

RankTable average_ranks(const Matrix& scores, bool higher_is_better) {
    if (scores.rows < 1) throw ValidationError("average_ranks: need at least one dataset row");
    if (scores.cols < 2) throw ValidationError("average_ranks: need at least two methods");
    for (double v : scores.data) {
        if (std::isnan(v)) throw ValidationError("average_ranks: NaN score");
    }
    RankTable table;
    table.scores = scores;
    table.row_ranks = Matrix(scores.rows, scores.cols);
    table.avg_ranks.assign(scores.cols, 0.0);
    std::vector<std::size_t> order(scores.cols);
    for (std::size_t r = 0; r < scores.rows; ++r) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return higher_is_better ? scores(r, a) > scores(r, b) : scores(r, a) < scores(r, b);
        });
        std::size_t pos = 0;
        while (pos < order.size()) {
            std::size_t tie_end = pos + 1;
            while (tie_end < order.size() &&
                   scores(r, order[tie_end]) == scores(r, order[pos])) {
                ++tie_end;
            }
            // Tied methods share the mean of the positions they occupy.
            const double shared =
                (static_cast<double>(pos + 1) + static_cast<double>(tie_end)) / 2.0;
            for (std::size_t i = pos; i < tie_end; ++i) table.row_ranks(r, order[i]) = shared;
            pos = tie_end;
        }
        for (std::size_t c = 0; c < scores.cols; ++c) {
            table.avg_ranks[c] += table.row_ranks(r, c);
        }
    }
    for (double& v : table.avg_ranks) v /= static_cast<double>(scores.rows);
    return table;
}

double nemenyi_cd(std::size_t k, std::size_t n_datasets, double alpha) {
    // Two-tailed Nemenyi q constants (studentized range / sqrt(2)) as
    // published in the standard average-rank comparison tables, k = 2..10.
    static constexpr double kQ05[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                      2.949, 3.031, 3.102, 3.164};
    static constexpr double kQ10[] = {1.645, 2.052, 2.291, 2.459, 2.589,
                                      2.693, 2.780, 2.855, 2.920};
    if (k < 2 || k > 10) {
        throw ValidationError("nemenyi_cd: k must be in [2, 10], got " + std::to_string(k));
    }
    if (n_datasets == 0) throw ValidationError("nemenyi_cd: need at least one dataset");
    const double* table = nullptr;
    if (std::abs(alpha - 0.05) < 1e-12) {
        table = kQ05;
    } else if (std::abs(alpha - 0.10) < 1e-12) {
        table = kQ10;
    } else {
        throw ValidationError("nemenyi_cd: alpha must be 0.05 or 0.10");
    }
    const double q = table[k - 2];
    return q * std::sqrt(static_cast<double>(k * (k + 1)) /
                         (6.0 * static_cast<double>(n_datasets)));
}

SweepCell run_sweep_cell(const data::Dataset& source, const data::Dataset& target,
                         const data::Dataset& target_eval, const adapt::TrainConfig& cfg,
                         const ProbeConfig& probe) {
    const adapt::TrainResult run = adapt::train(source, target, cfg, &target_eval);
    SweepCell cell;
    cell.variant = adapt::variant_name(cfg.variant);
    cell.seed = cfg.seed;
    const std::size_t n_classes = run.network.topology.n_classes;
    switch (cfg.variant) {
        case adapt::Variant::source_only: cell.k = 0; break;
        case adapt::Variant::grl: cell.k = 1; break;
        case adapt::Variant::d3a: cell.k = cfg.k_fixed != 0 ? cfg.k_fixed : n_classes; break;
        case adapt::Variant::cd3a: cell.k = cfg.k_max != 0 ? cfg.k_max : n_classes; break;
    }
    cell.acc_tgt = accuracy(run.network, target_eval);
    cell.acc_src = accuracy(run.network, source);
    const Matrix fs = adapted_features(run.network, source);
    const Matrix ft = adapted_features(run.network, target);
    cell.d_a = proxy_a_distance(fs, ft, probe).d_a;
    return cell;
}

namespace {

SweepSummaryRow summarize(const std::string& variant, std::size_t k,
                          const std::vector<double>& accs) {
    SweepSummaryRow row;
    row.variant = variant;
    row.k = k;
    const double n = static_cast<double>(accs.size());
    for (double a : accs) row.mean_acc_tgt += a;
    row.mean_acc_tgt /= n;
    if (accs.size() > 1) {
        double ss = 0.0;
        for (double a : accs) {
            const double d = a - row.mean_acc_tgt;
            ss += d * d;
        }
        row.std_acc_tgt = std::sqrt(ss / (n - 1.0));
    }
    return row;
}

}  // namespace

SweepResult sweep_k(const data::Dataset& source, const data::Dataset& target,
                    const data::Dataset& target_eval, const adapt::TrainConfig& base_cfg,
                    const std::vector<std::size_t>& k_values,
                    const std::vector<std::uint64_t>& seeds, const ProbeConfig& probe,
                    const std::function<void(const SweepCell&)>& on_cell,
                    const CellLookup& lookup) {
    if (k_values.empty()) throw ValidationError("sweep_k: k_values must be non-empty");
    if (seeds.empty()) throw ValidationError("sweep_k: seeds must be non-empty");
    for (std::size_t k : k_values) {
        if (k == 0) throw ValidationError("sweep_k: ensemble sizes must be >= 1");
    }
    base_cfg.validate();

    SweepResult result;
    auto run_one = [&](adapt::TrainConfig cfg, std::size_t k_label) {
        if (lookup) {
            std::optional<SweepCell> cached =
                lookup(adapt::variant_name(cfg.variant), k_label, cfg.seed);
            if (cached) {
                result.cells.push_back(*cached);
                return true;
            }
        }
        try {
            const SweepCell cell = run_sweep_cell(source, target, target_eval, cfg, probe);
            result.cells.push_back(cell);
            if (on_cell) on_cell(cell);
            return true;
        } catch (const std::exception& e) {
            result.failures.push_back(
                {adapt::variant_name(cfg.variant), k_label, cfg.seed, e.what()});
            return false;
        }
    };

    for (std::size_t k : k_values) {
        std::vector<double> accs;
        for (std::uint64_t seed : seeds) {
            adapt::TrainConfig cfg = base_cfg;
            cfg.variant = adapt::Variant::d3a;
            cfg.k_fixed = k;
            cfg.seed = seed;
            if (run_one(cfg, k)) accs.push_back(result.cells.back().acc_tgt);
        }
        if (!accs.empty()) result.summary.push_back(summarize("d3a", k, accs));
    }

    std::size_t n_classes = source.n_classes;
    if (n_classes == 0) {
        int max_label = 0;
        for (int y : source.labels) max_label = std::max(max_label, y);
        n_classes = static_cast<std::size_t>(max_label) + 1;
    }
    const std::size_t cd3a_k = base_cfg.k_max != 0 ? base_cfg.k_max : n_classes;
    std::vector<double> curriculum_accs;
    for (std::uint64_t seed : seeds) {
        adapt::TrainConfig cfg = base_cfg;
        cfg.variant = adapt::Variant::cd3a;
        cfg.seed = seed;
        if (run_one(cfg, cd3a_k)) curriculum_accs.push_back(result.cells.back().acc_tgt);
    }
    if (!curriculum_accs.empty()) {
        result.summary.push_back(summarize("cd3a", cd3a_k, curriculum_accs));
    }
    return result;
}

}  // namespace dda::eval
