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

// Adversarial adaptation training engine.
//
// One step minimizes the source classification loss while playing a minimax
// game against a domain discriminator through gradient reversal: the
// discriminator descends on the domain loss, the feature extractor ascends
// on it. The discriminator is a dropout-randomized MC ensemble whose size K
// is fixed (d3a) or follows a linear curriculum (cd3a); grl is the
// degenerate K = 1, dropout 0 baseline and source_only drops the adversary.
//
// All updates for one step come from a single backward pass and are applied
// simultaneously. The classifier head never sees domain gradients.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dda/data.hpp"
#include "dda/network.hpp"
#include "dda/rng.hpp"
#include "dda/schedule.hpp"
#include "dda/sgd.hpp"

namespace dda::adapt {

enum class Variant { source_only, grl, d3a, cd3a };

std::string variant_name(Variant variant);
Variant parse_variant(const std::string& name);

struct TrainConfig {
    Variant variant = Variant::cd3a;
    std::vector<std::size_t> extractor_hidden{64, 64};
    std::vector<std::size_t> classifier_hidden{};
    std::vector<std::size_t> discriminator_hidden{64};
    double dropout = 0.5;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::size_t batch_size = 32;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
    LambdaSchedule lambda_schedule;
    // Ensemble sizes; 0 means "default to the class count" when training.
    std::size_t k_fixed = 0;  // d3a
    std::size_t k_min = 1;    // cd3a
    std::size_t k_max = 0;    // cd3a
    std::size_t eval_period = 5;  // epochs between accuracy evaluations

    void validate() const;
};

struct StepRecord {
    std::size_t step = 0;
    std::size_t epoch = 0;
    double loss_cls = 0.0;
    std::optional<double> loss_dom;  // absent for source_only
    std::size_t k = 0;               // 0 for source_only
    double lambda = 0.0;
    std::optional<double> acc_src;   // present on evaluation steps only
    std::optional<double> acc_tgt;
};

struct RunHistory {
    std::vector<StepRecord> records;
};

// Header `step,epoch,loss_cls,loss_dom,k,lambda,acc_src,acc_tgt`; optional
// fields are empty cells; doubles carry 17 significant digits.
void write_history_csv(const RunHistory& history, const std::string& path);

// Momentum buffers mirroring the network's parameter shapes.
struct StackVelocity {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> bias;
};

struct OptimizerState {
    StackVelocity extractor;
    StackVelocity classifier;
    StackVelocity discriminator;
};

OptimizerState make_optimizer_state(const net::Network& network);

// Everything one forward pass leaves behind for the joint backward.
struct JointCaches {
    net::StackCache extractor_cache;
    net::StackCache classifier_cache;
    Matrix features;                 // N x feat, source rows then target rows
    Matrix cls_grad_logits;          // d(loss_cls)/d(source logits)
    net::McOutput mc;                // K discriminator passes
    std::vector<Matrix> bce_grads;   // per-pass d(loss_j)/d(logits), N x 1
    std::size_t n_source = 0;
};

struct JointResult {
    double loss_cls = 0.0;
    double loss_dom_mean = 0.0;  // mean over the K passes
    JointCaches caches;
};

// Forward pass of the joint objective: classification loss over the source
// rows plus the K-pass mean domain loss over all rows. K >= 1; masks are
// drawn fresh from rng per pass.
JointResult joint_loss(const data::DomainBatch& batch, net::Network& network, std::size_t k,
                       Rng& rng);

struct JointGradients {
    net::StackGrads extractor;
    net::StackGrads classifier;
    net::StackGrads discriminator;   // w.r.t. the unscaled mean domain loss
    Matrix feat_grad_cls;            // n_source x feat, classification term
    Matrix feat_grad_dom;            // N x feat, mean over passes, pre-reversal
};

// Backward pass. With reverse_domain the extractor receives the
// sign-reversed, lambda-scaled domain gradient (the minimax update); without
// it the extractor gradient is the plain descent direction of
// loss_cls + lambda * loss_dom_mean, which is what a finite-difference
// oracle of that scalar checks against.
JointGradients joint_backward(const JointResult& result, net::Network& network, double lambda,
                              bool reverse_domain = true);

// One simultaneous update of all parameter groups. k == 0 selects the
// source-only step (no discriminator forward, no rng consumption).
struct StepOutcome {
    double loss_cls = 0.0;
    std::optional<double> loss_dom;
};

StepOutcome train_step(const data::DomainBatch& batch, net::Network& network,
                       OptimizerState& opt, const SgdConfig& sgd, std::size_t k, double lambda,
                       Rng& rng);

struct TrainResult {
    net::Network network;
    RunHistory history;
};

// Full training run. The unlabeled target drives the domain loss; accuracy
// on the target is reported against target_eval (a labeled copy of the same
// rows) when provided, else against target itself if it carries labels.
TrainResult train(const data::Dataset& source, const data::Dataset& target,
                  const TrainConfig& cfg, const data::Dataset* target_eval = nullptr);

// Distribution of the K reversed per-pass feature gradients on one batch,
// without touching parameters. Needs K >= 2.
struct GradDistribution {
    double mean_norm = 0.0;          // mean over passes of the Frobenius norm
    double component_variance = 0.0; // unbiased variance across passes, averaged
    Matrix mean_gradient;            // N x feat average of the reversed gradients
};

GradDistribution gradient_distribution(const data::DomainBatch& batch, net::Network& network,
                                       std::size_t k, double lambda, Rng& rng);

}  // namespace dda::adapt
