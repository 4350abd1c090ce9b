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

#include "dda/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dda/errors.hpp"
#include "dda/eval.hpp"
#include "dda/kernels.hpp"
#include "dda/textio.hpp"

namespace dda::adapt {

std::string variant_name(Variant variant) {
    switch (variant) {
        case Variant::source_only: return "source_only";
        case Variant::grl: return "grl";
        case Variant::d3a: return "d3a";
        case Variant::cd3a: return "cd3a";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    if (name == "source_only") return Variant::source_only;
    if (name == "grl") return Variant::grl;
    if (name == "d3a") return Variant::d3a;
    if (name == "cd3a") return Variant::cd3a;
    throw ValidationError("unknown variant '" + name +
                          "' (valid: source_only, grl, d3a, cd3a)");
}

void TrainConfig::validate() const {
    if (batch_size == 0) throw ValidationError("config: batch_size must be >= 1");
    if (epochs == 0) throw ValidationError("config: epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ValidationError("config: learning_rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ValidationError("config: momentum must be in [0, 1)");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) {
        throw ValidationError("config: dropout must be in [0, 1)");
    }
    if (eval_period == 0) throw ValidationError("config: eval_period must be >= 1");
    if (k_min == 0) throw ValidationError("config: k_min must be >= 1");
    if (k_max != 0 && k_max < k_min) throw ValidationError("config: k_max must be >= k_min");
    if (!(lambda_schedule.gamma > 0.0)) throw ValidationError("config: gamma must be > 0");
    if (lambda_schedule.lambda_max < 0.0) {
        throw ValidationError("config: lambda_max must be >= 0");
    }
    for (std::size_t w : extractor_hidden) {
        if (w == 0) throw ValidationError("config: extractor hidden width must be > 0");
    }
    for (std::size_t w : classifier_hidden) {
        if (w == 0) throw ValidationError("config: classifier hidden width must be > 0");
    }
    for (std::size_t w : discriminator_hidden) {
        if (w == 0) throw ValidationError("config: discriminator hidden width must be > 0");
    }
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

}  // namespace

void write_history_csv(const RunHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "step,epoch,loss_cls,loss_dom,k,lambda,acc_src,acc_tgt\n";
    for (const StepRecord& r : history.records) {
        out << r.step << ',' << r.epoch << ',' << fmt_double(r.loss_cls) << ','
            << opt_cell(r.loss_dom) << ',' << r.k << ',' << fmt_double(r.lambda) << ','
            << opt_cell(r.acc_src) << ',' << opt_cell(r.acc_tgt) << '\n';
    }
    if (!out) throw IoError("failed while writing: " + path);
}

namespace {

StackVelocity zero_velocity_like(const net::Stack& stack) {
    StackVelocity v;
    for (const DenseLayer& layer : stack.layers) {
        v.weights.emplace_back(layer.weights.rows, layer.weights.cols);
        v.bias.emplace_back(layer.bias.size(), 0.0);
    }
    return v;
}

void apply_sgd(net::Stack& stack, const net::StackGrads& grads, StackVelocity& velocity,
               const SgdConfig& cfg) {
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        sgd_step(stack.layers[i].weights, grads.grad_weights[i], velocity.weights[i], cfg);
        sgd_step(stack.layers[i].bias, grads.grad_bias[i], velocity.bias[i], cfg);
    }
}

}  // namespace

OptimizerState make_optimizer_state(const net::Network& network) {
    OptimizerState state;
    state.extractor = zero_velocity_like(network.extractor);
    state.classifier = zero_velocity_like(network.classifier);
    state.discriminator = zero_velocity_like(network.discriminator);
    return state;
}

JointResult joint_loss(const data::DomainBatch& batch, net::Network& network, std::size_t k,
                       Rng& rng) {
    if (batch.source_x.rows == 0) {
        throw ValidationError("joint_loss: source rows required (classification term)");
    }
    if (k == 0) throw ValidationError("joint_loss: ensemble size must be >= 1");
    JointResult result;
    JointCaches& caches = result.caches;
    caches.n_source = batch.source_x.rows;

    const Matrix x = vstack(batch.source_x, batch.target_x);
    caches.features = extract_features(x, network.extractor, &caches.extractor_cache);

    const Matrix source_features = row_slice(caches.features, 0, caches.n_source);
    const Matrix logits = classify(source_features, network.classifier, &caches.classifier_cache);
    SoftmaxCeResult ce = softmax_cross_entropy(logits, batch.source_y);
    result.loss_cls = ce.loss;
    caches.cls_grad_logits = std::move(ce.grad_logits);

    caches.mc = discriminate_mc(caches.features, network, k, rng);
    double dom_sum = 0.0;
    caches.bce_grads.reserve(k);
    for (const Matrix& pass_logits : caches.mc.logits) {
        SigmoidBceResult bce = sigmoid_bce(pass_logits, batch.domain_labels);
        dom_sum += bce.loss;
        caches.bce_grads.push_back(std::move(bce.grad_logits));
    }
    result.loss_dom_mean = dom_sum / static_cast<double>(k);
    return result;
}

JointGradients joint_backward(const JointResult& result, net::Network& network, double lambda,
                              bool reverse_domain) {
    const JointCaches& caches = result.caches;
    const std::size_t k = caches.mc.logits.size();
    if (k == 0) throw StateError("joint_backward: no discriminator passes cached");

    JointGradients out;

    net::StackBackward cls = classifier_backward(caches.cls_grad_logits, network.classifier,
                                                 caches.classifier_cache);
    out.classifier = std::move(cls.grads);
    out.feat_grad_cls = std::move(cls.grad_input);

    out.discriminator = net::zero_grads_like(network.discriminator);
    out.feat_grad_dom = Matrix(caches.features.rows, caches.features.cols);
    for (std::size_t j = 0; j < k; ++j) {
        net::StackBackward pass = discriminator_backward(caches.bce_grads[j],
                                                         network.discriminator,
                                                         caches.mc.caches[j]);
        accumulate(out.discriminator, pass);
        axpy(out.feat_grad_dom, pass.grad_input, 1.0);
    }
    const double inv_k = 1.0 / static_cast<double>(k);
    net::scale(out.discriminator, inv_k);
    scale_inplace(out.feat_grad_dom, inv_k);

    Matrix feat_total(caches.features.rows, caches.features.cols);
    for (std::size_t r = 0; r < out.feat_grad_cls.rows; ++r) {
        for (std::size_t c = 0; c < feat_total.cols; ++c) {
            feat_total(r, c) = out.feat_grad_cls(r, c);
        }
    }
    axpy(feat_total, out.feat_grad_dom, reverse_domain ? -lambda : lambda);

    net::StackBackward ext = extractor_backward(feat_total, network.extractor,
                                                caches.extractor_cache);
    out.extractor = std::move(ext.grads);
    return out;
}

namespace {

// Classification-only step: no discriminator forward, no rng consumption.
StepOutcome source_only_step(const data::DomainBatch& batch, net::Network& network,
                             OptimizerState& opt, const SgdConfig& sgd) {
    net::StackCache ext_cache;
    net::StackCache cls_cache;
    const Matrix features = extract_features(batch.source_x, network.extractor, &ext_cache);
    const Matrix logits = classify(features, network.classifier, &cls_cache);
    SoftmaxCeResult ce = softmax_cross_entropy(logits, batch.source_y);
    net::StackBackward cls = classifier_backward(ce.grad_logits, network.classifier, cls_cache);
    net::StackBackward ext = extractor_backward(cls.grad_input, network.extractor, ext_cache);
    apply_sgd(network.classifier, cls.grads, opt.classifier, sgd);
    apply_sgd(network.extractor, ext.grads, opt.extractor, sgd);
    return {ce.loss, std::nullopt};
}

}  // namespace

StepOutcome train_step(const data::DomainBatch& batch, net::Network& network,
                       OptimizerState& opt, const SgdConfig& sgd, std::size_t k, double lambda,
                       Rng& rng) {
    if (k == 0) return source_only_step(batch, network, opt, sgd);
    JointResult result = joint_loss(batch, network, k, rng);
    JointGradients grads = joint_backward(result, network, lambda, true);
    apply_sgd(network.classifier, grads.classifier, opt.classifier, sgd);
    apply_sgd(network.discriminator, grads.discriminator, opt.discriminator, sgd);
    apply_sgd(network.extractor, grads.extractor, opt.extractor, sgd);
    return {result.loss_cls, result.loss_dom_mean};
}

TrainResult train(const data::Dataset& source, const data::Dataset& target,
                  const TrainConfig& cfg, const data::Dataset* target_eval) {
    cfg.validate();
    source.validate();
    target.validate();
    if (!source.has_labels()) throw ValidationError("train: source labels required");
    std::size_t n_classes = source.n_classes;
    if (n_classes == 0) {
        int max_label = 0;
        for (int y : source.labels) max_label = std::max(max_label, y);
        n_classes = static_cast<std::size_t>(max_label) + 1;
    }
    if (n_classes < 2) throw ValidationError("train: need at least 2 classes");
    if (source.n_features() != target.n_features()) {
        throw DimensionError("train: feature dims differ between domains");
    }

    net::Topology topology;
    topology.input_dim = source.n_features();
    topology.extractor_hidden = cfg.extractor_hidden;
    topology.classifier_hidden = cfg.classifier_hidden;
    topology.n_classes = n_classes;
    topology.discriminator_hidden = cfg.discriminator_hidden;
    // The grl baseline is the deterministic single discriminator.
    topology.dropout_rate = cfg.variant == Variant::grl ? 0.0 : cfg.dropout;
    topology.validate();

    const std::size_t steps_per_epoch =
        std::max(source.n_rows(), target.n_rows()) / cfg.batch_size;
    if (steps_per_epoch == 0) {
        throw ValidationError("train: batch_size exceeds both datasets");
    }
    const std::size_t n_steps = cfg.epochs * steps_per_epoch;
    const std::size_t k_max_eff = cfg.k_max != 0 ? cfg.k_max : n_classes;
    const std::size_t k_fixed_eff = cfg.k_fixed != 0 ? cfg.k_fixed : n_classes;
    if (cfg.variant == Variant::cd3a && k_max_eff < cfg.k_min) {
        throw ValidationError("train: k_max below k_min after defaulting to class count");
    }
    const CurriculumSchedule curriculum{cfg.k_min, k_max_eff,
                                        n_steps > 1 ? n_steps - 1 : 1};
    const double progress_denom = n_steps > 1 ? static_cast<double>(n_steps - 1) : 1.0;

    Rng rng(cfg.seed);
    TrainResult result;
    result.network = net::make_network(topology, rng);
    OptimizerState opt = make_optimizer_state(result.network);
    const SgdConfig sgd{cfg.learning_rate, cfg.momentum};

    const data::Dataset* eval_target =
        target_eval ? target_eval : (target.has_labels() ? &target : nullptr);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<data::DomainBatch> batches =
            data::batch_iter(source, target, cfg.batch_size, rng, true);
        for (std::size_t i = 0; i < batches.size(); ++i) {
            const std::size_t step = epoch * steps_per_epoch + i;
            const double progress = static_cast<double>(step) / progress_denom;
            std::size_t k = 0;
            double lambda = 0.0;
            switch (cfg.variant) {
                case Variant::source_only: break;
                case Variant::grl:
                    k = 1;
                    lambda = lambda_at(cfg.lambda_schedule, progress);
                    break;
                case Variant::d3a:
                    k = k_fixed_eff;
                    lambda = lambda_at(cfg.lambda_schedule, progress);
                    break;
                case Variant::cd3a:
                    k = curriculum_k(curriculum, step);
                    lambda = lambda_at(cfg.lambda_schedule, progress);
                    break;
            }
            const StepOutcome outcome =
                train_step(batches[i], result.network, opt, sgd, k, lambda, rng);
            StepRecord record;
            record.step = step;
            record.epoch = epoch;
            record.loss_cls = outcome.loss_cls;
            record.loss_dom = outcome.loss_dom;
            record.k = k;
            record.lambda = lambda;
            result.history.records.push_back(record);
        }
        const bool eval_due = (epoch + 1) % cfg.eval_period == 0 || epoch + 1 == cfg.epochs;
        if (eval_due && !result.history.records.empty()) {
            StepRecord& last = result.history.records.back();
            last.acc_src = eval::accuracy(result.network, source);
            if (eval_target) last.acc_tgt = eval::accuracy(result.network, *eval_target);
        }
    }
    return result;
}

GradDistribution gradient_distribution(const data::DomainBatch& batch, net::Network& network,
                                       std::size_t k, double lambda, Rng& rng) {
    if (k < 2) throw ValidationError("gradient_distribution: need at least 2 passes");
    JointResult result = joint_loss(batch, network, k, rng);
    const JointCaches& caches = result.caches;

    std::vector<Matrix> reversed;
    reversed.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        net::StackBackward pass = discriminator_backward(caches.bce_grads[j],
                                                         network.discriminator,
                                                         caches.mc.caches[j]);
        reversed.push_back(grad_reverse(pass.grad_input, lambda));
    }

    GradDistribution dist;
    for (const Matrix& g : reversed) dist.mean_norm += frobenius_norm(g);
    dist.mean_norm /= static_cast<double>(k);

    dist.mean_gradient = Matrix(caches.features.rows, caches.features.cols);
    for (const Matrix& g : reversed) axpy(dist.mean_gradient, g, 1.0);
    scale_inplace(dist.mean_gradient, 1.0 / static_cast<double>(k));

    double var_sum = 0.0;
    const std::size_t n_components = dist.mean_gradient.size();
    for (std::size_t i = 0; i < n_components; ++i) {
        double mean = 0.0;
        for (const Matrix& g : reversed) mean += g.data[i];
        mean /= static_cast<double>(k);
        bool all_equal = true;
        double ss = 0.0;
        for (const Matrix& g : reversed) {
            if (g.data[i] != reversed[0].data[i]) all_equal = false;
            const double d = g.data[i] - mean;
            ss += d * d;
        }
        // Identical passes mean exactly zero spread, with no rounding residue.
        var_sum += all_equal ? 0.0 : ss / static_cast<double>(k - 1);
    }
    dist.component_variance = n_components > 0 ? var_sum / static_cast<double>(n_components) : 0.0;
    return dist;
}

}  // namespace dda::adapt
