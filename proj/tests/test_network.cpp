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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "dda/checkpoint.hpp"
#include "dda/errors.hpp"
#include "dda/gradcheck.hpp"
#include "dda/network.hpp"
#include "dda/rng.hpp"

using namespace dda;
using namespace dda::net;

namespace {

bool same_bits(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(a.data[i]) !=
            std::bit_cast<std::uint64_t>(b.data[i])) {
            return false;
        }
    }
    return true;
}

bool same_params(const Stack& a, const Stack& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        if (!same_bits(a.layers[i].weights, b.layers[i].weights)) return false;
        if (a.layers[i].bias != b.layers[i].bias) return false;
    }
    return true;
}

Topology small_topology() {
    Topology t;
    t.input_dim = 3;
    t.extractor_hidden = {5, 4};
    t.classifier_hidden = {6};
    t.n_classes = 2;
    t.discriminator_hidden = {5};
    t.dropout_rate = 0.5;
    return t;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (double& v : m.data) v = rng.uniform(-2.0, 2.0);
    return m;
}

void randomize_biases(Network& network, Rng& rng) {
    for (Stack* stack : {&network.extractor, &network.classifier, &network.discriminator}) {
        for (DenseLayer& layer : stack->layers) {
            for (double& b : layer.bias) b = rng.uniform(-0.5, 0.5);
        }
    }
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/dda_nettest_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("topology validation catches bad shapes") {
    Topology t = small_topology();
    CHECK_NOTHROW(t.validate());
    CHECK(t.feature_dim() == 4);

    t.input_dim = 0;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = small_topology();
    t.n_classes = 1;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = small_topology();
    t.dropout_rate = 1.0;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = small_topology();
    t.extractor_hidden = {4, 0};
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = small_topology();
    t.extractor_hidden = {};
    CHECK(t.feature_dim() == 3);
}

TEST_CASE("make_network builds the declared layer shapes") {
    Rng rng(1);
    const Network net = make_network(small_topology(), rng);
    REQUIRE(net.extractor.layers.size() == 2);
    CHECK(net.extractor.layers[0].in_dim() == 3);
    CHECK(net.extractor.layers[0].out_dim() == 5);
    CHECK(net.extractor.layers[1].out_dim() == 4);
    REQUIRE(net.classifier.layers.size() == 2);
    CHECK(net.classifier.layers[0].in_dim() == 4);
    CHECK(net.classifier.layers[1].out_dim() == 2);
    REQUIRE(net.discriminator.layers.size() == 2);
    CHECK(net.discriminator.layers[0].in_dim() == 4);
    CHECK(net.discriminator.layers[1].out_dim() == 1);
}

TEST_CASE("empty extractor is the identity map") {
    Topology t = small_topology();
    t.extractor_hidden = {};
    Rng rng(2);
    const Network net = make_network(t, rng);
    CHECK(net.extractor.layers.empty());
    Rng data_rng(3);
    const Matrix x = random_matrix(4, 3, data_rng);
    CHECK(same_bits(extract_features(x, net.extractor, nullptr), x));
}

TEST_CASE("classify rejects an empty stack and wrong widths") {
    Rng rng(4);
    const Network net = make_network(small_topology(), rng);
    CHECK_THROWS_AS(classify(Matrix(2, 4), Stack{}, nullptr), StateError);
    CHECK_THROWS_AS(classify(Matrix(2, 3), net.classifier, nullptr), DimensionError);
    const Matrix logits = classify(Matrix(2, 4), net.classifier, nullptr);
    CHECK(logits.rows == 2);
    CHECK(logits.cols == 2);
}

TEST_CASE("forward caches carry one entry per layer") {
    Rng rng(5);
    const Network net = make_network(small_topology(), rng);
    Rng data_rng(6);
    const Matrix x = random_matrix(3, 3, data_rng);
    StackCache cache;
    const Matrix f = extract_features(x, net.extractor, &cache);
    CHECK(f.cols == 4);
    CHECK(cache.dense_inputs.size() == 2);
    CHECK(cache.pre_activations.size() == 2);
    CHECK(same_bits(cache.dense_inputs[0], x));
}

TEST_CASE("backward rejects a cache from a different batch") {
    Rng rng(7);
    const Network net = make_network(small_topology(), rng);
    Rng data_rng(8);
    StackCache cache;
    (void)extract_features(random_matrix(3, 3, data_rng), net.extractor, &cache);
    CHECK_THROWS_AS(extractor_backward(Matrix(5, 4), net.extractor, cache), StateError);
    CHECK_THROWS_AS(extractor_backward(Matrix(3, 4), net.extractor, StackCache{}), StateError);
}

TEST_CASE("classifier gradients match finite differences through the cache path") {
    Rng rng(9);
    Network net = make_network(small_topology(), rng);
    randomize_biases(net, rng);
    Rng data_rng(10);
    const Matrix x = random_matrix(3, 3, data_rng);
    const std::vector<int> labels{0, 1, 0};

    const auto loss_fn = [&] {
        const Matrix f = extract_features(x, net.extractor, nullptr);
        const Matrix logits = classify(f, net.classifier, nullptr);
        return softmax_cross_entropy(logits, labels).loss;
    };

    StackCache ext_cache;
    StackCache cls_cache;
    const Matrix f = extract_features(x, net.extractor, &ext_cache);
    const Matrix logits = classify(f, net.classifier, &cls_cache);
    const auto ce = softmax_cross_entropy(logits, labels);
    const StackBackward cls_bwd = classifier_backward(ce.grad_logits, net.classifier, cls_cache);
    const StackBackward ext_bwd = extractor_backward(cls_bwd.grad_input, net.extractor, ext_cache);

    std::vector<ParamView> views;
    std::vector<Matrix> grads_w;
    std::vector<std::vector<double>> grads_b;
    const auto collect = [&](Stack& stack, const StackGrads& grads) {
        for (std::size_t i = 0; i < stack.layers.size(); ++i) {
            grads_w.push_back(grads.grad_weights[i]);
            grads_b.push_back(grads.grad_bias[i]);
        }
    };
    collect(net.extractor, ext_bwd.grads);
    collect(net.classifier, cls_bwd.grads);
    std::size_t idx = 0;
    for (Stack* stack : {&net.extractor, &net.classifier}) {
        for (DenseLayer& layer : stack->layers) {
            views.push_back({std::span<double>(layer.weights.data),
                             std::span<const double>(grads_w[idx].data)});
            views.push_back({std::span<double>(layer.bias),
                             std::span<const double>(grads_b[idx])});
            ++idx;
        }
    }
    CHECK(finite_difference_check(loss_fn, views, 1e-5) < 1e-4);
}

TEST_CASE("discriminator forward needs one mask per hidden layer") {
    Rng rng(11);
    const Network net = make_network(small_topology(), rng);
    Rng mask_rng(12);
    const std::vector<DropoutMask> masks = sample_discriminator_masks(net, mask_rng);
    REQUIRE(masks.size() == 1);
    CHECK(masks[0].keep.size() == 5);
    const Matrix logits = discriminator_forward(Matrix(4, 4), net.discriminator, masks, nullptr);
    CHECK(logits.rows == 4);
    CHECK(logits.cols == 1);
    CHECK_THROWS_AS(discriminator_forward(Matrix(4, 4), net.discriminator, {}, nullptr),
                    DimensionError);
}

TEST_CASE("discriminator gradients match finite differences with frozen masks") {
    Rng rng(13);
    Network net = make_network(small_topology(), rng);
    randomize_biases(net, rng);
    Rng mask_rng(14);
    const std::vector<DropoutMask> masks = sample_discriminator_masks(net, mask_rng);
    Rng data_rng(15);
    const Matrix features = random_matrix(4, 4, data_rng);
    const std::vector<int> targets{0, 0, 1, 1};

    const auto loss_fn = [&] {
        const Matrix z = discriminator_forward(features, net.discriminator, masks, nullptr);
        return sigmoid_bce(z, targets).loss;
    };

    DiscPassCache cache;
    const Matrix z = discriminator_forward(features, net.discriminator, masks, &cache);
    const auto bce = sigmoid_bce(z, targets);
    const StackBackward bwd = discriminator_backward(bce.grad_logits, net.discriminator, cache);

    std::vector<ParamView> views;
    for (std::size_t i = 0; i < net.discriminator.layers.size(); ++i) {
        views.push_back({std::span<double>(net.discriminator.layers[i].weights.data),
                         std::span<const double>(bwd.grads.grad_weights[i].data)});
        views.push_back({std::span<double>(net.discriminator.layers[i].bias),
                         std::span<const double>(bwd.grads.grad_bias[i])});
    }
    CHECK(finite_difference_check(loss_fn, views, 1e-5) < 1e-4);
}

TEST_CASE("mc ensemble draws fresh masks per pass") {
    Rng rng(16);
    Network net = make_network(small_topology(), rng);
    Rng data_rng(17);
    const Matrix features = random_matrix(6, 4, data_rng);
    Rng mc_rng(18);
    const McOutput out = discriminate_mc(features, net, 8, mc_rng);
    REQUIRE(out.logits.size() == 8);
    REQUIRE(out.caches.size() == 8);
    bool any_mask_differs = false;
    for (std::size_t j = 1; j < 8; ++j) {
        if (out.caches[j].masks[0].keep != out.caches[0].masks[0].keep) {
            any_mask_differs = true;
        }
    }
    CHECK(any_mask_differs);
    Rng zero_rng(19);
    CHECK_THROWS_AS(discriminate_mc(features, net, 0, zero_rng), ValidationError);
}

TEST_CASE("mc ensemble is deterministic given the rng seed") {
    Rng rng(20);
    Network net = make_network(small_topology(), rng);
    Rng data_rng(21);
    const Matrix features = random_matrix(5, 4, data_rng);
    Rng r1(99);
    Rng r2(99);
    const McOutput a = discriminate_mc(features, net, 4, r1);
    const McOutput b = discriminate_mc(features, net, 4, r2);
    for (std::size_t j = 0; j < 4; ++j) CHECK(same_bits(a.logits[j], b.logits[j]));
}

TEST_CASE("mc output variance is the unbiased per-row sample variance") {
    const std::vector<Matrix> spread{Matrix::from_rows({{0.0}}), Matrix::from_rows({{1.0}}),
                                     Matrix::from_rows({{2.0}})};
    CHECK(mc_output_variance(spread) == 1.0);
    const std::vector<Matrix> equal{Matrix::from_rows({{3.0}}), Matrix::from_rows({{3.0}})};
    CHECK(mc_output_variance(equal) == 0.0);
    CHECK_THROWS_AS(mc_output_variance({Matrix(1, 1)}), ValidationError);
    CHECK_THROWS_AS(mc_output_variance({}), ValidationError);
}

TEST_CASE("zero dropout collapses the ensemble to one deterministic pass") {
    Topology t = small_topology();
    t.dropout_rate = 0.0;
    Rng rng(22);
    Network net = make_network(t, rng);
    Rng data_rng(23);
    const Matrix features = random_matrix(6, 4, data_rng);
    Rng mc_rng(24);
    const McOutput out = discriminate_mc(features, net, 16, mc_rng);
    for (std::size_t j = 1; j < 16; ++j) CHECK(same_bits(out.logits[j], out.logits[0]));
    CHECK(mc_output_variance(out.logits) == 0.0);
}

TEST_CASE("argmax_rows takes the first maximum") {
    const Matrix logits = Matrix::from_rows({{1.0, 1.0}, {0.5, 2.0}, {3.0, -1.0}});
    CHECK(argmax_rows(logits) == std::vector<int>{0, 1, 0});
    CHECK_THROWS_AS(argmax_rows(Matrix(2, 0)), ValidationError);
}

TEST_CASE("grad accumulation and scaling act elementwise") {
    Rng rng(25);
    Network net = make_network(small_topology(), rng);
    StackGrads acc = zero_grads_like(net.discriminator);
    REQUIRE(acc.grad_weights.size() == 2);
    CHECK(frobenius_norm(acc.grad_weights[0]) == 0.0);

    Rng mask_rng(26);
    const std::vector<DropoutMask> masks = sample_discriminator_masks(net, mask_rng);
    Rng data_rng(27);
    DiscPassCache cache;
    const Matrix z =
        discriminator_forward(random_matrix(3, 4, data_rng), net.discriminator, masks, &cache);
    const auto bce = sigmoid_bce(z, {0, 1, 0});
    const StackBackward bwd = discriminator_backward(bce.grad_logits, net.discriminator, cache);
    accumulate(acc, bwd);
    accumulate(acc, bwd);
    scale(acc, 0.5);
    for (std::size_t i = 0; i < acc.grad_weights.size(); ++i) {
        CHECK(same_bits(acc.grad_weights[i], bwd.grads.grad_weights[i]));
    }
}

TEST_CASE("checkpoint round trip preserves every parameter bit") {
    Rng rng(28);
    Network net = make_network(small_topology(), rng);
    randomize_biases(net, rng);
    TempFile tmp("roundtrip.txt");
    save_checkpoint(net, tmp.path);
    const Network loaded = load_checkpoint(tmp.path);
    CHECK(loaded.topology.input_dim == net.topology.input_dim);
    CHECK(loaded.topology.dropout_rate == net.topology.dropout_rate);
    CHECK(loaded.topology.extractor_hidden == net.topology.extractor_hidden);
    CHECK(same_params(loaded.extractor, net.extractor));
    CHECK(same_params(loaded.classifier, net.classifier));
    CHECK(same_params(loaded.discriminator, net.discriminator));
}

TEST_CASE("checkpoint loader rejects missing and malformed files") {
    CHECK_THROWS_AS(load_checkpoint("/tmp/dda_nettest_does_not_exist"), IoError);
    TempFile tmp("garbage.txt");
    {
        std::ofstream out(tmp.path);
        out << "not a checkpoint\n";
    }
    CHECK_THROWS_AS(load_checkpoint(tmp.path), ParseError);
}

TEST_CASE("checkpoint loader rejects a truncated file") {
    Rng rng(29);
    Network net = make_network(small_topology(), rng);
    TempFile full("full.txt");
    save_checkpoint(net, full.path);
    std::ifstream in(full.path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    TempFile cut("truncated.txt");
    {
        std::ofstream out(cut.path);
        out << contents.substr(0, contents.size() / 2);
    }
    CHECK_THROWS_AS(load_checkpoint(cut.path), ParseError);
}
