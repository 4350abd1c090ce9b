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

#include "dda/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dda/errors.hpp"
#include "dda/textio.hpp"

namespace dda::net {

namespace {

constexpr const char* kMagic = "dda-checkpoint v1";

void write_widths(std::ostream& out, const char* key, const std::vector<std::size_t>& widths) {
    out << key;
    for (std::size_t w : widths) out << ' ' << w;
    out << '\n';
}

void write_array(std::ostream& out, const std::string& name, const Matrix& m) {
    out << "array " << name << ' ' << m.rows << ' ' << m.cols << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out << ' ';
            out << fmt_double(m(r, c));
        }
        out << '\n';
    }
}

void write_stack(std::ostream& out, const std::string& part, const Stack& stack) {
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const DenseLayer& layer = stack.layers[i];
        const std::string prefix = part + "." + std::to_string(i) + ".";
        write_array(out, prefix + "weights", layer.weights);
        Matrix bias_row(1, layer.bias.size());
        bias_row.data = layer.bias;
        write_array(out, prefix + "bias", bias_row);
    }
}

// Reads one line, tracking the number for error messages.
class LineReader {
public:
    LineReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

    std::string next() {
        std::string line;
        if (!std::getline(in_, line)) {
            throw ParseError(path_ + ": unexpected end of file at line " +
                             std::to_string(line_no_ + 1));
        }
        ++line_no_;
        return trim(line);
    }

    std::string context() const { return path_ + ":" + std::to_string(line_no_); }

private:
    std::istream& in_;
    std::string path_;
    std::size_t line_no_ = 0;
};

std::vector<std::size_t> read_widths(LineReader& reader, const std::string& key) {
    const std::vector<std::string> toks = split(reader.next(), ' ');
    if (toks.empty() || toks[0] != key) {
        throw ParseError(reader.context() + ": expected '" + key + "' line");
    }
    std::vector<std::size_t> widths;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].empty()) continue;
        const long w = parse_long(toks[i], reader.context());
        if (w <= 0) throw ParseError(reader.context() + ": width must be positive");
        widths.push_back(static_cast<std::size_t>(w));
    }
    return widths;
}

std::size_t read_scalar_size(LineReader& reader, const std::string& key) {
    const std::vector<std::string> toks = split(reader.next(), ' ');
    if (toks.size() != 2 || toks[0] != key) {
        throw ParseError(reader.context() + ": expected '" + key + " <n>' line");
    }
    const long v = parse_long(toks[1], reader.context());
    if (v < 0) throw ParseError(reader.context() + ": " + key + " must be non-negative");
    return static_cast<std::size_t>(v);
}

Matrix read_array(LineReader& reader, const std::string& expected_name) {
    const std::vector<std::string> toks = split(reader.next(), ' ');
    if (toks.size() != 4 || toks[0] != "array") {
        throw ParseError(reader.context() + ": expected 'array' header");
    }
    if (toks[1] != expected_name) {
        throw ParseError(reader.context() + ": expected array '" + expected_name + "', found '" +
                         toks[1] + "'");
    }
    const long rows = parse_long(toks[2], reader.context());
    const long cols = parse_long(toks[3], reader.context());
    if (rows < 0 || cols < 0) throw ParseError(reader.context() + ": negative array shape");
    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t r = 0; r < m.rows; ++r) {
        const std::vector<std::string> vals = split(reader.next(), ' ');
        if (vals.size() != m.cols) {
            throw ParseError(reader.context() + ": expected " + std::to_string(m.cols) +
                             " values, got " + std::to_string(vals.size()));
        }
        for (std::size_t c = 0; c < m.cols; ++c) {
            m(r, c) = parse_double(vals[c], reader.context());
        }
    }
    return m;
}

void read_stack(LineReader& reader, const std::string& part, Stack& stack) {
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        DenseLayer& layer = stack.layers[i];
        const std::string prefix = part + "." + std::to_string(i) + ".";
        const Matrix weights = read_array(reader, prefix + "weights");
        if (!weights.same_shape(layer.weights)) {
            throw ParseError(prefix + "weights: shape " + weights.shape_str() +
                             " does not match topology " + layer.weights.shape_str());
        }
        layer.weights = weights;
        const Matrix bias = read_array(reader, prefix + "bias");
        if (bias.rows != 1 || bias.cols != layer.bias.size()) {
            throw ParseError(prefix + "bias: shape " + bias.shape_str() +
                             " does not match topology 1x" + std::to_string(layer.bias.size()));
        }
        layer.bias = bias.data;
    }
}

}  // namespace

void save_checkpoint(const Network& network, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    out << kMagic << '\n';
    out << "input_dim " << network.topology.input_dim << '\n';
    out << "n_classes " << network.topology.n_classes << '\n';
    out << "dropout_rate " << fmt_double(network.topology.dropout_rate) << '\n';
    write_widths(out, "extractor_hidden", network.topology.extractor_hidden);
    write_widths(out, "classifier_hidden", network.topology.classifier_hidden);
    write_widths(out, "discriminator_hidden", network.topology.discriminator_hidden);
    write_stack(out, "extractor", network.extractor);
    write_stack(out, "classifier", network.classifier);
    write_stack(out, "discriminator", network.discriminator);
    if (!out) throw IoError("failed while writing checkpoint: " + path);
}

Network load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    LineReader reader(in, path);
    if (reader.next() != kMagic) {
        throw ParseError(path + ": not a checkpoint file (bad magic line)");
    }
    Topology topology;
    topology.input_dim = read_scalar_size(reader, "input_dim");
    topology.n_classes = read_scalar_size(reader, "n_classes");
    {
        const std::vector<std::string> toks = split(reader.next(), ' ');
        if (toks.size() != 2 || toks[0] != "dropout_rate") {
            throw ParseError(reader.context() + ": expected 'dropout_rate <v>' line");
        }
        topology.dropout_rate = parse_double(toks[1], reader.context());
    }
    topology.extractor_hidden = read_widths(reader, "extractor_hidden");
    topology.classifier_hidden = read_widths(reader, "classifier_hidden");
    topology.discriminator_hidden = read_widths(reader, "discriminator_hidden");
    topology.validate();

    // Build a correctly shaped network, then overwrite every parameter.
    Rng scratch(0);
    Network network = make_network(topology, scratch);
    read_stack(reader, "extractor", network.extractor);
    read_stack(reader, "classifier", network.classifier);
    read_stack(reader, "discriminator", network.discriminator);
    return network;
}

}  // namespace dda::net
