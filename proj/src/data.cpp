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

#include "dda/data.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "dda/errors.hpp"
#include "dda/textio.hpp"

namespace dda::data {

std::string domain_name(Domain domain) {
    return domain == Domain::source ? "source" : "target";
}

Domain parse_domain(const std::string& name, const std::string& context) {
    if (name == "source") return Domain::source;
    if (name == "target") return Domain::target;
    throw ParseError(context + ": unknown domain '" + name + "'");
}

void Dataset::validate() const {
    if (has_labels()) {
        if (labels.size() != features.rows) {
            throw ValidationError("dataset: " + std::to_string(labels.size()) + " labels for " +
                                  std::to_string(features.rows) + " rows");
        }
        for (int y : labels) {
            if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
                throw ValidationError("dataset: label " + std::to_string(y) +
                                      " outside [0, " + std::to_string(n_classes) + ")");
            }
        }
    }
}

bool operator==(const Dataset& a, const Dataset& b) {
    return a.features == b.features && a.labels == b.labels && a.domain_tag == b.domain_tag;
}

Dataset make_two_moons(std::size_t n, double noise, Rng& rng) {
    if (n < 2) throw ValidationError("make_two_moons: need at least 2 points");
    if (noise < 0.0) throw ValidationError("make_two_moons: noise must be >= 0");
    const std::size_t n_outer = n - n / 2;
    const std::size_t n_inner = n / 2;
    Dataset ds;
    ds.features = Matrix(n, 2);
    ds.labels.resize(n);
    ds.n_classes = 2;
    auto angle = [](std::size_t i, std::size_t count) {
        // Evenly spaced over [0, pi]; a single point sits at 0.
        return count > 1 ? std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(count - 1)
                         : 0.0;
    };
    for (std::size_t i = 0; i < n_outer; ++i) {
        const double t = angle(i, n_outer);
        ds.features(i, 0) = std::cos(t) + rng.normal(0.0, noise);
        ds.features(i, 1) = std::sin(t) + rng.normal(0.0, noise);
        ds.labels[i] = 0;
    }
    for (std::size_t i = 0; i < n_inner; ++i) {
        const double t = angle(i, n_inner);
        const std::size_t r = n_outer + i;
        ds.features(r, 0) = 1.0 - std::cos(t) + rng.normal(0.0, noise);
        ds.features(r, 1) = 0.5 - std::sin(t) + rng.normal(0.0, noise);
        ds.labels[r] = 1;
    }
    return ds;
}

Dataset make_blobs(std::size_t n, std::size_t n_classes,
                   const std::vector<std::vector<double>>& means, double stddev, Rng& rng) {
    if (n_classes == 0) throw ValidationError("make_blobs: n_classes must be >= 1");
    if (means.size() != n_classes) {
        throw ValidationError("make_blobs: got " + std::to_string(means.size()) +
                              " means for " + std::to_string(n_classes) + " classes");
    }
    if (n < n_classes) throw ValidationError("make_blobs: need at least one point per class");
    if (stddev < 0.0) throw ValidationError("make_blobs: stddev must be >= 0");
    const std::size_t dim = means[0].size();
    if (dim == 0) throw ValidationError("make_blobs: mean vectors must be non-empty");
    for (const auto& m : means) {
        if (m.size() != dim) throw ValidationError("make_blobs: mean vectors differ in length");
    }
    Dataset ds;
    ds.features = Matrix(n, dim);
    ds.labels.resize(n);
    ds.n_classes = n_classes;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        // Earlier classes absorb the remainder, keeping counts within one.
        std::size_t count = n / n_classes + (c < n % n_classes ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i, ++row) {
            for (std::size_t d = 0; d < dim; ++d) {
                ds.features(row, d) = means[c][d] + rng.normal(0.0, stddev);
            }
            ds.labels[row] = static_cast<int>(c);
        }
    }
    return ds;
}

double normalize_rotation_angle(double degrees) {
    if (!std::isfinite(degrees)) {
        throw ValidationError("rotation angle must be finite");
    }
    double a = std::fmod(degrees, 360.0);
    if (a > 180.0) a -= 360.0;
    if (a <= -180.0) a += 360.0;
    return a;
}

Dataset apply_shift(const Dataset& ds, const ShiftSpec& spec) {
    Dataset out = ds;
    out.domain_tag = Domain::target;
    if (spec.kind == ShiftSpec::Kind::rotation) {
        if (ds.features.cols != 2) {
            throw ValidationError("apply_shift: rotation needs 2-D features, got " +
                                  std::to_string(ds.features.cols) + " columns");
        }
        const double theta =
            normalize_rotation_angle(spec.angle_degrees) * std::numbers::pi / 180.0;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (std::size_t r = 0; r < ds.features.rows; ++r) {
            const double x = ds.features(r, 0);
            const double y = ds.features(r, 1);
            out.features(r, 0) = x * c - y * s;
            out.features(r, 1) = x * s + y * c;
        }
    } else {
        if (spec.offset.size() != ds.features.cols) {
            throw ValidationError("apply_shift: offset length " +
                                  std::to_string(spec.offset.size()) + " for " +
                                  std::to_string(ds.features.cols) + " feature columns");
        }
        for (std::size_t r = 0; r < ds.features.rows; ++r) {
            for (std::size_t c = 0; c < ds.features.cols; ++c) {
                out.features(r, c) += spec.offset[c];
            }
        }
    }
    return out;
}

Dataset strip_labels(const Dataset& ds) {
    Dataset out = ds;
    out.labels.clear();
    return out;
}

void save_csv(const Dataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (std::size_t c = 0; c < ds.features.cols; ++c) out << 'f' << c << ',';
    out << "label,domain\n";
    const std::string domain = domain_name(ds.domain_tag);
    for (std::size_t r = 0; r < ds.features.rows; ++r) {
        for (std::size_t c = 0; c < ds.features.cols; ++c) {
            out << fmt_double(ds.features(r, c)) << ',';
        }
        if (ds.has_labels()) out << ds.labels[r];
        out << ',' << domain << '\n';
    }
    if (!out) throw IoError("failed while writing: " + path);
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const std::vector<std::string> header = split(trim(line), ',');
    if (header.size() < 3 || header[header.size() - 2] != "label" ||
        header[header.size() - 1] != "domain") {
        throw ParseError(path + ":1: header must end with 'label,domain'");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t c = 0; c < dim; ++c) {
        if (header[c] != "f" + std::to_string(c)) {
            throw ParseError(path + ":1: expected feature column 'f" + std::to_string(c) +
                             "', found '" + header[c] + "'");
        }
    }

    std::vector<double> values;
    std::vector<int> labels;
    bool any_unlabeled = false;
    bool domain_set = false;
    Domain domain = Domain::source;
    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        const std::vector<std::string> cells = split(stripped, ',');
        if (cells.size() != dim + 2) {
            throw ParseError(context + ": expected " + std::to_string(dim + 2) +
                             " cells, got " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < dim; ++c) {
            values.push_back(parse_double(cells[c], context));
        }
        const std::string label_cell = trim(cells[dim]);
        if (label_cell.empty()) {
            any_unlabeled = true;
        } else {
            const long y = parse_long(label_cell, context);
            if (y < 0) throw ParseError(context + ": negative label");
            labels.push_back(static_cast<int>(y));
        }
        const Domain row_domain = parse_domain(trim(cells[dim + 1]), context);
        if (domain_set && row_domain != domain) {
            throw ValidationError(context + ": mixed source/target rows in one file");
        }
        domain = row_domain;
        domain_set = true;
        ++rows;
    }
    if (rows == 0) throw ParseError(path + ": no data rows");
    if (any_unlabeled && !labels.empty()) {
        throw ValidationError(path + ": mixed labeled and unlabeled rows");
    }
    if (domain == Domain::source && labels.empty()) {
        throw ValidationError(path + ": source data must carry labels");
    }

    Dataset ds;
    ds.features = Matrix(rows, dim);
    ds.features.data = std::move(values);
    ds.labels = std::move(labels);
    ds.domain_tag = domain;
    if (ds.has_labels()) {
        int max_label = 0;
        for (int y : ds.labels) max_label = std::max(max_label, y);
        ds.n_classes = static_cast<std::size_t>(max_label) + 1;
    }
    ds.validate();
    return ds;
}

std::vector<DomainBatch> batch_iter(const Dataset& source, const Dataset& target,
                                    std::size_t batch_size, Rng& rng, bool shuffle) {
    if (source.n_rows() == 0 || target.n_rows() == 0) {
        throw ValidationError("batch_iter: both domains must be non-empty");
    }
    if (!source.has_labels()) throw ValidationError("batch_iter: source labels required");
    if (batch_size == 0) throw ValidationError("batch_iter: batch_size must be >= 1");
    if (batch_size > source.n_rows() || batch_size > target.n_rows()) {
        throw ValidationError("batch_iter: batch_size " + std::to_string(batch_size) +
                              " exceeds a dataset of " +
                              std::to_string(std::min(source.n_rows(), target.n_rows())) +
                              " rows");
    }
    if (source.n_features() != target.n_features()) {
        throw DimensionError("batch_iter: feature dims differ (" +
                             std::to_string(source.n_features()) + " vs " +
                             std::to_string(target.n_features()) + ")");
    }

    std::vector<std::size_t> s_order(source.n_rows());
    std::vector<std::size_t> t_order(target.n_rows());
    for (std::size_t i = 0; i < s_order.size(); ++i) s_order[i] = i;
    for (std::size_t i = 0; i < t_order.size(); ++i) t_order[i] = i;
    if (shuffle) {
        rng.shuffle(s_order);
        rng.shuffle(t_order);
    }

    const std::size_t steps = std::max(source.n_rows(), target.n_rows()) / batch_size;
    std::vector<DomainBatch> batches;
    batches.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        DomainBatch batch;
        batch.source_x = Matrix(batch_size, source.n_features());
        batch.target_x = Matrix(batch_size, target.n_features());
        batch.source_y.resize(batch_size);
        for (std::size_t i = 0; i < batch_size; ++i) {
            const std::size_t si = s_order[(s * batch_size + i) % s_order.size()];
            const std::size_t ti = t_order[(s * batch_size + i) % t_order.size()];
            for (std::size_t c = 0; c < source.n_features(); ++c) {
                batch.source_x(i, c) = source.features(si, c);
                batch.target_x(i, c) = target.features(ti, c);
            }
            batch.source_y[i] = source.labels[si];
        }
        batch.domain_labels.assign(batch_size, 0);
        batch.domain_labels.insert(batch.domain_labels.end(), batch_size, 1);
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace dda::data
