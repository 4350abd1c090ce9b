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

// Synthetic two-domain benchmarks: generators, parametric domain shifts,
// CSV persistence, and deterministic source/target batching.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dda/matrix.hpp"
#include "dda/rng.hpp"

namespace dda::data {

enum class Domain { source, target };

std::string domain_name(Domain domain);
Domain parse_domain(const std::string& name, const std::string& context);

struct Dataset {
    Matrix features;
    std::vector<int> labels;  // empty when unlabeled
    Domain domain_tag = Domain::source;
    // Class count metadata; derived as max(label)+1 when loading from CSV,
    // 0 when unknown (unlabeled data).
    std::size_t n_classes = 0;

    bool has_labels() const { return !labels.empty(); }
    std::size_t n_rows() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    void validate() const;
};

// Equality over features, labels and domain tag. n_classes is metadata and
// deliberately excluded; a CSV round trip of unlabeled data cannot recover it.
bool operator==(const Dataset& a, const Dataset& b);

// Interleaved half-circles, 2-D, two classes, class-balanced (class 0 takes
// the extra point when n is odd). Gaussian noise with the given stddev is
// added per coordinate.
Dataset make_two_moons(std::size_t n, double noise, Rng& rng);

// Isotropic Gaussian cloud per class mean, class-balanced (earlier classes
// take the remainder when n is not divisible).
Dataset make_blobs(std::size_t n, std::size_t n_classes,
                   const std::vector<std::vector<double>>& means, double stddev, Rng& rng);

struct ShiftSpec {
    enum class Kind { rotation, translation };
    Kind kind = Kind::rotation;
    double angle_degrees = 0.0;       // rotation; normalized into (-180, 180]
    std::vector<double> offset;       // translation
};

// Wraps an angle into (-180, 180]; full turns come back as exactly 0.
double normalize_rotation_angle(double degrees);

// Produces the target-domain counterpart: rotation multiplies each 2-D row
// by the rotation matrix, translation adds the offset. Labels are carried
// over (evaluation copy); strip_labels takes the training copy.
Dataset apply_shift(const Dataset& ds, const ShiftSpec& spec);

Dataset strip_labels(const Dataset& ds);

// Header `f0,...,f{d-1},label,domain`; doubles carry 17 significant digits so
// a round trip is value-exact. One domain per file; the label cell is empty
// for unlabeled rows.
void save_csv(const Dataset& ds, const std::string& path);
Dataset load_csv(const std::string& path);

// One optimization step's worth of data: equal-sized draws from both
// domains with the 0 = source / 1 = target indicator vector.
struct DomainBatch {
    Matrix source_x;
    std::vector<int> source_y;
    Matrix target_x;
    std::vector<int> domain_labels;  // batch_size zeros then batch_size ones
};

// Materializes one epoch of batches: floor(max(n_s, n_t) / batch_size)
// steps, the shorter dataset cycling through its (shuffled) order. Partial
// batches are dropped. Source labels are required.
std::vector<DomainBatch> batch_iter(const Dataset& source, const Dataset& target,
                                    std::size_t batch_size, Rng& rng, bool shuffle);

}  // namespace dda::data
