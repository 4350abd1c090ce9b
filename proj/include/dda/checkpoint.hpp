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

// Plain-text network snapshot. Numbers are written with 17 significant
// digits, so save followed by load reproduces every parameter bit for bit.
//
// Layout:
//   dda-checkpoint v1
//   input_dim <n>
//   n_classes <n>
//   dropout_rate <v>
//   extractor_hidden <w...>        (possibly no widths)
//   classifier_hidden <w...>
//   discriminator_hidden <w...>
//   array <name> <rows> <cols>     (row-major values, one row per line)
//   ...
//
// Arrays appear in a fixed order: per sub-network and layer index,
// "<part>.<i>.weights" then "<part>.<i>.bias" (bias as a 1 x n row).

#pragma once

#include <string>

#include "dda/network.hpp"

namespace dda::net {

void save_checkpoint(const Network& network, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace dda::net
