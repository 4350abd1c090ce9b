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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dda {

// Formats with 17 significant digits so the printed text parses back to the
// bit-identical double. All on-disk numbers go through this.
std::string fmt_double(double v);

// Strict parse of a full token; context names the file/field for the error.
double parse_double(const std::string& token, const std::string& context);
long parse_long(const std::string& token, const std::string& context);

std::vector<std::string> split(const std::string& line, char sep);
std::string trim(const std::string& s);

}  // namespace dda
