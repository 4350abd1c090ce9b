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
#include <initializer_list>
#include <string>
#include <vector>

namespace dda {

/// Dense row-major 2-D array of doubles. The universal value/gradient carrier.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    /// Build from nested braces; every row must have the same length.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rws);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
    std::string shape_str() const;
};

bool operator==(const Matrix& a, const Matrix& b);

/// a (n x m) * b (m x p) -> n x p
Matrix matmul(const Matrix& a, const Matrix& b);
/// a (n x m) * b^T, b is (p x m) -> n x p
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// a^T * b, a is (m x n), b is (m x p) -> n x p
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

/// Stack a on top of b (column counts must match).
Matrix vstack(const Matrix& a, const Matrix& b);
/// Copy of rows [begin, end).
Matrix row_slice(const Matrix& m, std::size_t begin, std::size_t end);

/// Sum over rows -> vector of length cols.
std::vector<double> column_sum(const Matrix& m);

/// out += scale * m, elementwise.
void axpy(Matrix& out, const Matrix& m, double scale);
void scale_inplace(Matrix& m, double scale);

double frobenius_norm(const Matrix& m);
bool all_finite(const Matrix& m);
/// Throws ValidationError naming `context` if any element is NaN/Inf.
void ensure_finite(const Matrix& m, const std::string& context);
void ensure_finite(double v, const std::string& context);

}  // namespace dda
