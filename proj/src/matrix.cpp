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

#include "dda/matrix.hpp"

#include <cmath>

#include "dda/errors.hpp"

namespace dda {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rws) {
    Matrix m;
    m.rows = rws.size();
    m.cols = rws.size() == 0 ? 0 : rws.begin()->size();
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : rws) {
        if (row.size() != m.cols) {
            throw DimensionError("from_rows: ragged rows (" + std::to_string(row.size()) +
                                 " vs " + std::to_string(m.cols) + ")");
        }
        m.data.insert(m.data.end(), row.begin(), row.end());
    }
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw DimensionError("matmul: " + a.shape_str() + " * " + b.shape_str());
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) {
        throw DimensionError("matmul_nt: " + a.shape_str() + " * " + b.shape_str() + "^T");
    }
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.rows; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) {
                acc += a(i, k) * b(j, k);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) {
        throw DimensionError("matmul_tn: " + a.shape_str() + "^T * " + b.shape_str());
    }
    Matrix out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = a(k, i);
            if (aki == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out(i, j) += aki * b(k, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols && a.rows != 0 && b.rows != 0) {
        throw DimensionError("vstack: " + a.shape_str() + " on " + b.shape_str());
    }
    Matrix out(a.rows + b.rows, a.rows != 0 ? a.cols : b.cols);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    return out;
}

Matrix row_slice(const Matrix& m, std::size_t begin, std::size_t end) {
    if (begin > end || end > m.rows) {
        throw DimensionError("row_slice: [" + std::to_string(begin) + ", " + std::to_string(end) +
                             ") of " + m.shape_str());
    }
    Matrix out(end - begin, m.cols);
    std::copy(m.data.begin() + static_cast<std::ptrdiff_t>(begin * m.cols),
              m.data.begin() + static_cast<std::ptrdiff_t>(end * m.cols), out.data.begin());
    return out;
}

std::vector<double> column_sum(const Matrix& m) {
    std::vector<double> out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            out[j] += m(i, j);
        }
    }
    return out;
}

void axpy(Matrix& out, const Matrix& m, double scale) {
    if (!out.same_shape(m)) {
        throw DimensionError("axpy: " + out.shape_str() + " += s*" + m.shape_str());
    }
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] += scale * m.data[i];
    }
}

void scale_inplace(Matrix& m, double scale) {
    for (double& v : m.data) v *= scale;
}

double frobenius_norm(const Matrix& m) {
    double acc = 0.0;
    for (double v : m.data) acc += v * v;
    return std::sqrt(acc);
}

bool all_finite(const Matrix& m) {
    for (double v : m.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void ensure_finite(const Matrix& m, const std::string& context) {
    if (!all_finite(m)) {
        throw ValidationError(context + ": non-finite value");
    }
}

void ensure_finite(double v, const std::string& context) {
    if (!std::isfinite(v)) {
        throw ValidationError(context + ": non-finite value");
    }
}

}  // namespace dda
