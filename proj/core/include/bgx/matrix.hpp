#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bgx {

/// Row-major dense matrix of doubles. Deliberately minimal: the training
/// stack only needs products, transposed products and elementwise work at
/// widths of a few dozen.
struct Matrix {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    bool empty() const { return data.empty(); }

    static Matrix zeros_like(const Matrix& o) { return Matrix(o.rows, o.cols); }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    Matrix& operator+=(const Matrix& o) {
        assert(same_shape(o));
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
};

/// a[r×k] · b[k×c]
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            double av = a.at(i, k);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) += av * b.at(k, j);
        }
    return out;
}

/// aᵀ[c×r] · b[r×c2]
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw std::invalid_argument("matmul_tn shape mismatch");
    Matrix out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k)
        for (std::size_t i = 0; i < a.cols; ++i) {
            double av = a.at(k, i);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) += av * b.at(k, j);
        }
    return out;
}

/// a[r×k] · bᵀ[k×c] with b[c×k]
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw std::invalid_argument("matmul_nt shape mismatch");
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.rows; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(j, k);
            out.at(i, j) = acc;
        }
    return out;
}

/// Column-wise concatenation; all inputs must share the row count.
inline Matrix hconcat(const std::vector<const Matrix*>& parts) {
    if (parts.empty()) return {};
    std::size_t rows = parts[0]->rows, cols = 0;
    for (const Matrix* m : parts) {
        if (m->rows != rows) throw std::invalid_argument("hconcat row mismatch");
        cols += m->cols;
    }
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t off = 0;
        for (const Matrix* m : parts) {
            for (std::size_t j = 0; j < m->cols; ++j) out.at(i, off + j) = m->at(i, j);
            off += m->cols;
        }
    }
    return out;
}

}  // namespace bgx
