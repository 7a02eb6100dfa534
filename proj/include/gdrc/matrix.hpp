#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "gdrc/error.hpp"
#include "gdrc/kernels.hpp"

namespace gdrc {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != m.cols_) throw ShapeError("ragged initializer");
            std::size_t j = 0;
            for (double v : r) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    Vector operator*(const Vector& x) const {
        if (x.size() != cols_) throw ShapeError("gemv dimension mismatch");
        Vector y(rows_);
        kernels::gemv(data_.data(), rows_, cols_, x.data(), y.data());
        return y;
    }

    Matrix operator*(const Matrix& b) const {
        if (cols_ != b.rows_) throw ShapeError("gemm dimension mismatch");
        Matrix c(rows_, b.cols_);
        kernels::gemm_acc(data_.data(), b.data_.data(), c.data_.data(), rows_, cols_, b.cols_);
        return c;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    void add_scaled(const Matrix& other, double alpha) {
        if (other.rows_ != rows_ || other.cols_ != cols_) throw ShapeError("add dimension mismatch");
        kernels::axpy(alpha, other.data_.data(), data_.data(), data_.size());
    }

    void scale(double alpha) { kernels::scal(alpha, data_.data(), data_.size()); }

    double frobenius_norm() const { return std::sqrt(kernels::norm2sq(data_.data(), data_.size())); }

    bool is_symmetric(double tol) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    // Columns [c0, c1) as a new matrix.
    Matrix columns(std::size_t c0, std::size_t c1) const {
        if (c0 > c1 || c1 > cols_) throw RangeError("column slice out of range");
        Matrix s(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j) s(i, j - c0) = (*this)(i, j);
        return s;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ShapeError("dot dimension mismatch");
    return kernels::dot(a.data(), b.data(), a.size());
}

inline double norm2(const Vector& a) { return std::sqrt(kernels::norm2sq(a.data(), a.size())); }

inline double norm1(const Vector& a) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
}

inline double norm_inf(const Vector& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

// p in {1, 2, inf}; infinity encoded as 0 is not used, see NormOrder.
double norm_p(const Vector& a, int p);

}  // namespace gdrc
