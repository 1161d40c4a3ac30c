#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "advreg/errors.hpp"

namespace advreg {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Everything in this project runs in
// 64-bit precision so finite-difference gradient checks stay meaningful.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) throw DimensionError("ragged initializer rows");
            std::size_t c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    Vector& data() { return data_; }
    const Vector& data() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

inline void add_scaled(Matrix& dst, const Matrix& src, double s) {
    if (!dst.same_shape(src)) throw DimensionError("add_scaled: shape mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] += s * src.data()[i];
}

inline void add_scaled(Vector& dst, const Vector& src, double s) {
    if (dst.size() != src.size()) throw DimensionError("add_scaled: length mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
}

inline void scale_inplace(Matrix& m, double s) {
    for (double& v : m.data()) v *= s;
}

// dst *= mask, elementwise.
inline void mask_inplace(Matrix& dst, const Matrix& mask) {
    if (!dst.same_shape(mask)) throw DimensionError("mask_inplace: shape mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] *= mask.data()[i];
}

inline double l2_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

inline double l2_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s = std::max(s, std::fabs(v));
    return s;
}

inline bool all_finite(const Matrix& m) {
    for (double v : m.data())
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace advreg
