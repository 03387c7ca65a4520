#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qchaos {

/// Row-major dense real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t dim);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Dense real symmetric matrix. Only the lower triangle is stored, so
/// at(i, j) == at(j, i) holds bit-for-bit.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t dim);

    static SymmetricMatrix diagonal(std::span<const double> diag);
    static SymmetricMatrix identity(std::size_t dim);
    /// Reads the lower triangle of a square matrix.
    static SymmetricMatrix from_lower(const Matrix& full);

    std::size_t dim() const noexcept { return dim_; }

    double at(std::size_t i, std::size_t j) const noexcept {
        return i >= j ? data_[offset(i) + j] : data_[offset(j) + i];
    }
    void set(std::size_t i, std::size_t j, double value) noexcept {
        if (i >= j)
            data_[offset(i) + j] = value;
        else
            data_[offset(j) + i] = value;
    }
    void add(std::size_t i, std::size_t j, double value) noexcept {
        if (i >= j)
            data_[offset(i) + j] += value;
        else
            data_[offset(j) + i] += value;
    }

    Matrix dense() const;

    bool all_finite() const noexcept;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

    /// this + scale * other
    SymmetricMatrix plus_scaled(const SymmetricMatrix& other, double scale) const;
    /// Qᵀ · this · Q for a square Q of matching dimension.
    SymmetricMatrix congruence(const Matrix& q) const;

    bool operator==(const SymmetricMatrix&) const = default;

private:
    static std::size_t offset(std::size_t row) noexcept { return row * (row + 1) / 2; }

    std::size_t dim_;
    std::vector<double> data_;
};

}  // namespace qchaos
