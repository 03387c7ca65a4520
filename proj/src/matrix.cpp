#include "qchaos/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qchaos/errors.hpp"

namespace qchaos {

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw InvalidInput("matrix product: inner dimensions differ");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {
    if (dim == 0) throw InvalidInput("SymmetricMatrix: dimension must be at least 1");
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
    SymmetricMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
    return m;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
    SymmetricMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymmetricMatrix SymmetricMatrix::from_lower(const Matrix& full) {
    if (full.rows() != full.cols()) throw InvalidInput("SymmetricMatrix: source matrix is not square");
    SymmetricMatrix m(full.rows());
    for (std::size_t i = 0; i < full.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) m.set(i, j, full(i, j));
    return m;
}

Matrix SymmetricMatrix::dense() const {
    Matrix out(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            out(i, j) = at(i, j);
            out(j, i) = at(i, j);
        }
    return out;
}

bool SymmetricMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double SymmetricMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double SymmetricMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double x = at(i, j);
            s += (i == j ? 1.0 : 2.0) * x * x;
        }
    return std::sqrt(s);
}

SymmetricMatrix SymmetricMatrix::plus_scaled(const SymmetricMatrix& other, double scale) const {
    if (other.dim_ != dim_) throw InvalidInput("SymmetricMatrix: dimension mismatch in sum");
    SymmetricMatrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += scale * other.data_[k];
    return out;
}

SymmetricMatrix SymmetricMatrix::congruence(const Matrix& q) const {
    if (q.rows() != dim_ || q.cols() != dim_) throw InvalidInput("SymmetricMatrix: congruence dimension mismatch");
    const Matrix aq = dense() * q;
    SymmetricMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) s += q(k, i) * aq(k, j);
            out.set(i, j, s);
        }
    return out;
}

}  // namespace qchaos
