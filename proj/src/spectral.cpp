#include "qchaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "qchaos/errors.hpp"

namespace qchaos {

ShellPartition::ShellPartition(std::size_t dim, std::vector<ShellGroup> groups)
    : dim_(dim), groups_(std::move(groups)), owner_(dim, std::numeric_limits<std::size_t>::max()) {
    if (dim == 0) throw InvalidInput("ShellPartition: empty basis");
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        const auto& grp = groups_[g];
        if (grp.indices.empty()) throw InvalidInput("ShellPartition: shell " + std::to_string(grp.label) + " is empty");
        if (!std::isfinite(grp.energy)) throw InvalidInput("ShellPartition: non-finite shell energy");
        if (g > 0 && !(grp.energy > groups_[g - 1].energy))
            throw InvalidInput("ShellPartition: shell energies must strictly increase");
        for (std::size_t h = 0; h < g; ++h)
            if (groups_[h].label == grp.label)
                throw InvalidInput("ShellPartition: duplicate shell label " + std::to_string(grp.label));
        for (std::size_t idx : grp.indices) {
            if (idx >= dim) throw InvalidInput("ShellPartition: basis index out of range");
            if (owner_[idx] != std::numeric_limits<std::size_t>::max())
                throw InvalidInput("ShellPartition: basis index " + std::to_string(idx) + " appears twice");
            owner_[idx] = g;
        }
    }
    for (std::size_t idx = 0; idx < dim; ++idx)
        if (owner_[idx] == std::numeric_limits<std::size_t>::max())
            throw InvalidInput("ShellPartition: basis index " + std::to_string(idx) + " is not covered");
}

bool ShellPartition::contains(int label) const noexcept {
    return std::any_of(groups_.begin(), groups_.end(), [&](const ShellGroup& g) { return g.label == label; });
}

std::size_t ShellPartition::position(int label) const {
    for (std::size_t g = 0; g < groups_.size(); ++g)
        if (groups_[g].label == label) return g;
    throw InvalidInput("ShellPartition: no shell labelled " + std::to_string(label));
}

double ShellPartition::nearest_gap(int label) const {
    const std::size_t g = position(label);
    double gap = std::numeric_limits<double>::infinity();
    if (g > 0) gap = std::min(gap, groups_[g].energy - groups_[g - 1].energy);
    if (g + 1 < groups_.size()) gap = std::min(gap, groups_[g + 1].energy - groups_[g].energy);
    if (!std::isfinite(gap)) throw InvalidInput("ShellPartition: a single shell has no neighbour spacing");
    return gap;
}

std::vector<double> ShellPartition::basis_energies() const {
    std::vector<double> e(dim_);
    for (std::size_t idx = 0; idx < dim_; ++idx) e[idx] = groups_[owner_[idx]].energy;
    return e;
}

namespace {

// Householder reduction to tridiagonal form. On return z holds the accumulated
// orthogonal transformation, d the diagonal and e the subdiagonal in e[1..n-1].
void tridiagonalize(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = z.rows();
    for (std::size_t j = 0; j < n; ++j) d[j] = z(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = z(i - 1, j);
                z(i, j) = 0.0;
                z(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                z(j, i) = f;
                g = e[j] + z(j, j) * f;
                for (std::size_t k = j + 1; k + 1 <= i; ++k) {
                    g += z(k, j) * d[k];
                    e[k] += z(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k + 1 <= i; ++k) z(k, j) -= (f * e[k] + g * d[k]);
                d[j] = z(i - 1, j);
                z(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        z(n - 1, i) = z(i, i);
        z(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = z(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += z(k, i + 1) * z(k, j);
                for (std::size_t k = 0; k <= i; ++k) z(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) z(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = z(n - 1, j);
        z(n - 1, j) = 0.0;
    }
    z(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). Rows of zt are the eigenvectors, so
// each plane rotation touches two contiguous rows.
void ql_implicit(Matrix& zt, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = zt.rows();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations)
                    throw ConvergenceError("eigh: implicit QL did not converge for a " + std::to_string(n) + "x" +
                                           std::to_string(n) + " matrix");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    const auto lo = zt.row(i);
                    const auto hi = zt.row(i + 1);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double t = hi[k];
                        hi[k] = s * lo[k] + c * t;
                        lo[k] = c * lo[k] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

SpectralDecomposition eigh(const SymmetricMatrix& m) {
    if (!m.all_finite()) throw InvalidInput("eigh: matrix has non-finite entries");
    const std::size_t n = m.dim();

    Matrix z = m.dense();
    std::vector<double> d(n), e(n);
    tridiagonalize(z, d, e);
    Matrix zt = z.transposed();
    ql_implicit(zt, d, e);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    SpectralDecomposition out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        out.eigenvalues[col] = d[src];
        for (std::size_t alpha = 0; alpha < n; ++alpha) out.eigenvectors(alpha, col) = zt(src, alpha);
    }
    return out;
}

DecompositionCheck check_decomposition(const SymmetricMatrix& m, const SpectralDecomposition& d) {
    const std::size_t n = m.dim();
    if (d.dim() != n) throw InvalidInput("check_decomposition: dimension mismatch");
    const Matrix& c = d.eigenvectors;
    DecompositionCheck out;

    for (std::size_t i = 1; i < n; ++i)
        if (d.eigenvalues[i] < d.eigenvalues[i - 1]) out.ascending = false;

    const Matrix ct = c.transposed();
    const Matrix gram = ct * c;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.orthogonality = std::max(out.orthogonality, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));

    for (std::size_t alpha = 0; alpha < n; ++alpha) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += c(alpha, i) * c(alpha, i);
        out.completeness = std::max(out.completeness, std::abs(s - 1.0));
    }

    const Matrix hc = m.dense() * c;
    const double fro = std::max(m.frobenius_norm(), std::numeric_limits<double>::min());
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t alpha = 0; alpha < n; ++alpha) {
            const double r = hc(alpha, i) - d.eigenvalues[i] * c(alpha, i);
            s += r * r;
        }
        out.residual = std::max(out.residual, std::sqrt(s) / fro);
    }

    const double hmax = std::max(m.max_abs(), std::numeric_limits<double>::min());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += c(a, i) * d.eigenvalues[i] * c(b, i);
            out.reconstruction = std::max(out.reconstruction, std::abs(s - m.at(a, b)) / hmax);
        }
    return out;
}

std::vector<double> projection_onto_subset(const SpectralDecomposition& d, std::span<const std::size_t> subset) {
    const std::size_t n = d.dim();
    for (std::size_t alpha : subset)
        if (alpha >= n)
            throw InvalidInput("projection_onto_subset: basis index " + std::to_string(alpha) + " out of range");
    std::vector<double> w(n, 0.0);
    for (std::size_t alpha : subset) {
        const auto row = d.eigenvectors.row(alpha);
        for (std::size_t i = 0; i < n; ++i) w[i] += row[i] * row[i];
    }
    return w;
}

namespace {

// Platform-independent standard normal draws: the engine is fully specified by
// the standard, the transform is spelled out here.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

void modified_gram_schmidt(std::vector<std::vector<double>>& cols) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double dot = 0.0;
            for (std::size_t r = 0; r < cols[j].size(); ++r) dot += cols[k][r] * cols[j][r];
            for (std::size_t r = 0; r < cols[j].size(); ++r) cols[j][r] -= dot * cols[k][r];
        }
        double norm = 0.0;
        for (double x : cols[j]) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericalError("random_block_unitary: rank-deficient Gaussian block");
        for (double& x : cols[j]) x /= norm;
    }
}

}  // namespace

Matrix random_block_unitary(const ShellPartition& p, std::uint64_t seed) {
    NormalStream normal(seed);
    Matrix u(p.dim(), p.dim());
    for (const auto& grp : p.groups()) {
        const std::size_t k = grp.indices.size();
        std::vector<std::vector<double>> cols(k, std::vector<double>(k));
        for (auto& col : cols)
            for (double& x : col) x = normal.next();
        modified_gram_schmidt(cols);
        modified_gram_schmidt(cols);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t r = 0; r < k; ++r) u(grp.indices[r], grp.indices[c]) = cols[c][r];
    }
    return u;
}

namespace {

void write_comment(std::ostream& os, const std::string& comment) {
    if (comment.empty()) return;
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const SymmetricMatrix& m, const std::string& comment) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    write_comment(os, comment);
    os << "# symmetric matrix dim=" << m.dim() << '\n';
    os << "index";
    for (std::size_t j = 0; j < m.dim(); ++j) os << ",c" << j;
    os << '\n';
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << i;
        for (std::size_t j = 0; j < m.dim(); ++j) os << ',' << m.at(i, j);
        os << '\n';
    }
    os.precision(old);
}

void write_csv(std::ostream& os, const SpectralDecomposition& d, const std::string& comment) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    write_comment(os, comment);
    os << "# spectral decomposition dim=" << d.dim() << '\n';
    os << "# eigenvalues";
    for (double e : d.eigenvalues) os << ',' << e;
    os << '\n';
    os << "basis_index";
    for (std::size_t i = 0; i < d.dim(); ++i) os << ",psi" << i;
    os << '\n';
    for (std::size_t alpha = 0; alpha < d.dim(); ++alpha) {
        os << alpha;
        for (std::size_t i = 0; i < d.dim(); ++i) os << ',' << d.coef(alpha, i);
        os << '\n';
    }
    os.precision(old);
}

}  // namespace qchaos
