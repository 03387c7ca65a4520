#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qchaos/matrix.hpp"

namespace qchaos {

/// One degenerate level of the unperturbed Hamiltonian.
struct ShellGroup {
    int label;                         // principal quantum number of the shell
    std::vector<std::size_t> indices;  // basis positions belonging to the shell
    double energy;                     // shared zeroth-order energy
};

/// Ordered grouping of basis indices into degenerate subspaces.
///
/// Groups are disjoint, cover 0..dim-1, and carry strictly increasing energies.
/// Labels must be unique.
class ShellPartition {
public:
    ShellPartition(std::size_t dim, std::vector<ShellGroup> groups);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const ShellGroup> groups() const noexcept { return groups_; }

    bool contains(int label) const noexcept;
    /// Position of the shell in groups(); throws InvalidInput if the label is unknown.
    std::size_t position(int label) const;
    const ShellGroup& group(int label) const { return groups_[position(label)]; }
    /// Position in groups() of the shell holding a given basis index.
    std::size_t group_of(std::size_t basis_index) const { return owner_.at(basis_index); }

    /// Smallest distance from the shell's energy to a neighbouring shell's energy.
    double nearest_gap(int label) const;

    /// Zeroth-order energy of every basis index.
    std::vector<double> basis_energies() const;

private:
    std::size_t dim_;
    std::vector<ShellGroup> groups_;
    std::vector<std::size_t> owner_;
};

/// Eigenvalues in ascending order with the matching eigenvectors stored as
/// columns: coef(alpha, i) is the amplitude of basis state alpha in eigenstate i.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
    double coef(std::size_t alpha, std::size_t i) const noexcept { return eigenvectors(alpha, i); }
};

/// Householder tridiagonalisation followed by implicit QL with Wilkinson-style
/// shifts. Throws InvalidInput on non-finite entries and ConvergenceError when
/// an eigenvalue needs more than kMaxQlIterations implicit steps.
SpectralDecomposition eigh(const SymmetricMatrix& m);

inline constexpr int kMaxQlIterations = 64;

/// Worst-case deviations from the decomposition invariants.
struct DecompositionCheck {
    double orthogonality = 0.0;   // max |CᵀC - I|
    double residual = 0.0;        // max_i |H c_i - E_i c_i|_2 / |H|_F
    double completeness = 0.0;    // max_alpha |sum_i c_i^alpha^2 - 1|
    double reconstruction = 0.0;  // max |C diag(E) Cᵀ - H| / |H|_max
    bool ascending = true;

    bool passes(double tol = 1e-10) const noexcept {
        return ascending && orthogonality <= tol && residual <= tol && completeness <= tol &&
               reconstruction <= tol;
    }
};

DecompositionCheck check_decomposition(const SymmetricMatrix& m, const SpectralDecomposition& d);

/// w_i = sum over alpha in subset of |c_i^alpha|^2 for every eigenstate i.
std::vector<double> projection_onto_subset(const SpectralDecomposition& d,
                                           std::span<const std::size_t> subset);

/// Seeded random orthogonal matrix that only mixes indices inside each shell.
/// Each block is a standard-normal matrix (mt19937_64 + Box-Muller) orthonormalised
/// by two passes of modified Gram-Schmidt.
Matrix random_block_unitary(const ShellPartition& p, std::uint64_t seed);

/// Debug dumps: '#' metadata lines, a header row, then one row per basis index.
void write_csv(std::ostream& os, const SymmetricMatrix& m, const std::string& comment = {});
void write_csv(std::ostream& os, const SpectralDecomposition& d, const std::string& comment = {});

}  // namespace qchaos
