#pragma once

#include <string>
#include <vector>

#include "qchaos/matrix.hpp"
#include "qchaos/spectral.hpp"

namespace qchaos::kepler {

/// Parabolic hydrogen state |n1, n2, m>, atomic units.
struct ParabolicState {
    int n1;
    int n2;
    int m;

    int principal() const noexcept { return n1 + n2 + (m < 0 ? -m : m) + 1; }
    bool operator==(const ParabolicState&) const = default;
};

struct Config {
    int max_n = 20;
    int m = 0;
    int target_shell = 10;
    std::vector<double> gamma_grid;

    /// Throws ConfigError. Only the m = 0 subspace is supported.
    void validate() const;
};

/// Coulomb energy -1 / (2 n^2).
inline double shell_energy(int n) { return -0.5 / (static_cast<double>(n) * n); }

/// Coefficient gamma^2 / 8 of rho^2 in the Hamiltonian (Larmor frequency gamma / 2).
inline double diamagnetic_coupling(double gamma) { return gamma * gamma / 8.0; }

struct Basis {
    std::vector<ParabolicState> states;  // ascending n, then ascending n1
    ShellPartition partition;            // labels are principal quantum numbers
};

Basis enumerate_parabolic_basis(const Config& cfg);

/// <n1' n2' 0| x^2 + y^2 |n1 n2 0> between normalised bound states.
///
/// rho^2 = xi * eta in parabolic coordinates, so every element separates into
/// one-dimensional integrals of Laguerre products against e^{-a t}. Those are
/// evaluated with generalised Gauss-Laguerre rules that are exact for the
/// polynomial degree involved, and the whole matrix is recomputed with twice
/// the nodes as a self-check (NumericalError naming the element on mismatch).
SymmetricMatrix build_rho2(const Config& cfg);

/// Same matrix with an explicit node count and no self-check.
SymmetricMatrix build_rho2_with_nodes(const Config& cfg, int nodes);

/// diag(-1/(2n^2)) + (gamma^2/8) rho^2.
SymmetricMatrix build_h(const Config& cfg, double gamma);
SymmetricMatrix build_h(const SymmetricMatrix& rho2, const ShellPartition& partition, double gamma);

/// epsilon = E * gamma^(-2/3). Throws InvalidInput unless gamma > 0.
double scaled_energy(double energy, double gamma);

/// Field strength at which a fixed energy has the given scaled energy; both must be negative.
double gamma_for_scaled_energy(double energy, double scaled);

std::string describe(const ParabolicState& s);

}  // namespace qchaos::kepler
