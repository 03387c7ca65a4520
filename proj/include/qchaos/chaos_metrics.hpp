#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qchaos/matrix.hpp"
#include "qchaos/spectral.hpp"

namespace qchaos::metrics {

/// Probability weights of one shell (or one basis state) over the perturbed
/// eigenstates, on the ascending eigenvalue axis.
struct StrengthFunction {
    std::vector<double> energies;
    std::vector<double> weights;
    int shell = 0;
};

/// P_N(E_i) = (1/dim T_N) sum_{alpha in T_N} |c_i^alpha|^2.
StrengthFunction strength_function(const SpectralDecomposition& d, std::span<const std::size_t> shell,
                                   int label = 0);
StrengthFunction strength_function(const SpectralDecomposition& d, const ShellPartition& p, int label);

/// Strength function of a single basis state: P_alpha(E_i) = |c_i^alpha|^2.
StrengthFunction local_strength_function(const SpectralDecomposition& d, std::size_t alpha);

/// Contiguous run of eigenstates [first, last] on the energy axis.
struct EnergyWindow {
    std::size_t first = 0;
    std::size_t last = 0;
    double width = 0.0;   // energies[last] - energies[first]
    double weight = 0.0;  // summed strength inside
};

/// Narrowest window whose weight reaches one half; the lowest-energy window wins ties.
/// Throws InvalidInput if the weights do not sum to 1 within 1e-6.
EnergyWindow minimal_half_window(const StrengthFunction& sf);

inline double spreading_width(const StrengthFunction& sf) { return minimal_half_window(sf).width; }

struct ChaosReport {
    double gamma_spr;
    double d0;
    double kappa;

    /// kappa >= 1: shells can no longer be told apart in the perturbed spectrum.
    bool symmetry_destroyed() const noexcept { return kappa >= 1.0; }
};

ChaosReport chaoticity(double gamma_spr, double d0);

/// How the dim T_N eigenstates entering the exact average are chosen.
enum class Selection {
    EnergyWindow,   // the dim T_N eigenvalues closest to the shell's zeroth-order energy
    TopProjection,  // the dim T_N eigenstates with the largest weight on the shell
    DominantShell,  // every eigenstate whose largest shell weight is on this shell
    SpectralBlock,  // the run of dim T_N adjacent eigenstates with the largest total weight on the shell
};

std::string to_string(Selection s);
/// Accepts "window", "top", "dominant", "block". Throws ConfigError otherwise.
Selection parse_selection(const std::string& name);

struct ExactProjection {
    double mean_complement;  // average of 1 - |P_T psi_i|^2 over the selected states
    double mean_energy;      // average eigenvalue of the selected states
    std::vector<std::size_t> states;
};

/// Average squared projection of exact eigenstates on the complement of a shell.
/// Throws ConfigError when the selection cannot produce its states.
ExactProjection w_exact(const SpectralDecomposition& d, const ShellPartition& p, int label, Selection selection);

/// Per-shell decomposition of the first-order complement weight.
struct PerturbativeTerms {
    int target;
    std::size_t target_dim;
    double lambda;
    /// (shell label n, W_n) with W_n = sum_{i in T_N, alpha in T_n} |V_alpha,i|^2 / (E_N - E_n)^2,
    /// lambda not applied. Every shell other than the target appears once, in partition order.
    std::vector<std::pair<int, double>> shell_terms;
    /// lambda^2 / dim T_N * sum_n W_n
    double w;
};

PerturbativeTerms perturbative_terms(const SymmetricMatrix& v, const ShellPartition& p, int target, double lambda);

/// First-order complement weight evaluated in the raw basis. Throws
/// DegenerateDenominator if two distinct shells share an energy.
inline double w_perturbative(const SymmetricMatrix& v, const ShellPartition& p, int target, double lambda) {
    return perturbative_terms(v, p, target, lambda).w;
}

/// |W(UᵀVU) - W(V)| for U = random_block_unitary(p, seed).
double invariance_gap(const SymmetricMatrix& v, const ShellPartition& p, int target, double lambda,
                      std::uint64_t seed);

struct Sample {
    double axis;
    double value;
};

struct Crossing {
    std::size_t lower_index;  // samples[lower_index] and samples[lower_index + 1] bracket the crossing
    Sample lower;
    Sample upper;
    double value;  // linear interpolation of the axis at the threshold
};

struct CriticalResult {
    std::string axis;
    double threshold = 0.5;
    std::optional<Crossing> crossing;
    std::vector<Sample> samples;
};

/// First place where the curve reaches the threshold, walking along the given
/// axis order. Needs >= 2 samples on a strictly monotone axis (InvalidInput otherwise).
CriticalResult critical_parameter(std::vector<Sample> curve, std::string axis = "energy", double threshold = 0.5);

}  // namespace qchaos::metrics
