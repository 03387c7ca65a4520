#pragma once

#include <vector>

#include "qchaos/matrix.hpp"
#include "qchaos/spectral.hpp"

namespace qchaos::hh {

/// Two-dimensional oscillator number state |n1, n2>.
struct OscState {
    int n1;
    int n2;

    int shell() const noexcept { return n1 + n2; }
    bool operator==(const OscState&) const = default;
};

struct Config {
    double hbar = 0.01;
    double lambda = 1.0;
    int num_shells = 31;  // N = 0..30, 496 states

    /// Throws ConfigError. Model builds need at least 4 shells.
    void validate() const;
};

/// Zeroth-order energy hbar * (N + 1) of shell N.
inline double shell_energy(const Config& cfg, int shell) { return cfg.hbar * (shell + 1); }

struct Basis {
    std::vector<OscState> states;  // ascending shell, then ascending n1
    ShellPartition partition;      // labels are shell numbers N
};

/// Enumeration only needs num_shells >= 1, unlike the matrix builders.
Basis enumerate_basis(const Config& cfg);

SymmetricMatrix build_h0(const Config& cfg);

/// Matrix of q1^2 q2 - q2^3 / 3 with q = sqrt(hbar/2) (a + a†). Lambda is not applied.
SymmetricMatrix build_v(const Config& cfg);

/// H0 + lambda * V.
SymmetricMatrix build_h(const Config& cfg);

/// <m| (a + a†)^power |n> evaluated on the untruncated ladder.
double ladder_power_element(int m, int n, int power);

}  // namespace qchaos::hh
