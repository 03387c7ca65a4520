#include "qchaos/henon_heiles.hpp"

#include <cmath>
#include <map>
#include <string>

#include "qchaos/errors.hpp"

namespace qchaos::hh {

void Config::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("henon-heiles: hbar must be positive and finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("henon-heiles: lambda must be non-negative");
    if (num_shells < 4)
        throw ConfigError("henon-heiles: need at least 4 shells, got " + std::to_string(num_shells));
}

Basis enumerate_basis(const Config& cfg) {
    if (cfg.num_shells < 1) throw ConfigError("henon-heiles: num_shells must be positive");
    std::vector<OscState> states;
    std::vector<ShellGroup> groups;
    for (int shell = 0; shell < cfg.num_shells; ++shell) {
        ShellGroup g{shell, {}, shell_energy(cfg, shell)};
        for (int n1 = 0; n1 <= shell; ++n1) {
            g.indices.push_back(states.size());
            states.push_back({n1, shell - n1});
        }
        groups.push_back(std::move(g));
    }
    const std::size_t dim = states.size();
    return {std::move(states), ShellPartition(dim, std::move(groups))};
}

namespace {

// (a + a†)^power |n> as a sparse vector over number states.
std::map<int, double> ladder_power_action(int n, int power) {
    std::map<int, double> v{{n, 1.0}};
    for (int step = 0; step < power; ++step) {
        std::map<int, double> next;
        for (const auto& [k, c] : v) {
            if (k > 0) next[k - 1] += c * std::sqrt(static_cast<double>(k));
            next[k + 1] += c * std::sqrt(static_cast<double>(k + 1));
        }
        v = std::move(next);
    }
    return v;
}

std::size_t state_index(int n1, int n2) {
    const int shell = n1 + n2;
    return static_cast<std::size_t>(shell * (shell + 1) / 2 + n1);
}

}  // namespace

double ladder_power_element(int m, int n, int power) {
    const auto v = ladder_power_action(n, power);
    const auto it = v.find(m);
    return it == v.end() ? 0.0 : it->second;
}

SymmetricMatrix build_h0(const Config& cfg) {
    cfg.validate();
    const auto basis = enumerate_basis(cfg);
    return SymmetricMatrix::diagonal(basis.partition.basis_energies());
}

SymmetricMatrix build_v(const Config& cfg) {
    cfg.validate();
    const auto basis = enumerate_basis(cfg);
    const double q3 = std::pow(cfg.hbar / 2.0, 1.5);
    const int top = cfg.num_shells - 1;

    SymmetricMatrix v(basis.states.size());
    for (std::size_t ket = 0; ket < basis.states.size(); ++ket) {
        const auto [n1, n2] = basis.states[ket];
        // Only the lower triangle is written; the selection rules make every
        // contribution land on exactly one (bra, ket) pair.
        for (const auto& [m1, c1] : ladder_power_action(n1, 2))
            for (const auto& [m2, c2] : ladder_power_action(n2, 1)) {
                if (m1 + m2 > top) continue;
                const std::size_t bra = state_index(m1, m2);
                if (bra >= ket) v.add(bra, ket, q3 * c1 * c2);
            }
        for (const auto& [m2, c2] : ladder_power_action(n2, 3)) {
            if (n1 + m2 > top) continue;
            const std::size_t bra = state_index(n1, m2);
            if (bra >= ket) v.add(bra, ket, -q3 * c2 / 3.0);
        }
    }
    return v;
}

SymmetricMatrix build_h(const Config& cfg) {
    return build_h0(cfg).plus_scaled(build_v(cfg), cfg.lambda);
}

}  // namespace qchaos::hh
