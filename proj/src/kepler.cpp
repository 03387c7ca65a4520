#include "qchaos/kepler.hpp"

#include <algorithm>
#include <cmath>

#include "qchaos/errors.hpp"
#include "qchaos/quadrature.hpp"

namespace qchaos::kepler {

void Config::validate() const {
    if (max_n < 1) throw ConfigError("kepler: max_n must be positive");
    if (m != 0) throw ConfigError("kepler: only the m = 0 subspace is supported");
    if (target_shell < 1 || target_shell > max_n)
        throw ConfigError("kepler: target shell " + std::to_string(target_shell) + " outside 1.." +
                          std::to_string(max_n));
    for (double g : gamma_grid)
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("kepler: gamma values must be positive and finite");
}

Basis enumerate_parabolic_basis(const Config& cfg) {
    if (cfg.max_n < 1) throw ConfigError("kepler: max_n must be positive");
    if (cfg.m != 0) throw ConfigError("kepler: only the m = 0 subspace is supported");
    std::vector<ParabolicState> states;
    std::vector<ShellGroup> groups;
    for (int n = 1; n <= cfg.max_n; ++n) {
        ShellGroup g{n, {}, shell_energy(n)};
        for (int n1 = 0; n1 < n; ++n1) {
            g.indices.push_back(states.size());
            states.push_back({n1, n - 1 - n1, 0});
        }
        groups.push_back(std::move(g));
    }
    const std::size_t dim = states.size();
    return {std::move(states), ShellPartition(dim, std::move(groups))};
}

namespace {

// integral_0^inf xi^k e^{-a xi} L_p(xi/n) L_q(xi/n') dxi for k = 1, 2 and all
// p < n, q < n', with a = (1/n + 1/n')/2. Row-major p * n' + q.
struct RadialIntegrals {
    std::vector<double> first;
    std::vector<double> second;
};

RadialIntegrals radial_integrals(int n, int np, const GaussLaguerre& rule) {
    const double a = 0.5 * (1.0 / n + 1.0 / np);
    RadialIntegrals out{std::vector<double>(static_cast<std::size_t>(n * np), 0.0),
                        std::vector<double>(static_cast<std::size_t>(n * np), 0.0)};
    std::vector<double> lp, lq;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double t = rule.nodes[j];
        const double xi = t / a;
        laguerre_table(xi / n, n - 1, lp);
        laguerre_table(xi / np, np - 1, lq);
        // alpha = 1 weight carries one power of t.
        const double w1 = rule.weights[j];
        const double w2 = rule.weights[j] * t;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < np; ++q) {
                const double f = lp[p] * lq[q];
                out.first[p * np + q] += w1 * f;
                out.second[p * np + q] += w2 * f;
            }
    }
    const double s1 = 1.0 / (a * a);
    const double s2 = s1 / a;
    for (auto& x : out.first) x *= s1;
    for (auto& x : out.second) x *= s2;
    return out;
}

}  // namespace

SymmetricMatrix build_rho2_with_nodes(const Config& cfg, int nodes) {
    const auto basis = enumerate_parabolic_basis(cfg);
    const auto rule = gauss_laguerre(nodes, 1.0);
    const auto& groups = basis.partition.groups();

    SymmetricMatrix rho2(basis.states.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (std::size_t gj = 0; gj <= gi; ++gj) {
            const int n = groups[gi].label;
            const int np = groups[gj].label;
            const auto ints = radial_integrals(n, np, rule);
            const double norm = 1.0 / (2.0 * n * n * static_cast<double>(np) * np);
            for (std::size_t bra : groups[gi].indices)
                for (std::size_t ket : groups[gj].indices) {
                    if (ket > bra) continue;
                    const auto& s = basis.states[bra];
                    const auto& t = basis.states[ket];
                    const std::size_t k1 = static_cast<std::size_t>(s.n1 * np + t.n1);
                    const std::size_t k2 = static_cast<std::size_t>(s.n2 * np + t.n2);
                    const double value =
                        norm * (ints.second[k1] * ints.first[k2] + ints.first[k1] * ints.second[k2]);
                    rho2.set(bra, ket, value);
                }
        }
    return rho2;
}

SymmetricMatrix build_rho2(const Config& cfg) {
    // Integrands are polynomials of degree <= 2 * max_n - 1 against t e^{-t}.
    const int nodes = cfg.max_n + 4;
    SymmetricMatrix rho2 = build_rho2_with_nodes(cfg, nodes);
    const SymmetricMatrix check = build_rho2_with_nodes(cfg, 2 * nodes);

    const auto basis = enumerate_parabolic_basis(cfg);
    for (std::size_t i = 0; i < rho2.dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double a = rho2.at(i, j);
            const double b = check.at(i, j);
            const double n = basis.states[i].principal();
            const double np = basis.states[j].principal();
            // Elements that vanish analytically only reach round-off relative to the
            // n^2 n'^2 scale of the diagonal, so that scale sets the floor.
            const double floor = 1e-4 * n * n * np * np;
            if (!std::isfinite(a) || std::abs(a - b) > 1e-8 * std::max({std::abs(a), std::abs(b), floor}))
                throw NumericalError("kepler: rho^2 quadrature self-check failed for element <" +
                                     describe(basis.states[i]) + "|rho^2|" + describe(basis.states[j]) + ">");
        }
    return rho2;
}

SymmetricMatrix build_h(const SymmetricMatrix& rho2, const ShellPartition& partition, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidInput("kepler: gamma must be non-negative and finite");
    if (rho2.dim() != partition.dim()) throw InvalidInput("kepler: rho^2 and partition dimensions differ");
    return SymmetricMatrix::diagonal(partition.basis_energies()).plus_scaled(rho2, diamagnetic_coupling(gamma));
}

SymmetricMatrix build_h(const Config& cfg, double gamma) {
    const auto basis = enumerate_parabolic_basis(cfg);
    return build_h(build_rho2(cfg), basis.partition, gamma);
}

double scaled_energy(double energy, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("scaled_energy: gamma must be positive");
    return energy * std::pow(gamma, -2.0 / 3.0);
}

double gamma_for_scaled_energy(double energy, double scaled) {
    if (!(energy < 0.0) || !(scaled < 0.0)) throw InvalidInput("gamma_for_scaled_energy: energies must be negative");
    return std::pow(energy / scaled, 1.5);
}

std::string describe(const ParabolicState& s) {
    return "(" + std::to_string(s.n1) + "," + std::to_string(s.n2) + "," + std::to_string(s.m) + ")";
}

}  // namespace qchaos::kepler
