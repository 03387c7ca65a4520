#include "qchaos/chaos_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qchaos/errors.hpp"

namespace qchaos::metrics {

StrengthFunction strength_function(const SpectralDecomposition& d, std::span<const std::size_t> shell, int label) {
    if (shell.empty()) throw InvalidInput("strength_function: empty shell");
    auto weights = projection_onto_subset(d, shell);
    const double inv = 1.0 / static_cast<double>(shell.size());
    for (double& w : weights) w *= inv;
    return {d.eigenvalues, std::move(weights), label};
}

StrengthFunction strength_function(const SpectralDecomposition& d, const ShellPartition& p, int label) {
    return strength_function(d, p.group(label).indices, label);
}

StrengthFunction local_strength_function(const SpectralDecomposition& d, std::size_t alpha) {
    const std::size_t one[] = {alpha};
    return {d.eigenvalues, projection_onto_subset(d, one), -1};
}

EnergyWindow minimal_half_window(const StrengthFunction& sf) {
    const std::size_t n = sf.weights.size();
    if (n == 0 || sf.energies.size() != n) throw InvalidInput("spreading_width: empty or mismatched strength function");
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + sf.weights[k];
    if (std::abs(prefix[n] - 1.0) > 1e-6)
        throw InvalidInput("spreading_width: weights sum to " + std::to_string(prefix[n]) + ", not 1");

    EnergyWindow best;
    bool found = false;
    std::size_t last = 0;
    for (std::size_t first = 0; first < n; ++first) {
        if (last < first) last = first;
        while (last < n && prefix[last + 1] - prefix[first] < 0.5) ++last;
        if (last == n) break;
        const double width = sf.energies[last] - sf.energies[first];
        if (!found || width < best.width) {
            best = {first, last, width, prefix[last + 1] - prefix[first]};
            found = true;
        }
    }
    if (!found) throw InvalidInput("spreading_width: no window reaches half the strength");
    return best;
}

ChaosReport chaoticity(double gamma_spr, double d0) {
    if (!(d0 > 0.0)) throw InvalidInput("chaoticity: level spacing must be positive");
    if (!(gamma_spr >= 0.0)) throw InvalidInput("chaoticity: spreading width must be non-negative");
    return {gamma_spr, d0, gamma_spr / d0};
}

std::string to_string(Selection s) {
    switch (s) {
        case Selection::EnergyWindow: return "window";
        case Selection::TopProjection: return "top";
        case Selection::DominantShell: return "dominant";
        case Selection::SpectralBlock: return "block";
    }
    return "?";
}

Selection parse_selection(const std::string& name) {
    if (name == "window") return Selection::EnergyWindow;
    if (name == "top") return Selection::TopProjection;
    if (name == "dominant") return Selection::DominantShell;
    if (name == "block") return Selection::SpectralBlock;
    throw ConfigError("unknown selection '" + name + "' (expected window, top, dominant or block)");
}

namespace {

std::vector<std::size_t> nearest_in_energy(const std::vector<double>& energies, double center, std::size_t count) {
    // Eigenvalues are ascending, so the nearest `count` form a contiguous run.
    std::size_t hi = static_cast<std::size_t>(std::lower_bound(energies.begin(), energies.end(), center) -
                                              energies.begin());
    std::size_t lo = hi;
    while (hi - lo < count) {
        const bool can_lo = lo > 0;
        const bool can_hi = hi < energies.size();
        if (can_lo && (!can_hi || center - energies[lo - 1] <= energies[hi] - center))
            --lo;
        else
            ++hi;
    }
    std::vector<std::size_t> out(count);
    std::iota(out.begin(), out.end(), lo);
    return out;
}

// Contiguous run of `count` eigenstates with the largest summed weight; the lowest run wins ties.
std::vector<std::size_t> heaviest_block(const std::vector<double>& weight, std::size_t count) {
    double sum = std::accumulate(weight.begin(), weight.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
    double best = sum;
    std::size_t lo = 0;
    for (std::size_t k = count; k < weight.size(); ++k) {
        sum += weight[k] - weight[k - count];
        if (sum > best) {
            best = sum;
            lo = k + 1 - count;
        }
    }
    std::vector<std::size_t> out(count);
    std::iota(out.begin(), out.end(), lo);
    return out;
}

std::vector<std::size_t> dominated_by(const SpectralDecomposition& d, const ShellPartition& p, std::size_t target) {
    const std::size_t n = d.dim();
    const auto groups = p.groups();
    std::vector<double> best(n, -1.0);
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto w = projection_onto_subset(d, groups[g].indices);
        for (std::size_t i = 0; i < n; ++i)
            if (w[i] > best[i]) {
                best[i] = w[i];
                owner[i] = g;
            }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (owner[i] == target) out.push_back(i);
    return out;
}

}  // namespace

ExactProjection w_exact(const SpectralDecomposition& d, const ShellPartition& p, int label, Selection selection) {
    if (d.dim() != p.dim()) throw InvalidInput("w_exact: decomposition and partition dimensions differ");
    const std::size_t pos = p.position(label);
    const auto& shell = p.groups()[pos];
    const std::size_t count = shell.indices.size();
    const auto weight = projection_onto_subset(d, shell.indices);

    std::vector<std::size_t> chosen;
    switch (selection) {
        case Selection::EnergyWindow:
            if (count > d.dim()) throw ConfigError("w_exact: shell larger than the spectrum");
            chosen = nearest_in_energy(d.eigenvalues, shell.energy, count);
            break;
        case Selection::TopProjection: {
            if (count > d.dim()) throw ConfigError("w_exact: shell larger than the spectrum");
            std::vector<std::size_t> order(d.dim());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
            chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
            std::sort(chosen.begin(), chosen.end());
            break;
        }
        case Selection::SpectralBlock:
            if (count > d.dim()) throw ConfigError("w_exact: shell larger than the spectrum");
            chosen = heaviest_block(weight, count);
            break;
        case Selection::DominantShell:
            chosen = dominated_by(d, p, pos);
            if (chosen.empty())
                throw ConfigError("w_exact: no eigenstate is dominated by shell " + std::to_string(label));
            break;
    }
    if (selection != Selection::DominantShell && chosen.size() != count)
        throw ConfigError("w_exact: selection produced " + std::to_string(chosen.size()) + " states, expected " +
                          std::to_string(count));

    double complement = 0.0;
    double energy = 0.0;
    for (std::size_t i : chosen) {
        complement += 1.0 - weight[i];
        energy += d.eigenvalues[i];
    }
    const double inv = 1.0 / static_cast<double>(chosen.size());
    return {complement * inv, energy * inv, std::move(chosen)};
}

PerturbativeTerms perturbative_terms(const SymmetricMatrix& v, const ShellPartition& p, int target, double lambda) {
    if (v.dim() != p.dim()) throw InvalidInput("w_perturbative: matrix and partition dimensions differ");
    if (!std::isfinite(lambda)) throw InvalidInput("w_perturbative: lambda must be finite");
    const std::size_t pos = p.position(target);
    const auto groups = p.groups();
    const auto& shell = groups[pos];

    PerturbativeTerms out{target, shell.indices.size(), lambda, {}, 0.0};
    double total = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g == pos) continue;
        const double gap = shell.energy - groups[g].energy;
        if (gap == 0.0)
            throw DegenerateDenominator("w_perturbative: shells " + std::to_string(target) + " and " +
                                        std::to_string(groups[g].label) + " share an energy");
        double coupling = 0.0;
        for (std::size_t i : shell.indices)
            for (std::size_t alpha : groups[g].indices) {
                const double x = v.at(alpha, i);
                coupling += x * x;
            }
        const double term = coupling / (gap * gap);
        out.shell_terms.emplace_back(groups[g].label, term);
        total += term;
    }
    out.w = lambda * lambda * total / static_cast<double>(shell.indices.size());
    return out;
}

double invariance_gap(const SymmetricMatrix& v, const ShellPartition& p, int target, double lambda,
                      std::uint64_t seed) {
    const Matrix u = random_block_unitary(p, seed);
    const double before = w_perturbative(v, p, target, lambda);
    const double after = w_perturbative(v.congruence(u), p, target, lambda);
    return std::abs(after - before);
}

CriticalResult critical_parameter(std::vector<Sample> curve, std::string axis, double threshold) {
    if (curve.size() < 2) throw InvalidInput("critical_parameter: need at least two samples");
    const bool increasing = curve[1].axis > curve[0].axis;
    for (std::size_t k = 1; k < curve.size(); ++k) {
        const bool ok = increasing ? curve[k].axis > curve[k - 1].axis : curve[k].axis < curve[k - 1].axis;
        if (!ok || !std::isfinite(curve[k].axis)) throw InvalidInput("critical_parameter: axis is not strictly monotone");
    }

    CriticalResult out{std::move(axis), threshold, std::nullopt, std::move(curve)};
    const auto& s = out.samples;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double a = s[k].value - threshold;
        const double b = s[k + 1].value - threshold;
        if (a == 0.0) {
            out.crossing = Crossing{k, s[k], s[k + 1], s[k].axis};
            break;
        }
        if ((a < 0.0) != (b < 0.0) || b == 0.0) {
            const double t = a / (a - b);
            out.crossing = Crossing{k, s[k], s[k + 1], s[k].axis + t * (s[k + 1].axis - s[k].axis)};
            break;
        }
    }
    return out;
}

}  // namespace qchaos::metrics
