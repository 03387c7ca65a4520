#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_laguerre.h>
#include <gsl/gsl_sf_legendre.h>

namespace oracle {

namespace {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

Rule gsl_rule(const gsl_integration_fixed_type* type, std::size_t n, double a, double b, double alpha) {
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(type, n, a, b, alpha, 0.0);
    if (!ws) throw std::runtime_error("gsl_integration_fixed_alloc failed");
    Rule r;
    const double* x = gsl_integration_fixed_nodes(ws);
    const double* w = gsl_integration_fixed_weights(ws);
    r.x.assign(x, x + n);
    r.w.assign(w, w + n);
    gsl_integration_fixed_free(ws);
    return r;
}

// Normalised Hermite functions without their Gaussian factor.
double hermite_function_poly(int n, double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    for (int k = 1; k <= n; ++k) {
        const double next = std::sqrt(2.0 / k) * x * cur - std::sqrt((k - 1.0) / k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// R_nl(r) * e^{r/n}: the hydrogen radial function without its exponential.
double radial_poly(int n, int l, double r) {
    const double norm = std::sqrt(std::pow(2.0 / n, 3) * factorial(n - l - 1) / (2.0 * n * factorial(n + l)));
    const double rho = 2.0 * r / n;
    return norm * std::pow(rho, l) * gsl_sf_laguerre_n(n - l - 1, 2 * l + 1, rho);
}

double y_l0(int l, double u) { return std::sqrt((2 * l + 1) / (4 * std::numbers::pi)) * gsl_sf_legendre_Pl(l, u); }

// Parabolic m = 0 state without e^{-r/n}, in spherical coordinates.
double parabolic_poly(int n1, int n2, double r, double u) {
    const int n = n1 + n2 + 1;
    const double xi = r * (1 + u);
    const double eta = r * (1 - u);
    return std::sqrt(2.0) / (n * n) / std::sqrt(2 * std::numbers::pi) * gsl_sf_laguerre_n(n1, 0, xi / n) *
           gsl_sf_laguerre_n(n2, 0, eta / n);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const qchaos::Matrix& input) {
    qchaos::Matrix a = input;
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = a(i, i);
    std::sort(e.begin(), e.end());
    return e;
}

double brute_force_half_width(const std::vector<double>& energies, const std::vector<double>& weights) {
    double best = INFINITY;
    for (std::size_t a = 0; a < weights.size(); ++a)
        for (std::size_t b = a; b < weights.size(); ++b) {
            double s = 0.0;
            for (std::size_t k = a; k <= b; ++k) s += weights[k];
            if (s >= 0.5) best = std::min(best, energies[b] - energies[a]);
        }
    return best;
}

double henon_heiles_v_quadrature(int m1, int m2, int n1, int n2, double hbar) {
    static const Rule rule = gsl_rule(gsl_integration_fixed_hermite, 24, 0.0, 1.0, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double x1 = rule.x[i], x2 = rule.x[j];
            const double f = hermite_function_poly(m1, x1) * hermite_function_poly(n1, x1) *
                             hermite_function_poly(m2, x2) * hermite_function_poly(n2, x2);
            sum += rule.w[i] * rule.w[j] * f * (x1 * x1 * x2 - x2 * x2 * x2 / 3.0);
        }
    return std::pow(hbar, 1.5) * sum;
}

double hydrogen_ground_rho2() {
    // |1s|^2 = e^{-2r}/pi; substitute t = 2r for the Laguerre weight.
    const Rule radial = gsl_rule(gsl_integration_fixed_laguerre, 12, 0.0, 1.0, 0.0);
    const Rule angular = gsl_rule(gsl_integration_fixed_legendre, 8, -1.0, 1.0, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < radial.x.size(); ++i)
        for (std::size_t j = 0; j < angular.x.size(); ++j) {
            const double r = radial.x[i] / 2.0;
            const double u = angular.x[j];
            sum += radial.w[i] * angular.w[j] * (1.0 / std::numbers::pi) * r * r * (r * r * (1 - u * u));
        }
    return 2 * std::numbers::pi * sum / 2.0;
}

qchaos::Matrix parabolic_rho2_via_spherical(int max_n) {
    const Rule angular = gsl_rule(gsl_integration_fixed_legendre, 24, -1.0, 1.0, 0.0);
    const Rule laguerre = gsl_rule(gsl_integration_fixed_laguerre, 40, 0.0, 1.0, 0.0);

    struct Spherical {
        int n, l;
    };
    struct Parabolic {
        int n1, n2, n;
    };
    std::vector<Spherical> sph;
    std::vector<Parabolic> par;
    for (int n = 1; n <= max_n; ++n) {
        for (int l = 0; l < n; ++l) sph.push_back({n, l});
        for (int n1 = 0; n1 < n; ++n1) par.push_back({n1, n - 1 - n1, n});
    }
    const std::size_t dim = sph.size();

    // integral over r in [0, inf) of e^{-a r} g(r) dr with t = a r.
    auto radial_integral = [&](double a, auto&& g) {
        double s = 0.0;
        for (std::size_t k = 0; k < laguerre.x.size(); ++k) s += laguerre.w[k] * g(laguerre.x[k] / a);
        return s / a;
    };

    qchaos::Matrix rho_sph(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const auto [n, l] = sph[i];
            const auto [np, lp] = sph[j];
            const double a = 1.0 / n + 1.0 / np;
            const double radial =
                radial_integral(a, [&](double r) { return radial_poly(n, l, r) * radial_poly(np, lp, r) * r * r * r * r; });
            double ang = 0.0;
            for (std::size_t k = 0; k < angular.x.size(); ++k) {
                const double u = angular.x[k];
                ang += angular.w[k] * y_l0(l, u) * y_l0(lp, u) * (1 - u * u);
            }
            rho_sph(i, j) = 2 * std::numbers::pi * radial * ang;
        }

    // overlap(i, p) = <n l | n1 n2>, nonzero only inside a shell.
    qchaos::Matrix overlap(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t p = 0; p < dim; ++p) {
            if (sph[i].n != par[p].n) continue;
            const int n = sph[i].n;
            double s = 0.0;
            for (std::size_t k = 0; k < angular.x.size(); ++k) {
                const double u = angular.x[k];
                s += angular.w[k] * y_l0(sph[i].l, u) *
                     radial_integral(2.0 / n, [&](double r) {
                         return radial_poly(n, sph[i].l, r) * parabolic_poly(par[p].n1, par[p].n2, r, u) * r * r;
                     });
            }
            overlap(i, p) = 2 * std::numbers::pi * s;
        }

    return overlap.transposed() * rho_sph * overlap;
}

qchaos::Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    qchaos::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

}  // namespace oracle
