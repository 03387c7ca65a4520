#include "qchaos/quadrature.hpp"

#include <cmath>
#include <string>

#include "qchaos/errors.hpp"

namespace qchaos {

GaussLaguerre gauss_laguerre(int n, double alpha) {
    if (n < 1) throw InvalidInput("gauss_laguerre: need at least one node");
    if (!(alpha > -1.0)) throw InvalidInput("gauss_laguerre: alpha must exceed -1");

    GaussLaguerre q{alpha, std::vector<double>(n), std::vector<double>(n)};
    const double log_norm = std::lgamma(alpha + n) - std::lgamma(static_cast<double>(n));
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * n + 1.8 * alpha);
        } else if (i == 1) {
            z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai)) * (z - q.nodes[i - 2]) /
                 (1.0 + 0.3 * alpha);
        }

        double p1 = 0.0, p2 = 0.0, pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 + alpha - z) * p2 - (j - 1.0 + alpha) * p3) / j;
            }
            pp = (n * p1 - (n + alpha) * p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14 * std::abs(z)) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ConvergenceError("gauss_laguerre: root " + std::to_string(i) + " of " + std::to_string(n) +
                                   " did not converge");
        // One more pass so p2 and pp match the converged root.
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0 + alpha - z) * p2 - (j - 1.0 + alpha) * p3) / j;
        }
        pp = (n * p1 - (n + alpha) * p2) / z;
        q.nodes[i] = z;
        q.weights[i] = -std::exp(log_norm) / (pp * n * p2);
    }
    return q;
}

void laguerre_table(double x, int max_degree, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(max_degree) + 1);
    out[0] = 1.0;
    if (max_degree == 0) return;
    out[1] = 1.0 - x;
    for (int k = 1; k < max_degree; ++k) out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
}

}  // namespace qchaos
