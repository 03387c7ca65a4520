#pragma once

#include <vector>

namespace qchaos {

/// Nodes and weights for  integral_0^inf t^alpha e^-t f(t) dt  ~  sum_j w_j f(t_j).
/// Exact for polynomial f of degree <= 2 * size - 1.
struct GaussLaguerre {
    double alpha;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on the three-term recurrence, asymptotic starting guesses.
/// Throws InvalidInput for n < 1 or alpha <= -1, ConvergenceError if a root does not settle.
GaussLaguerre gauss_laguerre(int n, double alpha);

/// L_0(x) .. L_{max_degree}(x), ordinary Laguerre polynomials with L_p(0) = 1.
void laguerre_table(double x, int max_degree, std::vector<double>& out);

}  // namespace qchaos
