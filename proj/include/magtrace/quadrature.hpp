#ifndef MAGTRACE_QUADRATURE_HPP
#define MAGTRACE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace magtrace {

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long evals = 0;
    bool converged = true;
};

// Adaptive 15-point Gauss-Kronrod on [a, b] to absolute tolerance abs_tol.
// Panels are bisected until the Kronrod error estimate is below the local
// share of the tolerance or max_depth is reached.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 30);

// Same, but with interior breakpoints seeding the initial panel structure
// (breakpoints outside (a, b) are ignored). Initial panels are capped at
// max_panel length; max_panel <= 0 selects (b - a)/16.
QuadResult integrate_gk_panels(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breakpoints, double abs_tol,
                               int max_depth = 30, double max_panel = 0.0);

// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Gauss-Legendre nodes/weights mapped to [a, b].
void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights);

// Composite Simpson weights for a uniform grid of m+1 samples y_0..y_m with
// spacing h; m is rounded up to even by the caller. Returns the integral.
double simpson_uniform(const std::vector<double>& y, double h);

} // namespace magtrace

#endif
