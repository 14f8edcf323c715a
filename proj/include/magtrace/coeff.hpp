#ifndef MAGTRACE_COEFF_HPP
#define MAGTRACE_COEFF_HPP

#include <vector>

#include "magtrace/special1d.hpp"
#include "magtrace/testfunction.hpp"

namespace magtrace {

struct SeriesTolerance {
    double abs_tol = 1e-10; // >= 1e-12
    int k_cap = 200;
};

// b_k(B, f) = f((2k-1) B).
double bulk_density_term(double B, const TestFunction& f, int k);

// Integration window in the xi variable.
struct XiWindow {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
    // Window covering [-max(6 sqrt(k), sqrt(E_decay/B)) - t_max, sqrt(E_decay/B) + 2]
    // where E_decay is the point past which |f| is negligible.
    static XiWindow automatic(double B, const TestFunction& f, int k, double t_max = 0.0);
};

struct SkResult {
    double value = 0.0;
    double err_est = 0.0;
    bool truncated = false; // integrand at a window edge above tolerance
    XiWindow window;
    int k = 0;
};

// Production formula (no t-integral):
//   s_k(B,f) = int ( f(B e_k(xi)) - f(B(2k-1)) int_xi^inf phi_k^2 ) dxi
// by adaptive quadrature with panels seeded at the four-region boundaries
// -6 sqrt(k), 0, +6 sqrt(k).
SkResult s_k_alt(double B, const TestFunction& f, int k, const XiWindow& window,
                 ModelCache& cache, double abs_tol = 1e-9, double spacing = 0.02);
SkResult s_k_alt(double B, const TestFunction& f, int k, ModelCache& cache,
                 double abs_tol = 1e-9, double spacing = 0.02);

// Cross-check formula with the t-integral:
//   s_k(B,f) = int_0^{t_max} ( int f(B e_k(xi)) psi_k(t,xi)^2 dxi - f(B(2k-1)) ) dt
// by tensor quadrature on a shared (xi, t) product grid; the whole evaluation
// runs on three t-lattices (spacing, spacing/2, spacing/4) with a double
// Richardson step. Slow; s_k_alt is the production route.
SkResult s_k_direct(double B, const TestFunction& f, int k, double t_max,
                    const XiWindow& window, ModelCache& cache, double spacing = 0.02);
SkResult s_k_direct(double B, const TestFunction& f, int k, double t_max,
                    ModelCache& cache, double spacing = 0.02);

struct SeriesResult {
    double value = 0.0;
    double err_est = 0.0;
    int k_used = 0; // highest index examined
    std::vector<SkResult> terms;
};

// Sum of s_k over k, terminated when the rigorous per-term bound
// (sup-tail of f at B(2k-1) + |f(B(2k-1))|) * window length stays below
// abs_tol for two consecutive k.
SeriesResult s_series(double B, const TestFunction& f, const SeriesTolerance& tol,
                      ModelCache& cache);

// Diagonal of the Landau projector density: (B/2pi) sum_k f((2k-1)B) for
// B > 0, continuously extended to B = 0 by (4pi)^{-1} int_0^inf f.
double landau_density(double B, const TestFunction& f, const SeriesTolerance& tol);

} // namespace magtrace

#endif
