#ifndef MAGTRACE_SPECIAL1D_HPP
#define MAGTRACE_SPECIAL1D_HPP

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace magtrace {

// Normalized eigenfunction of the full-line oscillator -phi'' + t^2 phi with
// eigenvalue 2k-1, k = 1, 2, ... (so phi_k carries the Hermite polynomial of
// degree k-1). Stable for k <= 60, |t| <= 30: upward recurrence on the
// normalized functions, Gaussian factor carried inside.
double hermite_phi(int k, double t);

// Tail mass of phi_k^2 on [xi, inf). Absolute error <= 1e-10.
double hermite_tail_mass(int k, double xi);

// Uniform Dirichlet grid for the half-line model operator on (0, t_max),
// n interior points, spacing t_max/(n+1).
struct ModelGrid {
    double t_max = 0.0;
    int n = 0;

    double spacing() const { return t_max / (n + 1); }

    // Truncation rule: wall at max(0,-xi) + sqrt(4 k_max + 3) + 8, extended
    // when needed so the wall potential exceeds the margin-factor bound.
    // t_max is rounded up to a multiple of spacing_hint so that grids built
    // with the same hint share the t-lattice.
    static ModelGrid for_problem(double xi, int k_max, double spacing_hint = 0.01);

    // Throws precondition_error on violation of the grid invariants or of the
    // wall-margin rule for the given problem.
    void validate(double xi, int k_max, double margin_factor = 4.0) const;
};

// Eigenpair of -d^2/dt^2 + (xi + t)^2 on (0, t_max), Dirichlet at both ends.
struct ModelEigenpair {
    int k = 0;
    double xi = 0.0;
    double e = 0.0;               // eigenvalue
    std::vector<double> psi;      // samples at t = spacing*(i+1), i = 0..n-1
    double dpsi0 = 0.0;           // psi'(0), one-sided second-order difference
    double err_e = 0.0;           // eigenvalue error estimate
    double spacing = 0.0;         // spacing of the psi samples

    // psi at lattice index i of the sample grid (0 outside the domain).
    double psi_at(int i) const {
        return (i >= 1 && i <= (int)psi.size()) ? psi[i - 1] : 0.0;
    }
};

// Lowest k_max Dirichlet eigenpairs on the given grid. Eigenvalues are
// O(spacing^2) accurate; psi is normalized to unit discrete L2 norm and
// positive on its last lobe. Set want_vectors = false to skip the inverse
// iterations when only eigenvalues are needed.
std::vector<ModelEigenpair> model_eigensystem(double xi, int k_max, const ModelGrid& grid,
                                              bool want_vectors = true);

// Two-grid solve (spacing and spacing/2) with Richardson extrapolation of
// e and dpsi0; psi comes from the fine grid; err_e = |e_fine - e_coarse| / 3.
std::vector<ModelEigenpair> model_eigensystem_refined(double xi, int k_max,
                                                      const ModelGrid& grid,
                                                      bool want_vectors = true);

// Returns (centered difference (e_k(xi+dxi)-e_k(xi-dxi))/(2 dxi), psi_k'(0,xi)^2).
// The two values approximate the same quantity through independent routes.
std::pair<double, double> hadamard_check(int k, double xi, double dxi,
                                         double spacing_hint = 0.01);

// Cache of refined model solves shared across k sweeps and test functions.
// Thread safe; concurrent solves of the same key may duplicate work, the
// last writer wins with an identical value.
class ModelCache {
public:
    // Eigenpairs 1..k_max at xi on ModelGrid::for_problem(xi, k_max, hint).
    // The returned pointer stays valid for the cache lifetime.
    std::shared_ptr<const std::vector<ModelEigenpair>> refined(double xi, int k_max,
                                                               double spacing_hint,
                                                               bool want_vectors);

    std::size_t size() const;

private:
    struct Key {
        double xi;
        int k_max;
        double hint;
        bool vectors;
        bool operator<(const Key& o) const;
    };
    mutable std::mutex mu_;
    std::map<Key, std::shared_ptr<const std::vector<ModelEigenpair>>> entries_;
};

} // namespace magtrace

#endif
