#ifndef MAGTRACE_TRIDIAG_HPP
#define MAGTRACE_TRIDIAG_HPP

#include <utility>
#include <vector>

namespace magtrace {

// Real symmetric tridiagonal matrix: diag has n entries, off has n-1
// (off[i] couples rows i and i+1).
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;
    int n() const { return (int)diag.size(); }
};

// Number of eigenvalues strictly below x (Sturm sequence count).
int sturm_count(const SymTridiag& T, double x);

// Interval certainly containing the whole spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiag& T);

// Eigenvalues with 1-based indices k_lo..k_hi, ascending, each located by
// bisection to full double precision relative to the spectral scale.
std::vector<double> eigenvalues_by_index(const SymTridiag& T, int k_lo, int k_hi);

// All eigenvalues strictly below `bound`, ascending.
std::vector<double> eigenvalues_below(const SymTridiag& T, double bound);

// Eigenvector for an eigenvalue previously located by bisection, computed by
// inverse iteration (LU with partial pivoting on the shifted matrix).
// Orthogonalizes against `previous` when eigenvalues cluster. Normalized in
// the unweighted 2-norm; the overall sign is unspecified.
std::vector<double> eigenvector(const SymTridiag& T, double lambda,
                                const std::vector<std::vector<double>>& previous = {});

} // namespace magtrace

#endif
