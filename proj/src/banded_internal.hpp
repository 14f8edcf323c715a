// Banded complex Hermitian eigen machinery backing the rectangle FD solver:
// LDL^T spectrum slicing (Sylvester inertia counts) and shift-invert Lanczos
// with full reorthogonalization. Internal to the library.
#ifndef MAGTRACE_BANDED_INTERNAL_HPP
#define MAGTRACE_BANDED_INTERNAL_HPP

#include <complex>
#include <vector>

namespace magtrace::detail {

using cplx = std::complex<double>;

// Hermitian banded matrix, lower storage: entry(i, j) for 0 <= i - j <= bw
// lives at a[i * (bw + 1) + (i - j)].
struct BandedHermitian {
    int n = 0, bw = 0;
    std::vector<cplx> a;

    BandedHermitian() = default;
    BandedHermitian(int n_, int bw_) : n(n_), bw(bw_), a((std::size_t)n_ * (bw_ + 1)) {}
    cplx& at(int i, int j) { return a[(std::size_t)i * (bw + 1) + (i - j)]; }
    cplx get(int i, int j) const { return a[(std::size_t)i * (bw + 1) + (i - j)]; }
    void matvec(const std::vector<cplx>& x, std::vector<cplx>& y) const;
};

// LDL^T of (A - sigma I) without pivoting. Near-zero pivots are reported so
// the caller can nudge sigma.
struct BandedLDLT {
    int n = 0, bw = 0;
    std::vector<cplx> L; // unit lower, band layout as above
    std::vector<double> d;
    int negative_pivots = 0;
    bool ok = false;

    void factor(const BandedHermitian& A, double sigma);
    void solve(std::vector<cplx>& x) const; // in place
};

// Number of eigenvalues of A strictly below sigma (inertia of A - sigma I),
// retrying with tiny sigma perturbations if the pivoting-free factorization
// breaks down. Throws numeric_error after repeated breakdowns.
int inertia_below(const BandedHermitian& A, double sigma);

// All eigenvalues of A strictly below `bound`, ascending, via shift-invert
// Lanczos at sigma = -1 (A must be positive semidefinite so A + I is HPD).
// The count is certified against inertia_below(A, bound); a mismatch after
// the iteration cap throws numeric_error. Deterministic (fixed seed).
std::vector<double> eigenvalues_below_si(const BandedHermitian& A, double bound,
                                         int max_steps = 0);

} // namespace magtrace::detail

#endif
