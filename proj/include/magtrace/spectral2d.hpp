#ifndef MAGTRACE_SPECTRAL2D_HPP
#define MAGTRACE_SPECTRAL2D_HPP

#include <string>
#include <vector>

#include "magtrace/geometry.hpp"
#include "magtrace/testfunction.hpp"

namespace magtrace {

// Eigenvalues of one angular-momentum channel of the disk operator.
struct RadialChannel {
    int m = 0;
    std::vector<double> eigenvalues; // sorted, <= E_cut
    std::vector<double> err_est;     // two-grid Richardson estimates
    int n_grid = 0;
    double R = 0.0, B = 0.0;
};

// Sorted Dirichlet spectrum below a cutoff with provenance and per-eigenvalue
// discretization-error estimates.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<double> err_est;
    std::vector<int> channel; // angular momentum m, or kNoChannel for FD
    double E_cut = 0.0;
    std::string method;
    std::string domain;
    std::string field;
    long grid = 0;

    static constexpr int kNoChannel = -1000000;
};

// Lowest Dirichlet eigenvalues of the angular-momentum-m radial operator
//   -u'' - u'/r + (m/r - B r/2)^2 u = lambda u  on (0, R), u(R) = 0,
// regular at the origin, discretized on the half-offset grid r_j=(j-1/2)R/n
// (cell-centered flux form, symmetrized by the sqrt(r) similarity), solved on
// n and 2n grids and Richardson extrapolated. Returns all lambda <= E_cut.
RadialChannel radial_channel(double R, double B, int m, double E_cut, int n);

// Union of radial channels over every m whose potential minimum on (0, R]
// does not exceed E_cut (a rigorous variational truncation).
Spectrum disk_spectrum(double R, double B, double E_cut, int n);

enum class Gauge { landau_x, symmetric };

// Dirichlet spectrum of (-i grad - A)^2 on the centered Lx x Ly rectangle by
// gauge-covariant finite differences with link phases exp(-i int A . dl)
// (midpoint rule), solved on the (nx, ny) and (nx/2, ny/2) grids with
// per-index Richardson extrapolation. Eigenvalues below E_cut are certified
// complete on each grid by a Sylvester inertia count.
Spectrum rectangle_spectrum_fd(double Lx, double Ly, const FieldSpec& field, double E_cut,
                               int nx, int ny, Gauge gauge);

struct TraceResult {
    double value = 0.0;
    double tail_bound = 0.0;
};

// sum_i f(lambda_i) with a reported bound on the truncated tail
// (count-density estimate times the integral of |f| beyond E_cut). Throws
// when the tail bound exceeds tail_tol.
TraceResult trace_f(const Spectrum& spec, const TestFunction& f, double tail_tol = 1e-8);

// Number of eigenvalues strictly below E (E must not exceed E_cut).
int count_below(const Spectrum& spec, double E);

} // namespace magtrace

#endif
