#ifndef MAGTRACE_ASYMPTOTICS_HPP
#define MAGTRACE_ASYMPTOTICS_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "magtrace/coeff.hpp"
#include "magtrace/geometry.hpp"
#include "magtrace/spectral2d.hpp"

namespace magtrace {

// Two-term prediction h^{-1}(c0 + sqrt(h) c1).
double predict_trace(double h, double c0, double c1);

struct TraceExact {
    double value = 0.0;
    double tail_bound = 0.0;
    Spectrum spectrum;
};

// Tr f(h^{-1} L_h) on the base domain equals the trace of the constant-field
// operator on the h^{-1/2}-dilated domain; computed exactly (to discretization
// and tail bounds) from the disk spectrum. Requires h^{-1/2} R0 <= 25.
TraceExact semiclassical_trace_exact(const DomainSpec& dom, const FieldSpec& field,
                                     const TestFunction& f, double h);

struct ConvergenceReport {
    std::vector<double> h_list;       // strictly decreasing
    std::vector<double> traces;       // Tr f(h^{-1} L_h)
    double c0 = 0.0, c1 = 0.0;
    std::vector<double> residuals;    // h * trace - c0
    std::vector<double> extracted_c1; // residual / sqrt(h)
    double fit_slope = 0.0;           // LSQ slope of log|extracted_c1 - c1| vs log h
    std::vector<std::string> warnings;
};

// Runs the trace study over h_list (sharp mode: disk + constant field;
// loose mode: rectangle + constant field through the FD solver) and checks
// that extracted_c1 at the smallest h lies within rel_tol of c1.
ConvergenceReport convergence_study(const DomainSpec& dom, const FieldSpec& field,
                                    const TestFunction& f, std::vector<double> h_list,
                                    ModelCache& cache, double rel_tol = 0.05);

struct KunzShift {
    double B = 0.0, E = 0.0;
    int K = 1;
    double value = 0.0;
    double err_est = 0.0;
};

// Boundary counting shift
//   sum_{k<=K} int_0^inf (1 - int_{B e_k(xi) < E} |psi_k(t,xi)|^2 dxi) dt
// for E in the spectral gap ((2K-1)B, (2K+1)B). The threshold xi*_k solves
// B e_k(xi*) = E by bisection on the increasing branch; the double integral
// is tensor quadrature, Richardson extrapolated over the t-lattice.
KunzShift kunz_shift(double B, double E, int K, ModelCache& cache, double spacing = 0.02);

struct CountingPrediction {
    double bulk = 0.0;     // (2 pi)^{-1} K int_Omega B dx
    double boundary = 0.0; // (2 pi)^{-1} int_bdry kunz_shift(B(x), E, K) sqrt(B(x)) dsigma
};

// Two-term counting coefficients: N(Eh) ~ h^{-1} bulk - h^{-1/2} boundary.
// Requires the gap condition (2K-1)B_max < (2K+1)B_min.
CountingPrediction counting_prediction(const DomainSpec& dom, const FieldSpec& field,
                                       double E, int K, ModelCache& cache);

struct CountingReport {
    std::vector<double> h_list;
    std::vector<long> counts;            // N(Eh, L_h)
    double bulk = 0.0, boundary = 0.0;
    std::vector<double> scaled_deficit;  // (N - h^{-1} bulk) sqrt(h), -> -boundary
};

// Compares exact counts on dilated disks against the two-term prediction.
CountingReport counting_vs_exact(const DomainSpec& dom, const FieldSpec& field, double E,
                                 int K, const std::vector<double>& h_list,
                                 ModelCache& cache);

struct ThermoResult {
    double L = 0.0;
    double lhs = 0.0;      // Tr f(H^L) / |Omega_{L^{-2}}|
    double rhs = 0.0;      // B/(2pi) sum b_k + L^{-1} sqrt(B)|dOmega|/(2pi|Omega|) sum s_k
    double gap = 0.0;      // lhs - rhs
    double trace = 0.0;    // Tr f(H^L)
    double h = 0.0;        // the equivalent semiclassical parameter L^{-2}
};

// Evaluates both sides of the thermodynamic-limit expansion on the L-dilated
// disk; the trace is the same spectrum object the h = L^{-2} study uses.
ThermoResult thermo_density(double B, const TestFunction& f, double L,
                            const DomainSpec& dom, ModelCache& cache);

// Constant-field heat kernel (Mehler):
//   (b / 4 pi sinh(bt)) exp(-i b x^y/2) exp(-b|x-y|^2 / (4 tanh(bt)))
// continuously extended to b = 0 as the free heat kernel. Requires b t < 700.
std::complex<double> mehler_heat_kernel(double b, double t, std::array<double, 2> x,
                                        std::array<double, 2> xp);

} // namespace magtrace

#endif
