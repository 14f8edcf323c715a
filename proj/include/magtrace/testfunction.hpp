#ifndef MAGTRACE_TESTFUNCTION_HPP
#define MAGTRACE_TESTFUNCTION_HPP

#include <string>

namespace magtrace {

// Closed family of rapidly decaying smooth weights on [0, inf):
//   gaussian      f(E) = exp(-((E-c)/w)^2)
//   fermi_dirac   f(E) = 1/(exp(beta(E-mu)) + 1)
//   log_pressure  f(E) = ln(1 + exp(-beta(E-mu)))
//   smoothed_step C-infinity mollified indicator of (-inf, E0]; side=lower
//                 vanishes on [E0, inf), side=upper equals 1 on (-inf, E0],
//                 transition width eps.
// All members are nonnegative.
class TestFunction {
public:
    enum class Kind { gaussian, fermi_dirac, log_pressure, smoothed_step };
    enum class StepSide { lower, upper };

    static TestFunction gaussian(double center, double width);
    static TestFunction fermi_dirac(double beta, double mu);
    static TestFunction log_pressure(double beta, double mu);
    static TestFunction smoothed_step(double e0, double eps, StepSide side);

    double operator()(double E) const;

    // sup_{E >= a} f(E); exact per variant (no sampling).
    double sup_tail(double a) const;

    // Smallest E with sup_tail(E) <= tol (exact support edge for the steps).
    double support_end(double tol) const;

    // Reported per-variant threshold E_decay with f(E) E^8 <= 1 for E >= E_decay.
    double decay_threshold() const;

    // int_0^inf f(E) dE by adaptive quadrature.
    double integral_0_inf(double abs_tol = 1e-12) const;

    // g with g(E) = f(lambda E), staying inside the family.
    TestFunction scaled(double lambda) const;

    Kind kind() const { return kind_; }
    double param_a() const { return a_; } // center / beta / E0
    double param_b() const { return b_; } // width  / mu   / eps
    StepSide side() const { return side_; }
    std::string describe() const;

private:
    TestFunction(Kind k, double a, double b, StepSide s) : kind_(k), a_(a), b_(b), side_(s) {}
    Kind kind_;
    double a_, b_;
    StepSide side_;
};

} // namespace magtrace

#endif
