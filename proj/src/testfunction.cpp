#include "magtrace/testfunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magtrace/errors.hpp"
#include "magtrace/quadrature.hpp"

namespace magtrace {

namespace {

// C-infinity unit step: 0 for s <= 0, 1 for s >= 1.
double smooth01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = std::exp(-1.0 / s);
    double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

} // namespace

TestFunction TestFunction::gaussian(double center, double width) {
    if (center < 0) throw precondition_error("gaussian: center must be >= 0");
    if (width <= 0) throw precondition_error("gaussian: width must be > 0");
    return TestFunction(Kind::gaussian, center, width, StepSide::lower);
}

TestFunction TestFunction::fermi_dirac(double beta, double mu) {
    if (beta <= 0) throw precondition_error("fermi_dirac: beta must be > 0");
    return TestFunction(Kind::fermi_dirac, beta, mu, StepSide::lower);
}

TestFunction TestFunction::log_pressure(double beta, double mu) {
    if (beta <= 0) throw precondition_error("log_pressure: beta must be > 0");
    return TestFunction(Kind::log_pressure, beta, mu, StepSide::lower);
}

TestFunction TestFunction::smoothed_step(double e0, double eps, StepSide side) {
    if (e0 <= 0) throw precondition_error("smoothed_step: E0 must be > 0");
    if (eps <= 0) throw precondition_error("smoothed_step: eps must be > 0");
    return TestFunction(Kind::smoothed_step, e0, eps, side);
}

double TestFunction::operator()(double E) const {
    switch (kind_) {
    case Kind::gaussian: {
        double u = (E - a_) / b_;
        return std::exp(-u * u);
    }
    case Kind::fermi_dirac: {
        double x = a_ * (E - b_);
        if (x > 0) {
            double ex = std::exp(-x);
            return ex / (1.0 + ex);
        }
        return 1.0 / (1.0 + std::exp(x));
    }
    case Kind::log_pressure: {
        double x = a_ * (E - b_);
        if (x > 36.0) return std::exp(-x);
        if (x < -36.0) return -x;
        return std::log1p(std::exp(-x));
    }
    case Kind::smoothed_step: {
        double e0 = a_, eps = b_;
        if (side_ == StepSide::lower) return smooth01((e0 - E) / eps);
        return smooth01((e0 + eps - E) / eps);
    }
    }
    return 0.0;
}

double TestFunction::sup_tail(double a) const {
    switch (kind_) {
    case Kind::gaussian:
        return (a <= a_) ? 1.0 : (*this)(a);
    case Kind::fermi_dirac:
    case Kind::log_pressure:
    case Kind::smoothed_step:
        return (*this)(a); // non-increasing variants
    }
    return 0.0;
}

double TestFunction::support_end(double tol) const {
    tol = std::max(tol, 1e-300);
    switch (kind_) {
    case Kind::gaussian:
        return a_ + b_ * std::sqrt(std::max(std::log(1.0 / tol), 0.0));
    case Kind::fermi_dirac: {
        if (tol >= 0.5) return b_;
        return b_ + std::log(1.0 / tol - 1.0) / a_;
    }
    case Kind::log_pressure: {
        double y = std::expm1(std::min(tol, 0.6)); // f <= tol iff exp(-x) <= e^tol - 1
        return std::max(b_, b_ - std::log(y) / a_);
    }
    case Kind::smoothed_step:
        return (side_ == StepSide::lower) ? a_ : a_ + b_;
    }
    return 0.0;
}

double TestFunction::decay_threshold() const {
    if (kind_ == Kind::smoothed_step) return support_end(0.0);
    auto ok = [this](double E) {
        for (double m : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
            double x = E * m;
            if ((*this)(x)*std::pow(x, 8) > 1.0) return false;
        }
        return true;
    };
    double E = 2.0;
    while (!ok(E) && E < 1e6) E *= 1.25;
    return E;
}

double TestFunction::integral_0_inf(double abs_tol) const {
    double hi = support_end(std::min(abs_tol, 1e-14) * 1e-2);
    if (hi <= 0.0) return 0.0;
    auto f = [this](double E) { return (*this)(E); };
    return integrate_gk(f, 0.0, hi, abs_tol * 0.5).value;
}

TestFunction TestFunction::scaled(double lambda) const {
    if (lambda <= 0) throw precondition_error("scaled: lambda must be > 0");
    switch (kind_) {
    case Kind::gaussian: return gaussian(a_ / lambda, b_ / lambda);
    case Kind::fermi_dirac: return fermi_dirac(a_ * lambda, b_ / lambda);
    case Kind::log_pressure: return log_pressure(a_ * lambda, b_ / lambda);
    case Kind::smoothed_step: return smoothed_step(a_ / lambda, b_ / lambda, side_);
    }
    throw precondition_error("scaled: unreachable");
}

std::string TestFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::gaussian: os << "gaussian{c=" << a_ << ",w=" << b_ << "}"; break;
    case Kind::fermi_dirac: os << "fermi_dirac{beta=" << a_ << ",mu=" << b_ << "}"; break;
    case Kind::log_pressure: os << "log_pressure{beta=" << a_ << ",mu=" << b_ << "}"; break;
    case Kind::smoothed_step:
        os << "smoothed_step{E0=" << a_ << ",eps=" << b_
           << ",side=" << (side_ == StepSide::lower ? "lower" : "upper") << "}";
        break;
    }
    return os.str();
}

} // namespace magtrace
