#include "magtrace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "magtrace/errors.hpp"
#include "magtrace/quadrature.hpp"

namespace magtrace {

DomainSpec DomainSpec::disk(double R) {
    if (R <= 0) throw precondition_error("disk: R must be > 0");
    DomainSpec d;
    d.kind_ = Kind::disk;
    d.R_ = R;
    return d;
}

DomainSpec DomainSpec::rectangle(double Lx, double Ly) {
    if (Lx <= 0 || Ly <= 0) throw precondition_error("rectangle: sides must be > 0");
    DomainSpec d;
    d.kind_ = Kind::rectangle;
    d.Lx_ = Lx;
    d.Ly_ = Ly;
    return d;
}

DomainSpec DomainSpec::star(double rho0, std::vector<double> cos_coeffs,
                            std::vector<double> sin_coeffs) {
    DomainSpec d;
    d.kind_ = Kind::star;
    d.rho0_ = rho0;
    d.ac_ = std::move(cos_coeffs);
    d.as_ = std::move(sin_coeffs);
    double rmin = 1e300;
    for (int i = 0; i < 4096; ++i) {
        rmin = std::min(rmin, d.rho(2.0 * M_PI * i / 4096));
    }
    if (!(rmin > 0))
        throw precondition_error("star: rho(theta) must stay positive (min " +
                                 std::to_string(rmin) + ")");
    return d;
}

double DomainSpec::rho(double theta) const {
    if (kind_ == Kind::disk) return R_;
    double r = rho0_;
    for (std::size_t j = 0; j < ac_.size(); ++j) r += ac_[j] * std::cos((j + 1) * theta);
    for (std::size_t j = 0; j < as_.size(); ++j) r += as_[j] * std::sin((j + 1) * theta);
    return r;
}

double DomainSpec::drho(double theta) const {
    if (kind_ == Kind::disk) return 0.0;
    double r = 0.0;
    for (std::size_t j = 0; j < ac_.size(); ++j)
        r -= ac_[j] * (j + 1) * std::sin((j + 1) * theta);
    for (std::size_t j = 0; j < as_.size(); ++j)
        r += as_[j] * (j + 1) * std::cos((j + 1) * theta);
    return r;
}

namespace {

// periodic trapezoid over [0, 2pi); spectrally accurate for smooth integrands
template <class F>
double periodic_trapezoid(int n, F&& f) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(2.0 * M_PI * i / n);
    return s * 2.0 * M_PI / n;
}

} // namespace

double DomainSpec::area() const {
    switch (kind_) {
    case Kind::disk: return M_PI * R_ * R_;
    case Kind::rectangle: return Lx_ * Ly_;
    case Kind::star:
        return periodic_trapezoid(8192, [this](double th) {
            double r = rho(th);
            return 0.5 * r * r;
        });
    }
    return 0.0;
}

double DomainSpec::perimeter() const {
    switch (kind_) {
    case Kind::disk: return 2.0 * M_PI * R_;
    case Kind::rectangle: return 2.0 * (Lx_ + Ly_);
    case Kind::star:
        return periodic_trapezoid(8192, [this](double th) {
            double r = rho(th), dr = drho(th);
            return std::sqrt(r * r + dr * dr);
        });
    }
    return 0.0;
}

double DomainSpec::max_radius() const {
    switch (kind_) {
    case Kind::disk: return R_;
    case Kind::rectangle: return 0.5 * std::hypot(Lx_, Ly_);
    case Kind::star: {
        double m = 0.0;
        for (int i = 0; i < 4096; ++i) m = std::max(m, rho(2.0 * M_PI * i / 4096));
        return m;
    }
    }
    return 0.0;
}

DomainSpec DomainSpec::dilate(double lambda) const {
    if (lambda <= 0) throw precondition_error("dilate: lambda must be > 0");
    switch (kind_) {
    case Kind::disk: return disk(lambda * R_);
    case Kind::rectangle: return rectangle(lambda * Lx_, lambda * Ly_);
    case Kind::star: {
        auto ac = ac_;
        auto as = as_;
        for (double& v : ac) v *= lambda;
        for (double& v : as) v *= lambda;
        return star(lambda * rho0_, std::move(ac), std::move(as));
    }
    }
    throw precondition_error("dilate: unreachable");
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::disk: os << "disk{R=" << R_ << "}"; break;
    case Kind::rectangle: os << "rectangle{Lx=" << Lx_ << ",Ly=" << Ly_ << "}"; break;
    case Kind::star:
        os << "star{rho0=" << rho0_;
        for (std::size_t j = 0; j < ac_.size(); ++j) os << ",c" << j + 1 << "=" << ac_[j];
        for (std::size_t j = 0; j < as_.size(); ++j) os << ",s" << j + 1 << "=" << as_[j];
        os << "}";
        break;
    }
    return os.str();
}

FieldSpec FieldSpec::constant(double B0) {
    if (B0 < 0) throw precondition_error("constant field: B0 must be >= 0");
    FieldSpec f;
    f.kind_ = Kind::constant;
    f.B0_ = B0;
    return f;
}

FieldSpec FieldSpec::radial_bump(double B0, double a, double sigma) {
    if (B0 <= 0) throw precondition_error("radial_bump: B0 must be > 0");
    if (!(std::abs(a) < 1)) throw precondition_error("radial_bump: |a| must be < 1");
    if (sigma <= 0) throw precondition_error("radial_bump: sigma must be > 0");
    FieldSpec f;
    f.kind_ = Kind::radial_bump;
    f.B0_ = B0;
    f.a_ = a;
    f.sigma_ = sigma;
    return f;
}

double FieldSpec::B(double x, double y) const {
    if (kind_ == Kind::constant) return B0_;
    double r2 = x * x + y * y;
    return B0_ * (1.0 + a_ * std::exp(-r2 / (sigma_ * sigma_)));
}

double FieldSpec::flux(double r) const {
    if (kind_ == Kind::constant) return 0.5 * B0_ * r * r;
    double s2 = sigma_ * sigma_;
    return B0_ * (0.5 * r * r + 0.5 * a_ * s2 * (-std::expm1(-r * r / s2)));
}

FieldSpec FieldSpec::dilate(double lambda) const {
    if (lambda <= 0) throw precondition_error("dilate: lambda must be > 0");
    if (kind_ == Kind::constant) return *this;
    return radial_bump(B0_, a_, lambda * sigma_);
}

std::string FieldSpec::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::constant) os << "constant{B0=" << B0_ << "}";
    else os << "radial_bump{B0=" << B0_ << ",a=" << a_ << ",sigma=" << sigma_ << "}";
    return os.str();
}

Quadrature2D make_quadrature(const DomainSpec& dom, int level) {
    if (level < 1) throw precondition_error("make_quadrature: level must be >= 1");
    Quadrature2D q;
    switch (dom.kind()) {
    case DomainSpec::Kind::disk:
    case DomainSpec::Kind::star: {
        int ntheta = 64 * level;
        int nr = 48 * level;
        std::vector<double> gx, gw;
        double dth = 2.0 * M_PI / ntheta;
        for (int i = 0; i < ntheta; ++i) {
            double th = i * dth;
            double rmax = dom.rho(th);
            gauss_legendre_ab(nr, 0.0, rmax, gx, gw);
            for (int j = 0; j < nr; ++j) {
                q.area.push_back({gx[j] * std::cos(th), gx[j] * std::sin(th),
                                  gw[j] * gx[j] * dth});
            }
            double dr = dom.drho(th);
            double metric = std::sqrt(rmax * rmax + dr * dr);
            q.boundary.push_back({rmax * std::cos(th), rmax * std::sin(th), metric * dth});
        }
        break;
    }
    case DomainSpec::Kind::rectangle: {
        int nx = 48 * level, ny = 48 * level;
        double Lx = dom.param_Lx(), Ly = dom.param_Ly();
        std::vector<double> gxx, gwx, gxy, gwy;
        gauss_legendre_ab(nx, -Lx / 2, Lx / 2, gxx, gwx);
        gauss_legendre_ab(ny, -Ly / 2, Ly / 2, gxy, gwy);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                q.area.push_back({gxx[i], gxy[j], gwx[i] * gwy[j]});
        int ne = 32 * level;
        std::vector<double> ex, ew;
        gauss_legendre_ab(ne, -Lx / 2, Lx / 2, ex, ew);
        for (int i = 0; i < ne; ++i) {
            q.boundary.push_back({ex[i], -Ly / 2, ew[i]});
            q.boundary.push_back({ex[i], Ly / 2, ew[i]});
        }
        gauss_legendre_ab(ne, -Ly / 2, Ly / 2, ex, ew);
        for (int i = 0; i < ne; ++i) {
            q.boundary.push_back({-Lx / 2, ex[i], ew[i]});
            q.boundary.push_back({Lx / 2, ex[i], ew[i]});
        }
        break;
    }
    }
    return q;
}

std::pair<double, double> field_range(const DomainSpec& dom, const FieldSpec& field) {
    if (field.is_constant()) return {field.param_B0(), field.param_B0()};
    auto q = make_quadrature(dom, 1);
    double lo = 1e300, hi = -1e300;
    for (const auto& n : q.area) {
        double b = field.B(n.x, n.y);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    for (const auto& n : q.boundary) {
        double b = field.B(n.x, n.y);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    // analytic extremes for the radial profile: monotone in r, so they sit at
    // the origin and at the farthest boundary point
    double B0 = field.param_B0(), a = field.param_a();
    double rf = dom.max_radius();
    double at0 = B0 * (1.0 + a);
    double atR = field.B(rf, 0.0);
    lo = std::min({lo, at0, atR});
    hi = std::max({hi, at0, atR});
    return {lo, hi};
}

void require_field_positive(const DomainSpec& dom, const FieldSpec& field) {
    auto q = make_quadrature(dom, 1);
    for (const auto& n : q.area)
        if (!(field.B(n.x, n.y) > 0)) {
            std::ostringstream os;
            os << "field is not positive at node (" << n.x << ", " << n.y
               << "): B=" << field.B(n.x, n.y);
            throw precondition_error(os.str());
        }
    auto [lo, hi] = field_range(dom, field);
    (void)hi;
    if (!(lo > 0)) throw precondition_error("field infimum is not positive");
}

namespace {

double c0_on(const Quadrature2D& q, const TestFunction& f, const FieldSpec& field,
             const SeriesTolerance& tol) {
    double sum = 0.0;
    for (const auto& n : q.area) sum += n.w * landau_density(field.B(n.x, n.y), f, tol);
    return sum;
}

} // namespace

CoeffResult c0(const TestFunction& f, const DomainSpec& dom, const FieldSpec& field,
               const SeriesTolerance& tol) {
    require_field_positive(dom, field);
    double v1 = c0_on(make_quadrature(dom, 1), f, field, tol);
    double v2 = c0_on(make_quadrature(dom, 2), f, field, tol);
    CoeffResult r{v2, std::abs(v2 - v1)};
    double allowed = std::max(tol.abs_tol * 100.0, 1e-8 * (std::abs(v2) + 1.0));
    if (r.err_est > allowed)
        throw numeric_error("c0: quadrature did not settle under one refinement (delta " +
                            std::to_string(r.err_est) + ")");
    return r;
}

namespace {

double c1_on(const Quadrature2D& q, const TestFunction& f, const FieldSpec& field,
             const SeriesTolerance& tol, ModelCache& cache,
             std::map<long long, double>& by_field, double* err_acc) {
    double sum = 0.0;
    for (const auto& n : q.boundary) {
        double b = field.B(n.x, n.y);
        long long key = (long long)std::llround(b * 1e12); // dedupe constant fields
        auto it = by_field.find(key);
        if (it == by_field.end()) {
            SeriesResult s = s_series(b, f, tol, cache);
            if (err_acc) *err_acc += s.err_est;
            it = by_field.emplace(key, s.value).first;
        }
        sum += n.w * std::sqrt(b) * it->second;
    }
    return sum / (2.0 * M_PI);
}

} // namespace

CoeffResult c1(const TestFunction& f, const DomainSpec& dom, const FieldSpec& field,
               const SeriesTolerance& tol, ModelCache& cache) {
    require_field_positive(dom, field);
    std::map<long long, double> by_field;
    double series_err = 0.0;
    double v1 = c1_on(make_quadrature(dom, 1), f, field, tol, cache, by_field, &series_err);
    double v2 = c1_on(make_quadrature(dom, 2), f, field, tol, cache, by_field, nullptr);
    CoeffResult r{v2, std::abs(v2 - v1) + series_err};
    double allowed = std::max(tol.abs_tol * 1e4, 1e-7 * (std::abs(v2) + 1.0));
    if (std::abs(v2 - v1) > allowed)
        throw numeric_error("c1: quadrature did not settle under one refinement (delta " +
                            std::to_string(std::abs(v2 - v1)) + ")");
    return r;
}

} // namespace magtrace
