#ifndef MAGTRACE_GEOMETRY_HPP
#define MAGTRACE_GEOMETRY_HPP

#include <string>
#include <utility>
#include <vector>

#include "magtrace/coeff.hpp"
#include "magtrace/testfunction.hpp"

namespace magtrace {

// Bounded domain with one smooth boundary component: disk, axis-aligned
// centered rectangle, or star-shaped region r < rho(theta) with rho a finite
// Fourier series (C^2 by construction).
class DomainSpec {
public:
    enum class Kind { disk, rectangle, star };

    static DomainSpec disk(double R);
    static DomainSpec rectangle(double Lx, double Ly);
    static DomainSpec star(double rho0, std::vector<double> cos_coeffs,
                           std::vector<double> sin_coeffs);

    Kind kind() const { return kind_; }
    double area() const;
    double perimeter() const;
    double max_radius() const; // sup |x| over the closure
    DomainSpec dilate(double lambda) const;
    std::string describe() const;

    // star/disk boundary radius at angle theta (rectangle: not meaningful)
    double rho(double theta) const;
    double drho(double theta) const;

    double param_R() const { return R_; }
    double param_Lx() const { return Lx_; }
    double param_Ly() const { return Ly_; }

private:
    DomainSpec() = default;
    Kind kind_ = Kind::disk;
    double R_ = 0.0, Lx_ = 0.0, Ly_ = 0.0;
    double rho0_ = 0.0;
    std::vector<double> ac_, as_;
};

// Magnetic field profile with inf B > 0 on bounded sets.
class FieldSpec {
public:
    enum class Kind { constant, radial_bump };

    static FieldSpec constant(double B0);
    // B(x) = B0 (1 + a exp(-|x|^2 / sigma^2)), |a| < 1
    static FieldSpec radial_bump(double B0, double a, double sigma);

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::constant; }
    double B(double x, double y) const;
    // azimuthal flux F(r) = int_0^r s B(s) ds (radial profiles only)
    double flux(double r) const;
    FieldSpec dilate(double lambda) const; // x -> B(x / lambda)
    std::string describe() const;

    double param_B0() const { return B0_; }
    double param_a() const { return a_; }
    double param_sigma() const { return sigma_; }

private:
    FieldSpec() = default;
    Kind kind_ = Kind::constant;
    double B0_ = 0.0, a_ = 0.0, sigma_ = 1.0;
};

struct QuadNode {
    double x, y, w;
};

// Area and boundary quadratures. Area: polar tensor grid (disk/star) or
// tensor Gauss-Legendre (rectangle). Boundary: uniform in the boundary
// parameter with the metric factor |gamma'|, per-edge Gauss-Legendre for the
// rectangle.
struct Quadrature2D {
    std::vector<QuadNode> area;
    std::vector<QuadNode> boundary;
};
Quadrature2D make_quadrature(const DomainSpec& dom, int level = 1);

// (B_min, B_max) over the domain: quadrature-grid extremes merged with the
// analytic bounds of the closed-form variants.
std::pair<double, double> field_range(const DomainSpec& dom, const FieldSpec& field);

// Throws precondition_error naming the violating node if B <= 0 anywhere on
// the quadrature grid.
void require_field_positive(const DomainSpec& dom, const FieldSpec& field);

struct CoeffResult {
    double value = 0.0;
    double err_est = 0.0;
};

// Bulk coefficient: C0(f) = int_Omega landau_density(B(x), f) dx.
CoeffResult c0(const TestFunction& f, const DomainSpec& dom, const FieldSpec& field,
               const SeriesTolerance& tol);

// Boundary coefficient: C1(f) = (2pi)^{-1} int_bdry sum_k s_k(B(x), f) sqrt(B(x)) dsigma.
CoeffResult c1(const TestFunction& f, const DomainSpec& dom, const FieldSpec& field,
               const SeriesTolerance& tol, ModelCache& cache);

} // namespace magtrace

#endif
