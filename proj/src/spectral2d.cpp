#include "magtrace/spectral2d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "banded_internal.hpp"
#include "magtrace/errors.hpp"
#include "magtrace/parallel.hpp"
#include "magtrace/quadrature.hpp"
#include "magtrace/tridiag.hpp"

namespace magtrace {

namespace {

// Minimum of the channel potential (m/r - B r/2)^2 over (0, R]; a variational
// lower bound for every eigenvalue of the channel.
double channel_potential_min(double R, double B, int m) {
    if (m >= 0) {
        double r_star = std::sqrt(2.0 * m / B);
        if (r_star <= R) return 0.0;
        double v = m / R - B * R / 2.0;
        return v * v;
    }
    double ma = -(double)m;
    double r_star = std::sqrt(2.0 * ma / B);
    if (r_star <= R) return 2.0 * B * ma;
    double v = ma / R + B * R / 2.0;
    return v * v;
}

// Cell-centered flux-form discretization of the radial operator, symmetrized
// by v = sqrt(r) u. Faces sit at j h; the zero-area face at r = 0 encodes
// regularity, the antisymmetric ghost encodes u(R) = 0.
SymTridiag radial_matrix(double R, double B, int m, int n) {
    double h = R / n;
    SymTridiag T;
    T.diag.resize(n);
    T.off.resize(n - 1);
    auto rc = [&](int j) { return (j - 0.5) * h; }; // 1-based cell center
    for (int j = 1; j <= n; ++j) {
        double r = rc(j);
        double q = m / r - B * r / 2.0;
        double flo = (j == 1) ? 0.0 : (j - 1) * h;
        double fhi = (j == n) ? 2.0 * n * h : j * h;
        T.diag[j - 1] = (flo + fhi) / (r * h * h) + q * q;
    }
    for (int j = 1; j < n; ++j)
        T.off[j - 1] = -(j * h) / (h * h * std::sqrt(rc(j) * rc(j + 1)));
    return T;
}

std::vector<double> radial_eigs_below(double R, double B, int m, int n, double bound) {
    SymTridiag T = radial_matrix(R, B, m, n);
    return eigenvalues_below(T, bound);
}

std::vector<double> radial_eigs_by_index(double R, double B, int m, int n, int count) {
    SymTridiag T = radial_matrix(R, B, m, n);
    return eigenvalues_by_index(T, 1, count);
}

} // namespace

RadialChannel radial_channel(double R, double B, int m, double E_cut, int n) {
    if (!(R > 0) || B < 0) throw precondition_error("radial_channel: R > 0, B >= 0 required");
    if (!(E_cut > 0)) throw precondition_error("radial_channel: E_cut must be > 0");
    if (n < 200) throw precondition_error("radial_channel: n must be >= 200");
    // at least 10 grid points per local oscillation at energy E_cut
    double pts_per_osc = 2.0 * M_PI / (std::sqrt(E_cut) * (R / n));
    if (pts_per_osc < 10.0)
        throw precondition_error("radial_channel: grid too coarse (" +
                                 std::to_string(pts_per_osc) +
                                 " points per oscillation at E_cut)");

    RadialChannel ch;
    ch.m = m;
    ch.R = R;
    ch.B = B;
    ch.n_grid = n;

    // search past the cutoff so refinement cannot lose a grazing eigenvalue
    double slack = 0.05 * (1.0 + E_cut);
    std::vector<double> fine = radial_eigs_below(R, B, m, 2 * n, E_cut + slack);
    if (fine.empty()) return ch;
    std::vector<double> coarse = radial_eigs_by_index(R, B, m, n, (int)fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        double rich = (4.0 * fine[i] - coarse[i]) / 3.0;
        double err = std::abs(fine[i] - coarse[i]) / 3.0;
        if (rich <= E_cut) {
            ch.eigenvalues.push_back(rich);
            ch.err_est.push_back(err);
        }
    }
    return ch;
}

Spectrum disk_spectrum(double R, double B, double E_cut, int n) {
    if (!(R > 0) || !(B > 0)) throw precondition_error("disk_spectrum: R, B must be > 0");

    std::vector<int> ms;
    for (int m = 0;; ++m) {
        if (channel_potential_min(R, B, m) > E_cut && m > B * R * R / 2.0) break;
        if (channel_potential_min(R, B, m) <= E_cut) ms.push_back(m);
    }
    for (int m = -1;; --m) {
        if (channel_potential_min(R, B, m) > E_cut) break;
        ms.push_back(m);
    }

    std::vector<RadialChannel> channels(ms.size());
    parallel_for(ms.size(), [&](std::size_t i) {
        channels[i] = radial_channel(R, B, ms[i], E_cut, n);
    });

    struct Entry {
        double e, err;
        int m;
    };
    std::vector<Entry> all;
    for (const auto& ch : channels)
        for (std::size_t i = 0; i < ch.eigenvalues.size(); ++i)
            all.push_back({ch.eigenvalues[i], ch.err_est[i], ch.m});
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.e < b.e; });

    Spectrum s;
    s.E_cut = E_cut;
    s.method = "disk_separation";
    s.grid = n;
    {
        std::ostringstream os;
        os << "disk{R=" << R << "}";
        s.domain = os.str();
        std::ostringstream of;
        of << "constant{B0=" << B << "}";
        s.field = of.str();
    }
    for (const auto& e : all) {
        s.eigenvalues.push_back(e.e);
        s.err_est.push_back(e.err);
        s.channel.push_back(e.m);
    }
    return s;
}

namespace {

// link phase integrals by the midpoint rule
struct GaugeField {
    const FieldSpec* field;
    Gauge gauge;

    double Ax(double x, double y) const {
        if (gauge == Gauge::landau_x) {
            if (field->is_constant()) return -field->param_B0() * y;
            // A_x = -int_0^y B(x, s) ds for the radial bump profile
            double B0 = field->param_B0(), a = field->param_a(), s = field->param_sigma();
            double g = B0 * (y + a * std::exp(-x * x / (s * s)) * 0.5 * s * std::sqrt(M_PI) *
                                     std::erf(y / s));
            return -g;
        }
        double r2 = x * x + y * y;
        if (r2 < 1e-24) return -0.5 * field->B(0.0, 0.0) * y;
        return -field->flux(std::sqrt(r2)) / r2 * y;
    }
    double Ay(double x, double y) const {
        if (gauge == Gauge::landau_x) return 0.0;
        double r2 = x * x + y * y;
        if (r2 < 1e-24) return 0.5 * field->B(0.0, 0.0) * x;
        return field->flux(std::sqrt(r2)) / r2 * x;
    }
};

detail::BandedHermitian build_rectangle(double Lx, double Ly, const FieldSpec& field,
                                        int nx, int ny, Gauge gauge) {
    const int mx = nx - 1, my = ny - 1;
    const double hx = Lx / nx, hy = Ly / ny;
    detail::BandedHermitian A(mx * my, mx);
    GaugeField gf{&field, gauge};
    auto X = [&](int i) { return -Lx / 2 + (i + 1) * hx; };
    auto Y = [&](int j) { return -Ly / 2 + (j + 1) * hy; };
    for (int j = 0; j < my; ++j)
        for (int i = 0; i < mx; ++i) {
            int id = j * mx + i;
            A.at(id, id) = 2.0 / (hx * hx) + 2.0 / (hy * hy);
            if (i > 0) {
                double phase = gf.Ax(X(i - 1) + hx / 2, Y(j)) * hx;
                A.at(id, id - 1) = -std::exp(detail::cplx(0.0, -phase)) / (hx * hx);
            }
            if (j > 0) {
                double phase = gf.Ay(X(i), Y(j - 1) + hy / 2) * hy;
                A.at(id, id - mx) = -std::exp(detail::cplx(0.0, -phase)) / (hy * hy);
            }
        }
    return A;
}

std::vector<double> rectangle_eigs(double Lx, double Ly, const FieldSpec& field,
                                   int nx, int ny, Gauge gauge, double bound) {
    auto A = build_rectangle(Lx, Ly, field, nx, ny, gauge);
    return detail::eigenvalues_below_si(A, bound);
}

} // namespace

Spectrum rectangle_spectrum_fd(double Lx, double Ly, const FieldSpec& field, double E_cut,
                               int nx, int ny, Gauge gauge) {
    if (!(Lx > 0) || !(Ly > 0)) throw precondition_error("rectangle: sides must be > 0");
    if (nx < 64 || ny < 64) throw precondition_error("rectangle_spectrum_fd: nx, ny >= 64");
    if (nx % 2 || ny % 2)
        throw precondition_error("rectangle_spectrum_fd: nx, ny must be even (two-grid solve)");
    auto dom = DomainSpec::rectangle(Lx, Ly);
    auto [bmin, bmax] = field_range(dom, field);
    if (bmin < 0) throw precondition_error("rectangle_spectrum_fd: field must be nonnegative");
    double hmax = std::max(Lx / nx, Ly / ny);
    if (bmax * hmax * hmax > 0.1)
        throw precondition_error("rectangle_spectrum_fd: flux per plaquette too large");

    double slack = 0.1 * (1.0 + E_cut);
    std::vector<double> fine, coarse;
    // two independent jobs
    parallel_for(2, [&](std::size_t which) {
        if (which == 0) fine = rectangle_eigs(Lx, Ly, field, nx, ny, gauge, E_cut + slack);
        else coarse = rectangle_eigs(Lx, Ly, field, nx / 2, ny / 2, gauge, E_cut + slack);
    });

    Spectrum s;
    s.E_cut = E_cut;
    s.method = "rectangle_fd";
    s.grid = (long)nx * ny;
    s.domain = dom.describe();
    s.field = field.describe();
    std::size_t paired = std::min(fine.size(), coarse.size());
    std::vector<std::pair<double, double>> vals; // (extrapolated, err)
    for (std::size_t i = 0; i < paired; ++i) {
        double rich = (4.0 * fine[i] - coarse[i]) / 3.0;
        double err = std::abs(fine[i] - coarse[i]) / 3.0;
        if (rich <= E_cut) vals.emplace_back(rich, err);
    }
    std::sort(vals.begin(), vals.end()); // extrapolation can reorder near-degeneracies
    for (const auto& [e, err] : vals) {
        s.eigenvalues.push_back(e);
        s.err_est.push_back(err);
        s.channel.push_back(Spectrum::kNoChannel);
    }
    return s;
}

TraceResult trace_f(const Spectrum& spec, const TestFunction& f, double tail_tol) {
    TraceResult r;
    double sum = 0.0, comp = 0.0;
    for (double e : spec.eigenvalues) { // compensated: traces reach O(h^-1) terms
        double y = f(e) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    r.value = sum;

    // density estimate from the top decade of the computed spectrum, doubled;
    // a certified-empty spectrum has no mass to extrapolate
    double w = std::max(1.0, 0.1 * spec.E_cut);
    auto lo = std::lower_bound(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                               spec.E_cut - w);
    double density = spec.eigenvalues.empty()
                         ? 0.0
                         : 2.0 * std::max<std::ptrdiff_t>(spec.eigenvalues.end() - lo, 1) / w;
    double hi = f.support_end(1e-18) + 1.0;
    double tail_int =
        (hi > spec.E_cut) ? integrate_gk([&](double E) { return f(E); }, spec.E_cut, hi,
                                         1e-14).value
                          : 0.0;
    r.tail_bound = density * tail_int;
    if (r.tail_bound > tail_tol)
        throw numeric_error("trace_f: spectral cutoff too low (tail bound " +
                            std::to_string(r.tail_bound) + ")");
    return r;
}

int count_below(const Spectrum& spec, double E) {
    if (E > spec.E_cut * (1.0 + 1e-12) + 1e-12)
        throw precondition_error("count_below: E exceeds the spectrum cutoff");
    return (int)(std::lower_bound(spec.eigenvalues.begin(), spec.eigenvalues.end(), E) -
                 spec.eigenvalues.begin());
}

} // namespace magtrace
