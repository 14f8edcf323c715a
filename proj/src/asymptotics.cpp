#include "magtrace/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "magtrace/errors.hpp"
#include "magtrace/parallel.hpp"
#include "magtrace/quadrature.hpp"

namespace magtrace {

double predict_trace(double h, double c0, double c1) {
    if (!(h > 0)) throw precondition_error("predict_trace: h must be > 0");
    return (c0 + std::sqrt(h) * c1) / h;
}

namespace {

double trace_cutoff(const TestFunction& f, double B) {
    return std::max(3.0 * B + 1.0, f.support_end(1e-16)) + 0.5;
}

int disk_grid_n(double R, double E_cut) {
    int n_acc = (int)std::ceil(R / 0.01);
    int n_osc = (int)std::ceil(10.0 * R * std::sqrt(E_cut) / (2.0 * M_PI)) + 1;
    return std::max({200, n_acc, n_osc});
}

} // namespace

TraceExact semiclassical_trace_exact(const DomainSpec& dom, const FieldSpec& field,
                                     const TestFunction& f, double h) {
    if (dom.kind() != DomainSpec::Kind::disk)
        throw precondition_error("semiclassical_trace_exact: sharp mode needs a disk");
    if (!field.is_constant())
        throw precondition_error("semiclassical_trace_exact: field must be constant");
    if (!(h > 0)) throw precondition_error("semiclassical_trace_exact: h must be > 0");
    double B = field.param_B0();
    double R = dom.param_R() / std::sqrt(h);
    if (R > 25.0 + 1e-9)
        throw precondition_error("semiclassical_trace_exact: dilated radius " +
                                 std::to_string(R) + " beyond desk scale 25");
    double E_cut = trace_cutoff(f, B);
    TraceExact out;
    out.spectrum = disk_spectrum(R, B, E_cut, disk_grid_n(R, E_cut));
    auto tr = trace_f(out.spectrum, f, 1e-8);
    out.value = tr.value;
    out.tail_bound = tr.tail_bound;
    return out;
}

namespace {

// loose-mode trace on the dilated rectangle through the FD solver
double rectangle_trace(const DomainSpec& dom, const FieldSpec& field, const TestFunction& f,
                       double h) {
    double Lx = dom.param_Lx() / std::sqrt(h);
    double Ly = dom.param_Ly() / std::sqrt(h);
    double B = field.param_B0();
    double E_cut = trace_cutoff(f, B);
    auto pick_n = [&](double L) {
        int n = (int)std::ceil(L / 0.045);
        n = std::max(n, 64);
        if (n % 2) ++n;
        return n;
    };
    auto spec = rectangle_spectrum_fd(Lx, Ly, field, E_cut, pick_n(Lx), pick_n(Ly),
                                      Gauge::landau_x);
    return trace_f(spec, f, 1e-6).value;
}

} // namespace

ConvergenceReport convergence_study(const DomainSpec& dom, const FieldSpec& field,
                                    const TestFunction& f, std::vector<double> h_list,
                                    ModelCache& cache, double rel_tol) {
    if (!field.is_constant())
        throw precondition_error("convergence_study: field must be constant");
    bool sharp = dom.kind() == DomainSpec::Kind::disk;
    if (!sharp && dom.kind() != DomainSpec::Kind::rectangle)
        throw precondition_error("convergence_study: disk (sharp) or rectangle (loose) only");
    std::sort(h_list.begin(), h_list.end(), std::greater<>());
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw precondition_error("convergence_study: h_list must be strictly decreasing");
    if (h_list.empty()) throw precondition_error("convergence_study: empty h_list");

    ConvergenceReport rep;
    rep.h_list = h_list;
    SeriesTolerance tol;
    rep.c0 = c0(f, dom, field, tol).value;
    rep.c1 = c1(f, dom, field, tol, cache).value;

    for (double h : h_list) {
        double tr = sharp ? semiclassical_trace_exact(dom, field, f, h).value
                          : rectangle_trace(dom, field, f, h);
        rep.traces.push_back(tr);
        double res = h * tr - rep.c0;
        rep.residuals.push_back(res);
        rep.extracted_c1.push_back(res / std::sqrt(h));
    }

    // empirical remainder order: slope of log|extracted - c1| against log h
    {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < h_list.size(); ++i) {
            double d = std::abs(rep.extracted_c1[i] - rep.c1);
            if (d > 0) {
                xs.push_back(std::log(h_list[i]));
                ys.push_back(std::log(d));
            }
        }
        if (xs.size() >= 2) {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= xs.size();
            my /= ys.size();
            double num = 0, den = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                num += (xs[i] - mx) * (ys[i] - my);
                den += (xs[i] - mx) * (xs[i] - mx);
            }
            rep.fit_slope = (den > 0) ? num / den : 0.0;
        }
    }

    for (std::size_t i = 1; i < rep.extracted_c1.size(); ++i) {
        if (std::abs(rep.extracted_c1[i] - rep.c1) >
            std::abs(rep.extracted_c1[i - 1] - rep.c1)) {
            std::ostringstream os;
            os << "non-monotone residual trend between h=" << h_list[i - 1]
               << " and h=" << h_list[i];
            rep.warnings.push_back(os.str());
        }
    }

    double final_err = std::abs(rep.extracted_c1.back() - rep.c1);
    if (final_err > rel_tol * std::abs(rep.c1) + 1e-12)
        throw numeric_error("convergence_study: extracted c1 off by " +
                            std::to_string(final_err) + " at h=" +
                            std::to_string(h_list.back()));
    return rep;
}

namespace {

double model_e(ModelCache& cache, double xi, int k) {
    return (*cache.refined(xi, k, 0.01, false))[k - 1].e;
}

// threshold xi* with B e_k(xi*) = E on the increasing branch
double kunz_threshold(ModelCache& cache, double B, double E, int k) {
    double target = E / B;
    double lo = -6.0 * std::sqrt((double)k) - 2.0;
    int guard = 0;
    while (model_e(cache, lo, k) >= target) {
        lo -= 2.0;
        if (++guard > 20) throw numeric_error("kunz threshold: no lower bracket");
    }
    double hi = std::sqrt(std::max(target - (4.0 * k - 1.0), 0.0)) + 0.5;
    guard = 0;
    while (model_e(cache, hi, k) <= target) {
        hi += 1.0;
        if (++guard > 20) throw numeric_error("kunz threshold: no upper bracket");
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (model_e(cache, mid, k) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// W_k = int_0^T (1 - int_{xi_lo}^{xi*} psi_k(t,xi)^2 dxi) dt on one t-lattice
double kunz_term_on_lattice(double xi_star, int k, double delta) {
    double T = std::max(0.0, -xi_star) + std::sqrt(4.0 * k + 3.0) + 6.0;
    double xi_lo = std::min(-T, xi_star) - 6.0 * std::sqrt((double)k) - 4.0;

    std::vector<double> edges;
    {
        std::vector<double> marks{xi_lo, -6.0 * std::sqrt((double)k), 0.0, xi_star};
        std::sort(marks.begin(), marks.end());
        for (double m : marks)
            if (m >= xi_lo && m <= xi_star &&
                (edges.empty() || m > edges.back() + 1e-12))
                edges.push_back(m);
        std::vector<double> dense;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            double len = edges[i + 1] - edges[i];
            int parts = std::max(1, (int)std::ceil(len / 2.0));
            for (int s = 0; s < parts; ++s) dense.push_back(edges[i] + len * s / parts);
        }
        dense.push_back(xi_star);
        edges.swap(dense);
    }
    std::vector<double> xi_nodes, xi_weights;
    {
        std::vector<double> gx, gw;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            gauss_legendre_ab(16, edges[i], edges[i + 1], gx, gw);
            xi_nodes.insert(xi_nodes.end(), gx.begin(), gx.end());
            xi_weights.insert(xi_weights.end(), gw.begin(), gw.end());
        }
    }

    const long J = std::lround(T / delta);
    std::vector<double> mass(J + 1, 0.0);
    std::vector<std::vector<double>> contrib(xi_nodes.size());
    parallel_for(xi_nodes.size(), [&](std::size_t i) {
        double xi = xi_nodes[i];
        ModelGrid g = ModelGrid::for_problem(xi, k, delta);
        auto pairs = model_eigensystem(xi, k, g, true);
        const ModelEigenpair& p = pairs[k - 1];
        std::vector<double> col(J + 1, 0.0);
        long jmax = std::min<long>(J, (long)p.psi.size());
        for (long j = 1; j <= jmax; ++j) {
            double ps = p.psi[j - 1];
            col[j] = xi_weights[i] * ps * ps;
        }
        contrib[i] = std::move(col);
    });
    for (const auto& col : contrib)
        for (long j = 0; j <= J; ++j) mass[j] += col[j];
    for (long j = 0; j <= J; ++j) mass[j] = 1.0 - mass[j];
    return simpson_uniform(mass, delta);
}

} // namespace

KunzShift kunz_shift(double B, double E, int K, ModelCache& cache, double spacing) {
    if (!(B > 0)) throw precondition_error("kunz_shift: B must be > 0");
    if (K < 1) throw precondition_error("kunz_shift: K must be >= 1");
    if (!(E > (2.0 * K - 1.0) * B) || !(E < (2.0 * K + 1.0) * B)) {
        std::ostringstream os;
        os << "kunz_shift: E=" << E << " outside the gap ((" << 2 * K - 1 << ")B, ("
           << 2 * K + 1 << ")B) at B=" << B;
        throw precondition_error(os.str());
    }
    KunzShift out;
    out.B = B;
    out.E = E;
    out.K = K;
    for (int k = 1; k <= K; ++k) {
        double xs = kunz_threshold(cache, B, E, k);
        double coarse = kunz_term_on_lattice(xs, k, spacing);
        double fine = kunz_term_on_lattice(xs, k, spacing / 2.0);
        out.value += (4.0 * fine - coarse) / 3.0;
        out.err_est += std::abs(fine - coarse) / 3.0;
    }
    return out;
}

CountingPrediction counting_prediction(const DomainSpec& dom, const FieldSpec& field,
                                       double E, int K, ModelCache& cache) {
    auto [bmin, bmax] = field_range(dom, field);
    if (!((2.0 * K - 1.0) * bmax < (2.0 * K + 1.0) * bmin)) {
        std::ostringstream os;
        os << "gap condition violated: K=" << K << ", B_min=" << bmin << ", B_max=" << bmax;
        throw precondition_error(os.str());
    }
    if (!(E > (2.0 * K - 1.0) * bmax) || !(E < (2.0 * K + 1.0) * bmin)) {
        std::ostringstream os;
        os << "counting energy E=" << E << " outside ((2K-1)B_max, (2K+1)B_min) = ("
           << (2.0 * K - 1.0) * bmax << ", " << (2.0 * K + 1.0) * bmin << ")";
        throw precondition_error(os.str());
    }

    CountingPrediction out;
    auto q = make_quadrature(dom, 2);
    for (const auto& n : q.area) out.bulk += n.w * field.B(n.x, n.y);
    out.bulk *= K / (2.0 * M_PI);

    std::map<long long, double> memo;
    for (const auto& n : q.boundary) {
        double b = field.B(n.x, n.y);
        long long key = (long long)std::llround(b * 1e12);
        auto it = memo.find(key);
        if (it == memo.end())
            it = memo.emplace(key, kunz_shift(b, E, K, cache).value).first;
        out.boundary += n.w * std::sqrt(b) * it->second;
    }
    out.boundary /= 2.0 * M_PI;
    return out;
}

CountingReport counting_vs_exact(const DomainSpec& dom, const FieldSpec& field, double E,
                                 int K, const std::vector<double>& h_list,
                                 ModelCache& cache) {
    if (dom.kind() != DomainSpec::Kind::disk || !field.is_constant())
        throw precondition_error("counting_vs_exact: disk with constant field only");
    CountingReport rep;
    rep.h_list = h_list;
    auto pred = counting_prediction(dom, field, E, K, cache);
    rep.bulk = pred.bulk;
    rep.boundary = pred.boundary;
    double B = field.param_B0();
    for (double h : h_list) {
        double R = dom.param_R() / std::sqrt(h);
        double E_cut = E + 0.25;
        auto spec = disk_spectrum(R, B, E_cut, disk_grid_n(R, E_cut));
        long N = count_below(spec, E);
        rep.counts.push_back(N);
        rep.scaled_deficit.push_back((N - pred.bulk / h) * std::sqrt(h));
    }
    return rep;
}

ThermoResult thermo_density(double B, const TestFunction& f, double L,
                            const DomainSpec& dom, ModelCache& cache) {
    if (L < 1.0) throw precondition_error("thermo_density: L must be >= 1");
    if (dom.kind() != DomainSpec::Kind::disk)
        throw precondition_error("thermo_density: disk reference domain required");
    ThermoResult out;
    out.L = L;
    out.h = 1.0 / (L * L);
    auto field = FieldSpec::constant(B);
    auto tr = semiclassical_trace_exact(dom, field, f, out.h);
    out.trace = tr.value;
    double area_L = dom.area() * L * L;
    out.lhs = tr.value / area_L;

    SeriesTolerance tol;
    double bulk = landau_density(B, f, tol);
    double sser = s_series(B, f, tol, cache).value;
    out.rhs = bulk + (std::sqrt(B) * dom.perimeter() / (2.0 * M_PI * dom.area())) * sser / L;
    out.gap = out.lhs - out.rhs;
    return out;
}

std::complex<double> mehler_heat_kernel(double b, double t, std::array<double, 2> x,
                                        std::array<double, 2> xp) {
    if (!(t > 0)) throw precondition_error("mehler_heat_kernel: t must be > 0");
    if (b < 0) throw precondition_error("mehler_heat_kernel: b must be >= 0");
    double bt = b * t;
    if (bt >= 700.0) throw precondition_error("mehler_heat_kernel: b t overflow guard");
    double dx = x[0] - xp[0], dy = x[1] - xp[1];
    double d2 = dx * dx + dy * dy;
    double cross = x[0] * xp[1] - x[1] * xp[0];
    // z/sinh z and z/tanh z, stable at small z
    double zs, zt;
    if (bt < 1e-6) {
        zs = 1.0 - bt * bt / 6.0;
        zt = 1.0 + bt * bt / 3.0;
    } else {
        zs = bt / std::sinh(bt);
        zt = bt / std::tanh(bt);
    }
    double amp = zs / (4.0 * M_PI * t);
    double expo = -d2 / (4.0 * t) * zt;
    double phase = -0.5 * b * cross;
    return amp * std::exp(expo) * std::exp(std::complex<double>(0.0, phase));
}

} // namespace magtrace
