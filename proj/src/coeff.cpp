#include "magtrace/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magtrace/errors.hpp"
#include "magtrace/parallel.hpp"
#include "magtrace/quadrature.hpp"

namespace magtrace {

namespace {

constexpr double kRegionC = 6.0;      // four-region split constant
constexpr double kSupportTol = 1e-13; // |f| below this counts as zero

void check_B(double B) {
    if (!(B > 0)) throw precondition_error("field strength B must be > 0");
}
void check_k(int k) {
    if (k < 1) throw precondition_error("band index k must be >= 1");
}

// Kahan compensated accumulator.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace

double bulk_density_term(double B, const TestFunction& f, int k) {
    check_B(B);
    check_k(k);
    return f((2.0 * k - 1.0) * B);
}

XiWindow XiWindow::automatic(double B, const TestFunction& f, int k, double t_max) {
    check_B(B);
    check_k(k);
    double e_decay = f.support_end(kSupportTol);
    double reach = std::sqrt(std::max(e_decay, 0.0) / B);
    XiWindow w;
    // snapped to a half-integer lattice so nearby B share quadrature nodes
    // (and hence cached model solves)
    w.lo = -0.5 * std::ceil((std::max(kRegionC * std::sqrt((double)k), reach) + t_max + 2.0) /
                            0.5);
    w.hi = 0.5 * std::ceil((reach + 2.0) / 0.5);
    return w;
}

SkResult s_k_alt(double B, const TestFunction& f, int k, const XiWindow& window,
                 ModelCache& cache, double abs_tol, double spacing) {
    check_B(B);
    check_k(k);
    if (!(window.hi > window.lo)) throw precondition_error("s_k_alt: empty xi window");

    const double fb = f((2.0 * k - 1.0) * B);
    double max_err_e = 0.0;
    auto integrand = [&](double xi) {
        const auto pairs = cache.refined(xi, k, spacing, false);
        const ModelEigenpair& p = (*pairs)[k - 1];
        max_err_e = std::max(max_err_e, p.err_e);
        return f(B * p.e) - fb * hermite_tail_mass(k, xi);
    };

    double c = kRegionC * std::sqrt((double)k);
    std::vector<double> brk{-c, 0.0, c};
    QuadResult q = integrate_gk_panels(integrand, window.lo, window.hi, brk, abs_tol, 30, 4.0);

    SkResult r;
    r.k = k;
    r.window = window;
    r.value = q.value;
    // e_k errors enter through f'; bound the propagated effect crudely by the
    // window length times the Lipschitz scale of f over one unit of energy.
    double lip = std::abs(f(B * (2.0 * k - 1.0) + 0.5) - fb) * 2.0 + 1.0;
    r.err_est = q.err_est + max_err_e * B * lip * 0.5 * window.length();
    double edge = std::max(std::abs(integrand(window.lo)), std::abs(integrand(window.hi)));
    r.truncated = edge > std::max(abs_tol, 1e-12);
    return r;
}

SkResult s_k_alt(double B, const TestFunction& f, int k, ModelCache& cache, double abs_tol,
                 double spacing) {
    return s_k_alt(B, f, k, XiWindow::automatic(B, f, k), cache, abs_tol, spacing);
}

SkResult s_k_direct(double B, const TestFunction& f, int k, double t_max,
                    const XiWindow& window, ModelCache& cache, double spacing) {
    check_B(B);
    check_k(k);
    if (t_max < 20.0) throw precondition_error("s_k_direct: t_max must be >= 20");
    if (!(window.hi > window.lo)) throw precondition_error("s_k_direct: empty xi window");
    {
        XiWindow need = XiWindow::automatic(B, f, k, t_max);
        if (window.lo > need.lo + 2.5 || window.hi < need.hi - 2.5)
            throw precondition_error("s_k_direct: xi window does not cover the support");
    }
    (void)cache; // per-node solves are not shared: every (xi, lattice) pair is unique

    // fixed panel structure in xi (tensor grid, shared across the t-lattice)
    std::vector<double> edges{window.lo};
    {
        double c = kRegionC * std::sqrt((double)k);
        std::vector<double> brk{-c, 0.0, c};
        for (double x : brk)
            if (x > window.lo && x < window.hi) edges.push_back(x);
        edges.push_back(window.hi);
        std::sort(edges.begin(), edges.end());
        std::vector<double> dense;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            int parts = std::max(1, (int)std::ceil(edges[i + 1] - edges[i]));
            for (int s = 0; s < parts; ++s)
                dense.push_back(edges[i] + (edges[i + 1] - edges[i]) * s / parts);
        }
        dense.push_back(window.hi);
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

    const double fb = f((2.0 * k - 1.0) * B);

    // one full tensor evaluation on a given t-lattice
    auto evaluate = [&](double delta, double& tail_out) {
        const long J = std::lround(t_max / delta);
        std::vector<double> inner(J + 1, 0.0); // inner xi-integral at t_j = j*delta
        std::vector<std::vector<double>> contrib(xi_nodes.size());
        parallel_for(xi_nodes.size(), [&](std::size_t i) {
            double xi = xi_nodes[i];
            ModelGrid g = ModelGrid::for_problem(xi, k, delta);
            auto pairs = model_eigensystem(xi, k, g, true);
            const ModelEigenpair& p = pairs[k - 1];
            double fe = f(B * p.e) * xi_weights[i];
            std::vector<double> col(J + 1, 0.0);
            long jmax = std::min<long>(J, (long)p.psi.size());
            for (long j = 1; j <= jmax; ++j) {
                double ps = p.psi[j - 1];
                col[j] = fe * ps * ps;
            }
            contrib[i] = std::move(col);
        });
        for (const auto& col : contrib)
            for (long j = 0; j <= J; ++j) inner[j] += col[j];
        for (long j = 0; j <= J; ++j) inner[j] -= fb;
        tail_out = std::abs(inner[J]);
        return simpson_uniform(inner, delta);
    };

    double tail0 = 0.0, tail1 = 0.0, tail2 = 0.0;
    double s0 = evaluate(spacing, tail0);
    double s1 = evaluate(spacing / 2.0, tail1);
    double s2 = evaluate(spacing / 4.0, tail2);
    // double Richardson step: kill the h^2 and h^4 terms of the even expansion
    double t1 = (4.0 * s1 - s0) / 3.0;
    double t2 = (4.0 * s2 - s1) / 3.0;

    SkResult r;
    r.k = k;
    r.window = window;
    r.value = (16.0 * t2 - t1) / 15.0;
    // extrapolation residual plus tail control: the t-tail is
    // bounded by its last sampled magnitude times an O(1) decay length.
    r.err_est = std::abs(t2 - t1) / 15.0 + 2.0 * tail2;
    r.truncated = tail2 > 1e-9;
    return r;
}

SkResult s_k_direct(double B, const TestFunction& f, int k, double t_max,
                    ModelCache& cache, double spacing) {
    return s_k_direct(B, f, k, t_max, XiWindow::automatic(B, f, k, t_max), cache, spacing);
}

SeriesResult s_series(double B, const TestFunction& f, const SeriesTolerance& tol,
                      ModelCache& cache) {
    check_B(B);
    if (tol.abs_tol < 1e-12) throw precondition_error("SeriesTolerance: abs_tol >= 1e-12");
    SeriesResult out;
    Kahan sum;
    int quiet = 0;
    for (int k = 1; k <= tol.k_cap; ++k) {
        XiWindow w = XiWindow::automatic(B, f, k);
        double bound = (f.sup_tail(B * (2.0 * k - 1.0)) + f(B * (2.0 * k - 1.0))) * w.length();
        out.k_used = k;
        if (bound < tol.abs_tol) {
            if (++quiet >= 2) {
                out.value = sum.sum;
                return out;
            }
            continue;
        }
        quiet = 0;
        SkResult term = s_k_alt(B, f, k, w, cache, tol.abs_tol * 0.1);
        sum.add(term.value);
        out.err_est += term.err_est;
        out.terms.push_back(std::move(term));
    }
    throw numeric_error("s_series: no convergence below k_cap=" + std::to_string(tol.k_cap) +
                        " at B=" + std::to_string(B));
}

double landau_density(double B, const TestFunction& f, const SeriesTolerance& tol) {
    if (B < 0) throw precondition_error("landau_density: B must be >= 0");
    if (B == 0.0) return f.integral_0_inf(tol.abs_tol) / (4.0 * M_PI);
    Kahan sum;
    int quiet = 0;
    for (int k = 1; k <= tol.k_cap; ++k) {
        double E = (2.0 * k - 1.0) * B;
        double term = f(E);
        sum.add(term);
        if (f.sup_tail(E) * B / (2.0 * M_PI) < tol.abs_tol) {
            if (++quiet >= 2) return sum.sum * B / (2.0 * M_PI);
        } else {
            quiet = 0;
        }
    }
    throw numeric_error("landau_density: series did not converge below k_cap at B=" +
                        std::to_string(B));
}

} // namespace magtrace
