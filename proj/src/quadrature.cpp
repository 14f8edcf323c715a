#include "magtrace/quadrature.hpp"
#include "magtrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace magtrace {

namespace {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants).
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    double value = resk * h;
    double err = std::abs((resk - resg) * h);
    return {a, b, value, err, depth};
}

} // namespace

QuadResult integrate_gk_panels(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breakpoints, double abs_tol,
                               int max_depth, double max_panel) {
    QuadResult out;
    if (!(b > a)) return out;
    std::vector<double> pts{a};
    for (double x : breakpoints)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    // Pre-split so narrow features cannot slip between the nodes of one panel.
    if (max_panel <= 0.0) max_panel = (b - a) / 16.0;
    {
        std::vector<double> dense;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double len = pts[i + 1] - pts[i];
            int parts = std::max(1, (int)std::ceil(len / max_panel - 1e-12));
            for (int s = 0; s < parts; ++s) dense.push_back(pts[i] + len * s / parts);
        }
        dense.push_back(b);
        pts.swap(dense);
    }

    std::priority_queue<Panel> queue;
    double total = 0.0, toterr = 0.0;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        Panel p = gk15(f, pts[i], pts[i + 1], 0);
        evals += 15;
        total += p.value;
        toterr += p.err;
        queue.push(p);
    }
    while (toterr > abs_tol && !queue.empty()) {
        Panel p = queue.top();
        if (p.depth >= max_depth) break;
        queue.pop();
        total -= p.value;
        toterr -= p.err;
        double mid = 0.5 * (p.a + p.b);
        for (Panel half : {gk15(f, p.a, mid, p.depth + 1), gk15(f, mid, p.b, p.depth + 1)}) {
            evals += 15;
            total += half.value;
            toterr += half.err;
            queue.push(half);
        }
    }
    out.value = total;
    out.err_est = toterr;
    out.evals = evals;
    out.converged = (toterr <= abs_tol) || queue.empty();
    return out;
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    return integrate_gk_panels(f, a, b, {}, abs_tol, max_depth);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw precondition_error("gauss_legendre: n must be positive");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights) {
    gauss_legendre(n, nodes, weights);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = c + h * nodes[i];
        weights[i] *= h;
    }
}

double simpson_uniform(const std::vector<double>& y, double h) {
    const std::size_t m = y.size();
    if (m < 2) return 0.0;
    if (m == 2) return 0.5 * h * (y[0] + y[1]);
    std::size_t last = m - 1;
    double sum = 0.0;
    bool odd_intervals = (last % 2 != 0);
    std::size_t simpson_end = odd_intervals ? last - 1 : last;
    sum += y[0] + y[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) sum += (i % 2 ? 4.0 : 2.0) * y[i];
    sum *= h / 3.0;
    if (odd_intervals) sum += 0.5 * h * (y[last - 1] + y[last]);
    return sum;
}

} // namespace magtrace
