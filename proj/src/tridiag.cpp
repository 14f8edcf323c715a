#include "magtrace/tridiag.hpp"
#include "magtrace/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magtrace {

int sturm_count(const SymTridiag& T, double x) {
    const int n = T.n();
    int count = 0;
    double p = T.diag[0] - x;
    if (p < 0) ++count;
    for (int i = 1; i < n; ++i) {
        double den = (p == 0.0) ? 1e-300 : p;
        p = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / den;
        if (p < 0) ++count;
    }
    return count;
}

std::pair<double, double> gershgorin_bounds(const SymTridiag& T) {
    const int n = T.n();
    double lo = T.diag[0], hi = T.diag[0];
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(T.off[i - 1]);
        if (i < n - 1) r += std::abs(T.off[i]);
        lo = std::min(lo, T.diag[i] - r);
        hi = std::max(hi, T.diag[i] + r);
    }
    return {lo, hi};
}

namespace {

double bisect_kth(const SymTridiag& T, int k, double lo, double hi) {
    // invariant: count(lo) < k <= count(hi); converges to full relative
    // precision of the bracketed eigenvalue
    while (hi - lo > 2e-16 * (std::abs(lo) + std::abs(hi)) + 1e-300) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(T, mid) >= k) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

// LU with partial pivoting of (T - lambda I). Row swaps introduce a second
// superdiagonal; the factorization is stored band-wise.
struct ShiftedLU {
    int n;
    std::vector<double> sub;  // multipliers, sub[i] eliminates row i (i>=1)
    std::vector<double> d;    // pivots
    std::vector<double> u1;   // first superdiagonal of U
    std::vector<double> u2;   // second superdiagonal of U
    std::vector<bool> swapped;

    ShiftedLU(const SymTridiag& T, double lambda, double tiny) : n(T.n()) {
        sub.assign(n, 0.0);
        d.assign(n, 0.0);
        u1.assign(n, 0.0);
        u2.assign(n, 0.0);
        swapped.assign(n, false);
        for (int i = 0; i < n; ++i) {
            d[i] = T.diag[i] - lambda;
            u1[i] = (i + 1 < n) ? T.off[i] : 0.0;
        }
        for (int i = 0; i + 1 < n; ++i) {
            double lower = T.off[i]; // entry (i+1, i)
            if (std::abs(lower) > std::abs(d[i])) {
                swapped[i] = true;
                std::swap(d[i], lower);       // pivot row becomes old row i+1
                double t = d[i + 1];
                d[i + 1] = u1[i];             // old row i, col i+1
                u1[i] = t;                    // old row i+1, col i+1
                u2[i] = u1[i + 1];            // old row i+1, col i+2
                u1[i + 1] = 0.0;              // old row i had no col i+2 entry
            }
            double piv = (d[i] == 0.0) ? tiny : d[i];
            double m = lower / piv;
            sub[i + 1] = m;
            d[i + 1] -= m * u1[i];
            u1[i + 1] -= m * u2[i];
        }
        for (int i = 0; i < n; ++i)
            if (d[i] == 0.0) d[i] = tiny;
    }

    void solve(std::vector<double>& x) const {
        for (int i = 0; i + 1 < n; ++i) {
            if (swapped[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= sub[i + 1] * x[i];
        }
        x[n - 1] /= d[n - 1];
        if (n >= 2) x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2];
        for (int i = n - 3; i >= 0; --i)
            x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i];
    }
};

} // namespace

std::vector<double> eigenvalues_by_index(const SymTridiag& T, int k_lo, int k_hi) {
    if (k_lo < 1 || k_hi > T.n() || k_lo > k_hi)
        throw precondition_error("eigenvalues_by_index: bad index range");
    auto [glo, ghi] = gershgorin_bounds(T);
    std::vector<double> out;
    out.reserve(k_hi - k_lo + 1);
    double lo = glo;
    for (int k = k_lo; k <= k_hi; ++k) {
        double ev = bisect_kth(T, k, lo, ghi);
        out.push_back(ev);
        lo = std::nextafter(ev, -1e308); // eigenvalues come out ascending
    }
    return out;
}

std::vector<double> eigenvalues_below(const SymTridiag& T, double bound) {
    int cnt = sturm_count(T, bound);
    if (cnt == 0) return {};
    auto vals = eigenvalues_by_index(T, 1, cnt);
    while (!vals.empty() && vals.back() >= bound) vals.pop_back();
    return vals;
}

std::vector<double> eigenvector(const SymTridiag& T, double lambda,
                                const std::vector<std::vector<double>>& previous) {
    const int n = T.n();
    double tnorm = 0.0;
    for (double v : T.diag) tnorm = std::max(tnorm, std::abs(v));
    for (double v : T.off) tnorm = std::max(tnorm, std::abs(v));
    tnorm += 1.0;

    ShiftedLU lu(T, lambda, 1e-300 * tnorm);

    auto orthogonalize = [&](std::vector<double>& x) {
        for (const auto& p : previous) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += p[i] * x[i];
            for (int i = 0; i < n; ++i) x[i] -= dot * p[i];
        }
    };

    // deterministic quasi-random start vector
    std::vector<double> x(n);
    unsigned long long s = 0x9e3779b97f4a7c15ULL ^ (unsigned long long)n;
    for (int i = 0; i < n; ++i) {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        x[i] = 1.0 + 0.5 * ((double)(s % 1000003) / 1000003.0 - 0.5);
    }

    double res = 1e300;
    for (int it = 0; it < 8; ++it) {
        lu.solve(x);
        orthogonalize(x);
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0 || !std::isfinite(norm))
            throw numeric_error("inverse iteration: degenerate iterate");
        for (double& v : x) v /= norm;
        res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = (T.diag[i] - lambda) * x[i];
            if (i > 0) r += T.off[i - 1] * x[i - 1];
            if (i < n - 1) r += T.off[i] * x[i + 1];
            res += r * r;
        }
        res = std::sqrt(res);
        if (res <= 64.0 * 1e-16 * tnorm * std::sqrt((double)n)) break;
    }
    if (res > 1e-8 * tnorm)
        throw numeric_error("inverse iteration failed to converge (residual " +
                            std::to_string(res) + ")");
    return x;
}

} // namespace magtrace
