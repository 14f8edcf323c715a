#include "banded_internal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magtrace/errors.hpp"
#include "magtrace/tridiag.hpp"

namespace magtrace::detail {

void BandedHermitian::matvec(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    y.assign(n, cplx(0));
    for (int i = 0; i < n; ++i) {
        const cplx* row = &a[(std::size_t)i * (bw + 1)];
        y[i] += row[0] * x[i];
        int j0 = std::max(0, i - bw);
        for (int j = j0; j < i; ++j) {
            cplx v = row[i - j];
            if (v != cplx(0)) {
                y[i] += v * x[j];
                y[j] += std::conj(v) * x[i];
            }
        }
    }
}

void BandedLDLT::factor(const BandedHermitian& A, double sigma) {
    n = A.n;
    bw = A.bw;
    L = A.a;
    d.assign(n, 0.0);
    negative_pivots = 0;
    ok = true;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(A.get(i, i)));
    scale += std::abs(sigma) + 1.0;
    auto el = [&](int i, int j) -> cplx& { return L[(std::size_t)i * (bw + 1) + (i - j)]; };
    for (int j = 0; j < n; ++j) {
        double djj = el(j, j).real() - sigma;
        int k0 = std::max(0, j - bw);
        for (int k = k0; k < j; ++k) djj -= std::norm(el(j, k)) * d[k];
        d[j] = djj;
        if (djj < 0) ++negative_pivots;
        if (std::abs(djj) < 1e-13 * scale) {
            ok = false;
            return;
        }
        int imax = std::min(n - 1, j + bw);
        for (int i = j + 1; i <= imax; ++i) {
            cplx s = el(i, j);
            for (int k = std::max(k0, i - bw); k < j; ++k)
                s -= el(i, k) * std::conj(el(j, k)) * d[k];
            el(i, j) = s / d[j];
        }
    }
}

void BandedLDLT::solve(std::vector<cplx>& x) const {
    auto el = [&](int i, int j) -> const cplx& {
        return L[(std::size_t)i * (bw + 1) + (i - j)];
    };
    for (int i = 0; i < n; ++i) {
        cplx s = x[i];
        int j0 = std::max(0, i - bw);
        for (int j = j0; j < i; ++j) s -= el(i, j) * x[j];
        x[i] = s;
    }
    for (int i = 0; i < n; ++i) x[i] /= d[i];
    for (int i = n - 1; i >= 0; --i) {
        cplx s = x[i];
        int imax = std::min(n - 1, i + bw);
        for (int j = i + 1; j <= imax; ++j) s -= std::conj(el(j, i)) * x[j];
        x[i] = s;
    }
}

int inertia_below(const BandedHermitian& A, double sigma) {
    BandedLDLT f;
    double shift = sigma;
    for (int attempt = 0; attempt < 6; ++attempt) {
        f.factor(A, shift);
        if (f.ok) return f.negative_pivots;
        shift = sigma + (attempt + 1) * 3e-11 * (1.0 + std::abs(sigma));
    }
    throw numeric_error("inertia_below: factorization kept breaking down near sigma=" +
                        std::to_string(sigma));
}

namespace {

struct Xorshift {
    unsigned long long s;
    explicit Xorshift(unsigned long long seed) : s(seed) {}
    double next() { // in (-1, 1)
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return 2.0 * ((double)(s % 1000003ULL) / 1000003.0) - 1.0;
    }
};

} // namespace

std::vector<double> eigenvalues_below_si(const BandedHermitian& A, double bound,
                                         int max_steps) {
    const int n = A.n;
    const int wanted = inertia_below(A, bound);
    if (wanted == 0) return {};
    if (max_steps <= 0) max_steps = std::min(n, std::max(200, 6 * wanted + 60));

    BandedLDLT op;
    op.factor(A, -1.0); // A is PSD in our uses, so A + I is definite
    if (!op.ok) throw numeric_error("shift-invert factorization at sigma=-1 failed");

    const double theta_min = 1.0 / (1.0 + bound); // Op eigenvalue at the bound

    std::vector<std::vector<cplx>> V;
    std::vector<double> alpha, beta;
    Xorshift rng(0x2545F4914F6CDD1DULL);
    std::vector<cplx> v(n), w(n);
    auto randomize = [&](std::vector<cplx>& u) {
        for (auto& z : u) z = cplx(rng.next(), rng.next());
    };
    auto normalize = [&](std::vector<cplx>& u) {
        double nn = 0.0;
        for (auto& z : u) nn += std::norm(z);
        nn = std::sqrt(nn);
        if (nn > 0)
            for (auto& z : u) z /= nn;
        return nn;
    };
    auto reorth = [&](std::vector<cplx>& u) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : V) {
                cplx dot(0);
                for (int i = 0; i < n; ++i) dot += std::conj(q[i]) * u[i];
                for (int i = 0; i < n; ++i) u[i] -= dot * q[i];
            }
    };

    randomize(v);
    normalize(v);

    const int check_every = 20;
    for (int step = 1; step <= max_steps; ++step) {
        V.push_back(v);
        w = v;
        op.solve(w);
        cplx adot(0);
        for (int i = 0; i < n; ++i) adot += std::conj(v[i]) * w[i];
        alpha.push_back(adot.real());
        reorth(w);
        double b = normalize(w);
        if (b < 1e-12) {
            // invariant subspace exhausted: continue in its orthogonal complement
            randomize(w);
            reorth(w);
            if (normalize(w) < 1e-12) break;
            b = 0.0;
        }
        beta.push_back(b);
        v = w;

        if (step % check_every == 0 || step == max_steps) {
            SymTridiag T;
            T.diag = alpha;
            T.off.assign(beta.begin(), beta.end() - 1);
            int m = (int)alpha.size();
            int cnt = m - sturm_count(T, theta_min); // Ritz thetas above theta_min
            if (cnt < wanted) continue;
            auto thetas = eigenvalues_by_index(T, m - wanted + 1, m); // top `wanted`
            // residual bound |beta_m * s_m| per Ritz pair, mapped to lambda scale
            double bm = beta.back();
            bool converged = true;
            std::vector<double> lams;
            for (double th : thetas) {
                if (th <= 0) {
                    converged = false;
                    break;
                }
                auto s = eigenvector(T, th);
                double res_theta = std::abs(bm * s[m - 1]);
                double res_lambda = res_theta / (th * th);
                if (res_lambda > 1e-9 * (1.0 + bound)) {
                    converged = false;
                    break;
                }
                lams.push_back(1.0 / th - 1.0);
            }
            if (!converged) continue;
            std::sort(lams.begin(), lams.end());
            // certified: the `wanted` lowest all lie below the bound
            if ((int)lams.size() == wanted && lams.back() < bound) return lams;
        }
    }
    throw numeric_error("shift-invert Lanczos did not certify " + std::to_string(wanted) +
                        " eigenvalues below " + std::to_string(bound));
}

} // namespace magtrace::detail
