// Acceptance suite: end-to-end checks of the headline claims on model
// domains, one line per criterion. Exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "magtrace/asymptotics.hpp"

using namespace magtrace;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    const char* title;
    bool pass = true;
    std::string detail;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

void run_criterion(int id, const char* title, double time_budget_s,
                   const std::function<void(Criterion&)>& body) {
    Criterion c{id, title};
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (time_budget_s > 0 && c.seconds > time_budget_s) {
        c.pass = false;
        c.detail += (c.detail.empty() ? "" : "; ") + std::string("runtime ") +
                    std::to_string(c.seconds) + " s over budget " +
                    std::to_string(time_budget_s) + " s";
    }
    std::printf("[%s] criterion %2d: %s (%.1f s)%s%s\n", c.pass ? "PASS" : "FAIL", id, title,
                c.seconds, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.pass) ++g_failures;
}

double linspace_at(double a, double b, int n, int i) {
    return a + (b - a) * i / (n - 1);
}

} // namespace

int main() {
    ModelCache cache;

    // 1. Half-line model exactness: e_k(0) = 4k-1 within 1e-8 after Richardson
    run_criterion(1, "half-line model exactness e_k(0) = 4k-1", 2.0, [&](Criterion& c) {
        double t_max = std::sqrt(4.0 * 6 + 3.0) + 8.0;
        ModelGrid grid{t_max, 2000};
        auto pairs = model_eigensystem_refined(0.0, 6, grid, false);
        for (int k = 1; k <= 6; ++k) {
            double err = std::abs(pairs[k - 1].e - (4.0 * k - 1.0));
            c.expect(err <= 1e-8, "k=" + std::to_string(k) + " err=" + std::to_string(err));
        }
    });

    // 2. eigenvalue bound suite on the xi sweep
    run_criterion(2, "model eigenvalue bounds and decoupling", 10.0, [&](Criterion& c) {
        for (int i = 0; i < 41; ++i) {
            double xi = linspace_at(-12.0, 6.0, 41, i);
            auto grid = ModelGrid::for_problem(xi, 3, 0.01);
            auto pairs = model_eigensystem_refined(xi, 3, grid, false);
            for (int k = 1; k <= 3; ++k) {
                const auto& p = pairs[k - 1];
                double slack = std::max(3.0 * p.err_e, 1e-9);
                c.expect(p.e >= 2.0 * k - 1.0 - slack, "e_k >= 2k-1 fails at xi=" +
                                                           std::to_string(xi));
                if (xi >= 0)
                    c.expect(p.e >= (4.0 * k - 1.0) + xi * xi - slack,
                             "e_k >= 4k-1+xi^2 fails at xi=" + std::to_string(xi));
            }
        }
        {
            auto grid = ModelGrid::for_problem(-8.0, 1, 0.01);
            double e = model_eigensystem_refined(-8.0, 1, grid, false)[0].e;
            c.expect(e - 1.0 <= 1e-6, "e_1(-8)-1 = " + std::to_string(e - 1.0));
        }
        {
            auto grid = ModelGrid::for_problem(-6.0, 1, 0.01);
            auto p = model_eigensystem_refined(-6.0, 1, grid, true)[0];
            double sup = 0.0;
            for (std::size_t i = 0; i < p.psi.size(); ++i) {
                double t = (i + 1) * p.spacing;
                sup = std::max(sup, std::abs(p.psi[i] - hermite_phi(1, t - 6.0)));
            }
            c.expect(sup <= 1e-4, "sup|psi_1 - phi_1(.-6)| = " + std::to_string(sup));
        }
    });

    // 3. Hadamard identity at 15 (k, xi) pairs
    run_criterion(3, "Hadamard identity de_k/dxi = psi_k'(0)^2", 0, [&](Criterion& c) {
        for (int k : {1, 2, 3})
            for (double xi : {-6.0, -2.0, 0.0, 1.0, 3.0}) {
                auto [fd, dp2] = hadamard_check(k, xi, 1e-3);
                c.expect(std::abs(fd - dp2) <= 1e-4,
                         "k=" + std::to_string(k) + " xi=" + std::to_string(xi) +
                             " |diff|=" + std::to_string(std::abs(fd - dp2)));
            }
    });

    // 4. Two forms of the boundary density agree
    run_criterion(4, "s_k direct vs alternative form", 0, [&](Criterion& c) {
        std::vector<TestFunction> fs{TestFunction::gaussian(1.0, 2.0),
                                     TestFunction::fermi_dirac(5.0, 2.0)};
        for (const auto& f : fs)
            for (double B : {0.5, 1.0, 2.0})
                for (int k = 1; k <= 5; ++k) {
                    auto alt = s_k_alt(B, f, k, cache, 1e-11, 0.01);
                    auto dir = s_k_direct(B, f, k, 20.0, cache);
                    double tol = std::max(1e-6 * std::abs(alt.value), 1e-9);
                    c.expect(std::abs(alt.value - dir.value) <= tol,
                             "B=" + std::to_string(B) + " k=" + std::to_string(k) +
                                 " diff=" + std::to_string(alt.value - dir.value));
                }
    });

    // 5. Kunz shift: sign, monotonicity, endpoint behavior
    run_criterion(5, "Kunz boundary shift properties", 0, [&](Criterion& c) {
        std::vector<double> values;
        for (int i = 0; i < 20; ++i) {
            double E = linspace_at(1.05, 2.95, 20, i);
            auto w = kunz_shift(1.0, E, 1, cache);
            values.push_back(w.value);
            c.expect(w.value >= 0.0, "negative at E=" + std::to_string(E));
        }
        for (std::size_t i = 1; i < values.size(); ++i)
            c.expect(values[i] <= values[i - 1] + 1e-9,
                     "not non-increasing at index " + std::to_string(i));
        c.expect(values.back() <= 0.05, "W(2.95)=" + std::to_string(values.back()));
        double w2 = kunz_shift(1.0, 2.0, 1, cache).value;
        c.expect(values.front() >= 3.0 * w2,
                 "W(1.05)=" + std::to_string(values.front()) + " < 3 W(2)=" +
                     std::to_string(3.0 * w2));
    });

    // 6. Two-term trace asymptotics on the unit disk
    run_criterion(6, "two-term trace asymptotics (disk, B=1)", 300.0, [&](Criterion& c) {
        auto dom = DomainSpec::disk(1.0);
        auto field = FieldSpec::constant(1.0);
        auto f = TestFunction::gaussian(1.0, 0.5);
        auto rep = convergence_study(dom, field, f, {1.0 / 25, 1.0 / 100, 1.0 / 400},
                                     cache, 0.05);
        double final_rel = std::abs(rep.extracted_c1.back() - rep.c1) / std::abs(rep.c1);
        c.expect(final_rel <= 0.05, "final rel err " + std::to_string(final_rel));
        for (std::size_t i = 1; i < rep.extracted_c1.size(); ++i)
            c.expect(std::abs(rep.extracted_c1[i] - rep.c1) <
                         std::abs(rep.extracted_c1[i - 1] - rep.c1),
                     "|extracted_c1 - C1| not strictly decreasing at step " +
                         std::to_string(i));
        c.detail = "C0=" + std::to_string(rep.c0) + " C1=" + std::to_string(rep.c1) +
                   " rel_err=" + std::to_string(final_rel) + (c.pass ? "" : "; " + c.detail);
    });

    // 7. Counting corollary against exact disk counts
    run_criterion(7, "two-term eigenvalue counting (disk, E=2)", 0, [&](Criterion& c) {
        auto dom = DomainSpec::disk(1.0);
        auto field = FieldSpec::constant(1.0);
        auto rep = counting_vs_exact(dom, field, 2.0, 1, {1.0 / 25, 1.0 / 100, 1.0 / 400},
                                     cache);
        double target = -rep.boundary;
        double final_rel = std::abs(rep.scaled_deficit.back() - target) / rep.boundary;
        c.expect(final_rel <= 0.10, "final rel err " + std::to_string(final_rel));
        // integer counts can tie at coarse h; improvement must be monotone
        // in the non-strict sense
        for (std::size_t i = 1; i < rep.scaled_deficit.size(); ++i)
            c.expect(std::abs(rep.scaled_deficit[i] - target) <=
                         std::abs(rep.scaled_deficit[i - 1] - target) + 1e-12,
                     "deficit error grows at step " + std::to_string(i));
        c.detail = "deficit=" + std::to_string(rep.scaled_deficit.back()) + " target=" +
                   std::to_string(target) + " rel_err=" + std::to_string(final_rel) +
                   (c.pass ? "" : "; " + c.detail);
    });

    // 8. FLW inequality on the tiling square
    run_criterion(8, "FLW bound N(E) <= 12 on 4x4 square, B=5", 0, [&](Criterion& c) {
        auto spec = rectangle_spectrum_fd(4.0, 4.0, FieldSpec::constant(5.0), 15.0, 128,
                                          128, Gauge::landau_x);
        int bound = (int)std::floor(5.0 * 16.0 / (2.0 * M_PI));
        c.expect(bound == 12, "bound arithmetic");
        int worst = 0;
        for (int i = 1; i <= 200; ++i) {
            double E = 5.0 + (15.0 - 5.0) * i / 200.0; // sweep of (5, 15]
            worst = std::max(worst, count_below(spec, E));
        }
        c.expect(worst <= bound, "max count " + std::to_string(worst));
        c.detail = "N(15)=" + std::to_string(count_below(spec, 15.0)) +
                   " <= " + std::to_string(bound) + (c.pass ? "" : "; " + c.detail);
    });

    // 9. Landau density B -> 0 continuation
    run_criterion(9, "Landau density continues to B=0", 0, [&](Criterion& c) {
        auto f = TestFunction::gaussian(1.0, 1.0);
        SeriesTolerance tol;
        tol.k_cap = 20000;
        double lhs = landau_density(0.01, f, tol);
        double rhs = f.integral_0_inf() / (4.0 * M_PI);
        double rel = std::abs(lhs - rhs) / rhs;
        c.expect(rel <= 0.01, "rel err " + std::to_string(rel));
    });

    // 10. Mehler kernel: semigroup and free limit
    run_criterion(10, "Mehler kernel semigroup and b->0 limit", 0, [&](Criterion& c) {
        using P = std::array<double, 2>;
        const std::vector<std::pair<P, P>> pairs{
            {{0.3, -0.2}, {-0.4, 0.5}}, {{1.0, 0.0}, {0.0, 0.8}},  {{0.0, 0.0}, {0.7, 0.1}},
            {{-0.5, 0.4}, {0.2, 0.2}},  {{0.6, 0.6}, {-0.1, 0.3}}};
        for (const auto& [x, xp] : pairs) {
            int N = 160;
            double half = 7.0, hh = 2 * half / N;
            std::complex<double> acc = 0.0;
            double cx = 0.5 * (x[0] + xp[0]), cy = 0.5 * (x[1] + xp[1]);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    P y{cx - half + (i + 0.5) * hh, cy - half + (j + 0.5) * hh};
                    acc += mehler_heat_kernel(1.0, 0.3, x, y) *
                           mehler_heat_kernel(1.0, 0.3, y, xp);
                }
            acc *= hh * hh;
            double err = std::abs(acc - mehler_heat_kernel(1.0, 0.6, x, xp));
            c.expect(err <= 1e-8, "semigroup err " + std::to_string(err));
        }
        // free limit along rays through the origin (vanishing wedge phase) and
        // gauge-invariant modulus at generic pairs
        const std::vector<std::pair<P, P>> rays{{{1.0, 0.5}, {0.4, 0.2}},
                                                {{0.8, 0.0}, {0.1, 0.0}},
                                                {{0.0, 1.2}, {0.0, 0.3}},
                                                {{0.5, 0.5}, {-0.2, -0.2}},
                                                {{0.9, -0.3}, {0.3, -0.1}}};
        for (const auto& [x, xp] : rays) {
            auto a = mehler_heat_kernel(1e-8, 0.3, x, xp);
            auto z = mehler_heat_kernel(0.0, 0.3, x, xp);
            c.expect(std::abs(a - z) <= 1e-10, "free-limit err " + std::to_string(std::abs(a - z)));
        }
        auto ag = mehler_heat_kernel(1e-8, 0.3, P{1.0, 0.5}, P{-0.3, 0.9});
        auto zg = mehler_heat_kernel(0.0, 0.3, P{1.0, 0.5}, P{-0.3, 0.9});
        c.expect(std::abs(std::abs(ag) - std::abs(zg)) <= 1e-10, "modulus limit");
    });

    // 11. Gauge invariance of the FD spectra
    run_criterion(11, "gauge invariance on the 96x96 grid", 0, [&](Criterion& c) {
        auto field = FieldSpec::constant(5.0);
        auto a = rectangle_spectrum_fd(4.0, 4.0, field, 19.0, 96, 96, Gauge::landau_x);
        auto b = rectangle_spectrum_fd(4.0, 4.0, field, 19.0, 96, 96, Gauge::symmetric);
        c.expect(a.eigenvalues.size() >= 20,
                 "only " + std::to_string(a.eigenvalues.size()) + " eigenvalues below cutoff");
        std::size_t n = std::min<std::size_t>(20, std::min(a.eigenvalues.size(),
                                                           b.eigenvalues.size()));
        for (std::size_t i = 0; i < n; ++i) {
            double rel = std::abs(a.eigenvalues[i] - b.eigenvalues[i]) /
                         std::abs(b.eigenvalues[i]);
            c.expect(rel <= 1e-6, "rel gauge gap " + std::to_string(rel) + " at index " +
                                      std::to_string(i));
        }
    });

    // 12. Thermodynamic limit on dilated disks
    run_criterion(12, "thermodynamic limit and dilation bookkeeping", 0, [&](Criterion& c) {
        auto dom = DomainSpec::disk(1.0);
        auto f = TestFunction::log_pressure(4.0, 2.0);
        double prev = 1e300;
        for (double L : {5.0, 10.0, 20.0}) {
            auto r = thermo_density(1.0, f, L, dom, cache);
            double scaled = std::abs(r.gap) * L;
            c.expect(scaled < prev, "gap*L not decreasing at L=" + std::to_string(L));
            prev = scaled;
            auto tr = semiclassical_trace_exact(dom, FieldSpec::constant(1.0), f,
                                                1.0 / (L * L));
            c.expect(r.trace == tr.value, "dilation bookkeeping differs at L=" +
                                              std::to_string(L));
        }
    });

    if (g_failures == 0) std::printf("acceptance: all 12 criteria passed\n");
    else std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
