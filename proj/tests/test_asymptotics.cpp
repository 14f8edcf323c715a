#include "doctest.h"

#include <cmath>
#include <complex>

#include "magtrace/asymptotics.hpp"
#include "magtrace/errors.hpp"

using namespace magtrace;

TEST_CASE("predict_trace bookkeeping") {
    CHECK(predict_trace(1.0, 2.0, 0.0) == 2.0);
    CHECK(predict_trace(0.25, 1.0, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK_THROWS_AS(predict_trace(0.0, 1.0, 1.0), precondition_error);
}

TEST_CASE("trace vanishes for f below the spectrum") {
    auto dom = DomainSpec::disk(1.0);
    auto field = FieldSpec::constant(1.0);
    auto f = TestFunction::smoothed_step(0.5, 0.2, TestFunction::StepSide::lower);
    auto tr = semiclassical_trace_exact(dom, field, f, 1.0 / 36);
    CHECK(tr.value == 0.0);
}

TEST_CASE("trace approaches the bulk prediction") {
    auto dom = DomainSpec::disk(1.0);
    auto field = FieldSpec::constant(1.0);
    auto f = TestFunction::gaussian(1.0, 0.5);
    double h = 1.0 / 100;
    auto tr = semiclassical_trace_exact(dom, field, f, h);
    // h^{-1} (1/2pi) pi f(1) = 50 with an O(h^{-1/2}) boundary deficit
    CHECK(tr.value < 50.0);
    CHECK(tr.value > 50.0 - 2.0 * 10.0); // deficit ~ |C1| sqrt(1/h) ~ 11
    CHECK_THROWS_AS(semiclassical_trace_exact(dom, field, f, 1.0 / 4000),
                    precondition_error); // beyond desk scale
}

TEST_CASE("convergence study on the disk") {
    ModelCache cache;
    auto dom = DomainSpec::disk(1.0);
    auto field = FieldSpec::constant(1.0);
    auto f = TestFunction::gaussian(1.0, 0.5);
    auto rep = convergence_study(dom, field, f, {1.0 / 25, 1.0 / 100}, cache, 0.10);
    CHECK(rep.c0 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.c1 == doctest::Approx(-1.0875566).epsilon(1e-4));
    REQUIRE(rep.extracted_c1.size() == 2);
    // residual shrinks and the report fields stay consistent
    CHECK(std::abs(rep.extracted_c1[1] - rep.c1) < std::abs(rep.extracted_c1[0] - rep.c1));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rep.residuals[i] == doctest::Approx(rep.h_list[i] * rep.traces[i] - rep.c0));
        CHECK(rep.extracted_c1[i] ==
              doctest::Approx(rep.residuals[i] / std::sqrt(rep.h_list[i])));
    }
    CHECK(rep.warnings.empty());
    // the disk remainder is close to one extra power of sqrt(h)
    CHECK(rep.fit_slope > 0.2);
    CHECK(rep.fit_slope < 1.0);
}

TEST_CASE("convergence study, loose rectangle mode") {
    ModelCache cache;
    auto rect = DomainSpec::rectangle(2.0, 2.0);
    auto field = FieldSpec::constant(1.0);
    auto f = TestFunction::gaussian(1.0, 0.5);
    auto rep = convergence_study(rect, field, f, {1.0 / 4, 1.0 / 9}, cache, 0.25);
    // constant-field factorization ties the two geometries together
    CHECK(rep.c1 == doctest::Approx(-1.0875566 * 8.0 / (2.0 * M_PI)).epsilon(1e-4));
    CHECK(std::abs(rep.extracted_c1.back() - rep.c1) <= 0.25 * std::abs(rep.c1));
}

TEST_CASE("kunz shift: gap domain and qualitative shape") {
    ModelCache cache;
    CHECK_THROWS_AS(kunz_shift(1.0, 4.0, 1, cache), precondition_error);
    CHECK_THROWS_AS(kunz_shift(1.0, 1.0, 1, cache), precondition_error);

    auto w_mid = kunz_shift(1.0, 2.0, 1, cache);
    CHECK(w_mid.value > 0.0);
    CHECK(w_mid.err_est < 1e-8);
    auto w_low = kunz_shift(1.0, 1.2, 1, cache);
    auto w_high = kunz_shift(1.0, 2.8, 1, cache);
    CHECK(w_low.value > w_mid.value);
    CHECK(w_mid.value > w_high.value);

    // sandwich against smoothed indicators around E (finalaa1): the shift lies
    // between -sum_k s_k(B, f_plus) and -sum_k s_k(B, f_minus)
    SeriesTolerance tol;
    auto f_lo = TestFunction::smoothed_step(2.0, 0.1, TestFunction::StepSide::lower);
    auto f_hi = TestFunction::smoothed_step(2.0, 0.1, TestFunction::StepSide::upper);
    double s_lo = s_series(1.0, f_lo, tol, cache).value;
    double s_hi = s_series(1.0, f_hi, tol, cache).value;
    CHECK(-s_hi <= w_mid.value + 1e-6);
    CHECK(w_mid.value <= -s_lo + 1e-6);
}

TEST_CASE("kunz shift for K=2") {
    ModelCache cache;
    auto w = kunz_shift(1.0, 4.0, 2, cache);
    CHECK(w.value > 0.0);
    auto w2 = kunz_shift(1.0, 4.8, 2, cache);
    CHECK(w2.value < w.value);
}

TEST_CASE("counting prediction: factorization and gap errors") {
    ModelCache cache;
    auto dom = DomainSpec::disk(1.0);
    auto field = FieldSpec::constant(1.0);
    auto pred = counting_prediction(dom, field, 2.0, 1, cache);
    CHECK(pred.bulk == doctest::Approx(0.5).epsilon(1e-10));
    // constant field on the unit disk: boundary term reduces to the bare shift
    auto w = kunz_shift(1.0, 2.0, 1, cache);
    CHECK(pred.boundary == doctest::Approx(w.value).epsilon(1e-9));

    CHECK_THROWS_AS(counting_prediction(dom, field, 4.0, 1, cache), precondition_error);
    // B_max/B_min = 1.9 > 5/3 breaks the K=2 gap
    CHECK_THROWS_WITH_AS(counting_prediction(dom, FieldSpec::radial_bump(1.0, 0.9, 0.2),
                                             5.0, 2, cache),
                         doctest::Contains("gap condition"), precondition_error);

    // variable field within the gap: boundary integral is finite and positive
    auto mild = FieldSpec::radial_bump(1.0, 0.05, 1.0);
    auto predv = counting_prediction(dom, mild, 2.1, 1, cache);
    CHECK(predv.boundary > 0.0);
    CHECK(predv.bulk > 0.5);
}

TEST_CASE("counting versus exact spectra") {
    ModelCache cache;
    auto dom = DomainSpec::disk(1.0);
    auto field = FieldSpec::constant(1.0);
    auto rep = counting_vs_exact(dom, field, 2.0, 1, {1.0 / 25, 1.0 / 100}, cache);
    REQUIRE(rep.counts.size() == 2);
    // deficit has the boundary sign and the right scale
    for (double d : rep.scaled_deficit) {
        CHECK(d < 0.0);
        CHECK(std::abs(d + rep.boundary) < 0.3 * rep.boundary);
    }
}

TEST_CASE("thermodynamic limit bookkeeping") {
    ModelCache cache;
    auto dom = DomainSpec::disk(1.0);
    auto f = TestFunction::log_pressure(4.0, 2.0);
    auto r5 = thermo_density(1.0, f, 5.0, dom, cache);
    auto r10 = thermo_density(1.0, f, 10.0, dom, cache);
    CHECK(std::abs(r10.gap) * 10.0 < std::abs(r5.gap) * 5.0);
    CHECK(r5.rhs < r5.lhs); // boundary correction is negative for log_pressure

    // unitary-equivalence bookkeeping: the L-dilated trace IS the h = L^{-2}
    // trace (same spectrum object)
    auto tr = semiclassical_trace_exact(dom, FieldSpec::constant(1.0), f, 1.0 / 25.0);
    CHECK(r5.trace == tr.value);
    CHECK(r5.h == doctest::Approx(1.0 / 25.0).epsilon(1e-15));
}

TEST_CASE("mehler kernel") {
    using P = std::array<double, 2>;
    // diagonal: real positive value b/(4 pi sinh(bt))
    auto d = mehler_heat_kernel(2.0, 0.4, P{0.3, 0.1}, P{0.3, 0.1});
    CHECK(d.imag() == 0.0);
    CHECK(d.real() == doctest::Approx(2.0 / (4.0 * M_PI * std::sinh(0.8))).epsilon(1e-14));

    // free limit at b = 1e-8 for a collinear pair (vanishing wedge)
    auto a = mehler_heat_kernel(1e-8, 0.3, P{1.0, 0.5}, P{0.4, 0.2});
    auto z = mehler_heat_kernel(0.0, 0.3, P{1.0, 0.5}, P{0.4, 0.2});
    CHECK(std::abs(a - z) <= 1e-10);
    CHECK(z.real() ==
          doctest::Approx(std::exp(-(0.36 + 0.09) / 1.2) / (4.0 * M_PI * 0.3)).epsilon(1e-12));

    // modulus is gauge-independent for generic pairs
    auto ag = mehler_heat_kernel(1e-8, 0.3, P{1.0, 0.5}, P{-0.3, 0.9});
    auto zg = mehler_heat_kernel(0.0, 0.3, P{1.0, 0.5}, P{-0.3, 0.9});
    CHECK(std::abs(std::abs(ag) - std::abs(zg)) <= 1e-12);

    // semigroup at (b=1, t=s=0.3) by midpoint quadrature
    P x{0.3, -0.2}, xp{-0.4, 0.5};
    int N = 120;
    double half = 7.0, hh = 2 * half / N;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            P y{0.5 * (x[0] + xp[0]) - half + (i + 0.5) * hh,
                0.5 * (x[1] + xp[1]) - half + (j + 0.5) * hh};
            acc += mehler_heat_kernel(1.0, 0.3, x, y) * mehler_heat_kernel(1.0, 0.3, y, xp);
        }
    acc *= hh * hh;
    CHECK(std::abs(acc - mehler_heat_kernel(1.0, 0.6, x, xp)) <= 1e-8);

    CHECK_THROWS_AS(mehler_heat_kernel(1.0, 800.0, P{0, 0}, P{1, 1}), precondition_error);
    CHECK_THROWS_AS(mehler_heat_kernel(1.0, 0.0, P{0, 0}, P{1, 1}), precondition_error);
}
