#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/bumps.hpp"
#include "osc/multiplier.hpp"
#include "osc/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace osc;
using P = PhasePoint<double>;

TEST_CASE("reference quadrature on simple integrals")
{
    const auto one = quadrature_refine([](double) { return cplx(1.0); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(one.value - 1.0) < 1e-12);
    const auto wave =
        quadrature_refine([](double t) { return std::polar(1.0, t); }, 0.0, 2.0 * std::numbers::pi, 1e-12);
    CHECK(std::abs(wave.value) < 1e-12);
    CHECK(wave.converged);
}

TEST_CASE("two panel rules agree on exp(i 2^10 t^3)")
{
    auto f = [](double t) { return std::polar(1.0, 1024.0 * t * t * t); };
    const auto a = quadrature_refine(f, 0.5, 2.0, 1e-10, PanelRule::gk61);
    const auto b = quadrature_refine(f, 0.5, 2.0, 1e-10, PanelRule::gk21, 64);
    CHECK(std::abs(a.value - b.value) < 1e-9);
}

TEST_CASE("Gauss-Legendre panels integrate polynomials exactly")
{
    std::vector<double> x, w;
    gauss_legendre_panels(-1.0, 3.0, 4, x, w);
    CHECK(x.size() == 64);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 7);
    CHECK(s == doctest::Approx((std::pow(3.0, 8) - 1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("unit phase keeps accuracy for large arguments")
{
    const P p{1, 3, 0};
    const double omega = std::ldexp(1.0, 40);
    // phase(1) = -2 exactly, so omega * phase is a multiple of 2 pi only through rounding.
    const cplx z = unit_phase(omega, p, 1.0);
    const long double arg = -2.0L * omega;
    const long double two_pi = 6.283185307179586476925286766559005768L;
    const long double red = arg - two_pi * std::nearbyint(arg / two_pi);
    CHECK(std::abs(z - std::polar(1.0, static_cast<double>(red))) < 1e-9);
}

TEST_CASE("zero amplitude gives zero")
{
    MultiplierOptions opt;
    opt.amplitude = [](double) { return 0.0; };
    CHECK(std::abs(multiplier_m(6, 1, 1, 1, opt).value) == 0.0);
}

TEST_CASE("conjugate reflection symmetry")
{
    MultiplierOptions opt;
    opt.quad.abs_tol = 1e-13;
    const cplx a = multiplier_m(6, 1, 1, 1, opt).value;
    const cplx b = multiplier_m(6, 1, 1, -1, opt).value;
    CHECK(std::abs(a + std::conj(b)) < 1e-9);
}

TEST_CASE("main path agrees with the refined reference")
{
    MultiplierOptions opt;
    opt.quad.abs_tol = 1e-13;
    const P p{1, 3, 0};
    const double omega = std::ldexp(1.0, 10);
    auto f = [&](double t) { return unit_phase(omega, p, t) * amplitude_a(t); };
    const cplx ref = quadrature_refine(f, -2.0, -0.25, 1e-13, PanelRule::gk61, 1 << 11).value +
                     quadrature_refine(f, 0.25, 2.0, 1e-13, PanelRule::gk61, 1 << 11).value;
    const auto r = multiplier_m(10, 1, 3, 0, opt);
    CHECK(r.converged);
    CHECK(std::abs(r.value - ref) < 1e-9);
    opt.quad.use_levin = false;
    CHECK(std::abs(multiplier_m(10, 1, 3, 0, opt).value - ref) < 1e-9);
}

TEST_CASE("negative n is rejected")
{
    CHECK_THROWS_AS(multiplier_m(-1, 1, 0, 0), std::invalid_argument);
}

TEST_CASE("localized multiplier cutoffs")
{
    MultiplierQuery q;
    q.n = 10;
    q.w = 1;
    q.xi = 5.0;
    q.eta = 1.0;
    q.k1 = 0;  // beta(5) = 0
    CHECK(multiplier_localized(q).value == cplx(0.0));

    q.xi = 1.0;
    q.k1 = 0;
    q.k2 = 0;
    const double cut = beta(1.0) * beta(1.0);
    CHECK(cutoff_factor(q) == doctest::Approx(cut));
    MultiplierOptions opt;
    opt.quad.abs_tol = 1e-13;
    CHECK(std::abs(multiplier_localized(q, opt).value - cut * multiplier_m(10, 1, 1, 1, opt).value) < 1e-12);

    // Delta = 1 + 3 = 4 lies outside the ell = 3 band [2^-7, 2^-5].
    q.ell = 3;
    CHECK(multiplier_localized(q).value == cplx(0.0));

    MultiplierQuery bad = q;
    bad.kappa = 0.05;
    CHECK_THROWS_AS(multiplier_localized(bad), std::invalid_argument);
    MultiplierQuery nok2;
    nok2.ell = 1;
    CHECK_THROWS_AS(multiplier_localized(nok2), std::invalid_argument);
}

TEST_CASE("stationary phase approximation")
{
    CHECK_THROWS(stationary_phase_approx(12, P{1, 0, 9}, Branch::minus));  // t- = 0
    const P p{1, 3, 0};
    // The isolating window has width 1/64, so the asymptotics start near n = 14.
    const auto q = isolated_root_multiplier(16, p, Branch::plus, 1e-13);
    const cplx sp = stationary_phase_approx(16, p, Branch::plus);
    const double rel = std::abs(sp - q.value) / std::abs(q.value);
    CHECK(rel < 8.0 * std::ldexp(1.0, -16));
}

TEST_CASE("sublevel measure closed forms")
{
    CHECK(sublevel_measure({0, 0, 0}, 0.5, 10000) == 0.0);
    CHECK(sublevel_measure({0, 0, 1}, 1e-3, 100000) ==
          doctest::Approx(1.0 - std::cbrt(1.0 - 1e-3)).epsilon(1e-6));
    CHECK(sublevel_measure({3, -3, 1}, 1e-3, 100000) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS_AS(sublevel_measure({0, 0, 1}, 0.0, 10), std::invalid_argument);
}
