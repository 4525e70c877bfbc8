#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/identity_suite.hpp"
#include "osc/phase_geometry.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <random>

using namespace osc;
using P = PhasePoint<double>;
using mp50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

TEST_CASE("phase and derivatives")
{
    const P p{1, 3, 0};
    CHECK(phase(1.0, p) == -2.0);
    CHECK(phase(0.0, P{2, 5, 7}) == 0.0);
    CHECK(phase(-1.0, p) == 2.0);
    const auto d = phase_derivs(1.0, p);
    CHECK(d.d1 == 0.0);
    CHECK(d.d2 == 6.0);
    CHECK(d.d3 == 6.0);
    const auto e = phase_derivs(0.0, P{1, 2.5, -1.5});
    CHECK(e.d1 == -2.5);
    CHECK(e.d2 == 3.0);
    CHECK(e.d3 == 6.0);
    VecX<double> x(1);
    x << 1.0;
    auto f = [&](const VecX<double>& y) { return phase(y[0], p); };
    CHECK(std::abs(fd_oracle_derivative(f, x, {1}, 1e-5) - d.d1) < 1e-8);
    CHECK(std::abs(fd_oracle_derivative(f, x, {2}, 1e-4) - 6.0) < 1e-6);
}

TEST_CASE("discriminant and critical points")
{
    CHECK(discriminant(P{1, 3, 0}) == 9.0);
    CHECK(discriminant(P{1, 0, 3}) == 9.0);
    CHECK(discriminant(P{1, -1, 0}) == -3.0);
    auto c = critical_points(P{1, 3, 0});
    REQUIRE(c);
    CHECK(c->delta == 9.0);
    CHECK(c->t_plus == doctest::Approx(1.0));
    CHECK(c->t_minus == doctest::Approx(-1.0));
    c = critical_points(P{1, 0, 3});
    REQUIRE(c);
    CHECK(c->t_plus == doctest::Approx(2.0));
    CHECK(c->t_minus == 0.0);
    CHECK_FALSE(critical_points(P{1, -1, 0}));
    CHECK_THROWS_AS(branch_root(P{1, -1, 0}, Branch::plus), NoRealRoots);
    CHECK_THROWS_AS(critical_points(P{0, 1, 1}), std::domain_error);
}

TEST_CASE("stable root formulas keep relative accuracy")
{
    // xi tiny against eta^2: the small root is -xi / (2 eta) to first order.
    const P p{1, 1e-12, 1.0};
    const auto c = critical_points(p);
    REQUIRE(c);
    CHECK(c->t_minus == doctest::Approx(-0.5e-12).epsilon(1e-9));
    CHECK(vieta_residual(p) < 1e-15);
}

TEST_CASE("branch values and gradients")
{
    CHECK(phi_branch(P{1, 3, 0}, Branch::plus) == doctest::Approx(-2.0));
    CHECK(phi_branch(P{1, 3, 0}, Branch::minus) == doctest::Approx(2.0));
    // Dense sampling of the cubic near its critical point.
    const P q{2, 1, 1};
    const double t = branch_root(q, Branch::plus);
    double best = 1e300, arg = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        const double s = t - 0.1 + 0.2 * i / 200000.0;
        const double v = phase(s, q);
        if (v < best) best = v, arg = s;
    }
    CHECK(phi_branch(q, Branch::plus) == doctest::Approx(best).epsilon(1e-9));
    CHECK(arg == doctest::Approx(t).epsilon(1e-5));

    const auto g = phi_branch_grad(P{1, 3, 0}, Branch::plus);
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(-1.0));
    CHECK(g[2] == doctest::Approx(1.0));
    const auto h = phi_branch_grad(P{1, 3, 0}, Branch::minus);
    CHECK(h[0] == doctest::Approx(1.0));
    CHECK(h[1] == doctest::Approx(-1.0));
    CHECK(h[2] == doctest::Approx(-1.0));

    VecX<double> x(3);
    x << 2, 1, 1;
    auto phi = [](const VecX<double>& y) { return phi_branch(P{y[0], y[1], y[2]}, Branch::plus); };
    const auto gq = phi_branch_grad(q, Branch::plus);
    CHECK(std::abs(fd_oracle_derivative(phi, x, {0, 1, 0}, 1e-5) - gq[0]) < 1e-6);
    CHECK(std::abs(fd_oracle_derivative(phi, x, {0, 0, 1}, 1e-5) - gq[1]) < 1e-6);
    CHECK(std::abs(fd_oracle_derivative(phi, x, {1, 0, 0}, 1e-5) - gq[2]) < 1e-6);
    CHECK_THROWS_AS(phi_branch_grad(P{1, -3, 3}, Branch::plus), DegenerateDiscriminant);
}

TEST_CASE("exact spot values")
{
    CHECK(std::abs(hessian_det(P{1, 3, 0}, Branch::plus) + 1.0 / 36.0) < 1e-12);
    CHECK(std::abs(nikodym_det(P{1, 3, 0}, Branch::plus) + 1.0 / 144.0) < 1e-12);
    CHECK(std::abs(exceptional_curvature(1.0, 1.0) - 16.0 / 9.0) < 1e-12);
    CHECK(exceptional_curvature(-1.0, 1.0) == doctest::Approx(-16.0 / 9.0));
    CHECK(hessian_det(P{1, 0, 3}, Branch::minus) == 0.0);
    CHECK(nikodym_det(P{1, 0, 3}, Branch::minus) == 0.0);
    CHECK_THROWS_AS(hessian_det(P{1, -1, 0}, Branch::plus), NoRealRoots);
    CHECK_THROWS_AS(exceptional_curvature(1.0, 0.0), std::domain_error);
}

TEST_CASE("signs of the determinants")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto sp = sample_phase_point(rng);
        CHECK(hessian_det(sp.p, sp.branch) < 0.0);
        CHECK(nikodym_det(sp.p, sp.branch) * sp.p.xi < 0.0);
    }
}

TEST_CASE("determinants against finite-difference oracles at (2, 1, 1)")
{
    const PhasePoint<mp50> q{2, 1, 1};
    const P p{2, 1, 1};
    OracleOptions<mp50> o;
    o.step = mp50(1e-4);
    const double h = hessian_det(p, Branch::plus);
    CHECK(std::abs(static_cast<double>(hessian_det_oracle(q, Branch::plus, o)) / h - 1.0) < 1e-4);
    const double n = nikodym_det(p, Branch::plus);
    CHECK(std::abs(static_cast<double>(nikodym_det_oracle(q, Branch::plus, o)) / n - 1.0) < 1e-3);
    for (Branch b : {Branch::plus, Branch::minus})
        CHECK(std::abs(static_cast<double>(flat_hessian_check(q, b, o))) < 1e-6);
    CHECK(std::abs(static_cast<double>(flat_hessian_check(PhasePoint<mp50>{1, 3, 0}, Branch::plus, o))) < 1e-6);
    CHECK(std::abs(static_cast<double>(flat_hessian_check(PhasePoint<mp50>{1, 0, 3}, Branch::plus, o))) < 1e-6);
    const double c = exceptional_curvature(1.0, 2.0);
    CHECK(std::abs(static_cast<double>(curvature_oracle(mp50(1), mp50(2), o)) / c - 1.0) < 1e-4);
}

TEST_CASE("fd oracle basics")
{
    VecX<double> x(1);
    x << 1.0;
    auto cube = [](const VecX<double>& y) { return y[0] * y[0] * y[0]; };
    CHECK(std::abs(fd_oracle_derivative(cube, x, {1}, 1e-5) - 3.0) < 1e-8);
    x << 0.0;
    CHECK(std::abs(fd_oracle_derivative(cube, x, {3}, 1e-3) - 6.0) < 1e-6);
    CHECK_THROWS_AS(fd_oracle_derivative(cube, x, {5}, 1e-3), std::invalid_argument);
    FdOptions<double> opt;
    opt.domain = [](const VecX<double>& y) { return y[0] > 0.0; };
    CHECK_THROWS_AS(fd_oracle_derivative(cube, x, {1}, 1e-3, opt), StencilOutOfDomain);
}

TEST_CASE("Richardson removes the leading error term")
{
    VecX<double> x(1);
    x << 0.7;
    auto f = [](const VecX<double>& y) { return std::sin(y[0]); };
    FdOptions<double> r2;
    r2.richardson_levels = 2;
    const double plain = std::abs(fd_oracle_derivative(f, x, {2}, 1e-2) + std::sin(0.7));
    const double rich = std::abs(fd_oracle_derivative(f, x, {2}, 1e-2, r2) + std::sin(0.7));
    CHECK(rich < plain * 1e-3);
}

TEST_CASE("amplitude class membership")
{
    AmplitudeClassSpec a;
    a.class_kind = AmplitudeClass::A_pm;
    a.tau = 0.1;
    CHECK(amplitude_class_check(a, P{1, 3, 0}).member);
    const auto r = amplitude_class_check(a, P{1, -1, 0});
    CHECK_FALSE(r.member);
    CHECK(r.reasons.front() == "Delta >= tau");
    AmplitudeClassSpec nspec;
    nspec.class_kind = AmplitudeClass::N_pm;
    nspec.sigma = 0.5;
    nspec.tau = 0.1;
    const auto rn = amplitude_class_check(nspec, P{1, 0.2, 1});
    CHECK_FALSE(rn.member);
    bool xi_reason = false;
    for (const auto& s : rn.reasons) xi_reason = xi_reason || s.find("xi") != std::string::npos;
    CHECK(xi_reason);
}

TEST_CASE("identity suite on a small sample")
{
    IdentityOptions opt;
    opt.samples = 50;
    opt.seed = 11;
    const auto rep = run_identity_suite(opt);
    CHECK(rep.rows.size() == 50);
    for (const auto& m : rep.metrics) CHECK_MESSAGE(m.pass, m.name << " " << m.max_error);
    CHECK(criticality_residual(P{1, 3, 0}) < 1e-15);
}
