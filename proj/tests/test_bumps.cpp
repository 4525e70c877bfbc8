#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/bumps.hpp"

#include <cmath>
#include <stdexcept>

using namespace osc;

TEST_CASE("beta0 values")
{
    CHECK(beta0(0.5) == 1.0);
    CHECK(beta0(3.0) == 0.0);
    const double v = beta0(1.5);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(beta0(-1.5) == v);
}

TEST_CASE("beta0 is even and non-increasing in |s|")
{
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double s = 0.01 * i;
        const double v = beta0(s);
        CHECK(v == beta0(-s));
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("beta values")
{
    CHECK(beta(0.4) == 0.0);
    CHECK(beta(2.5) == 0.0);
    CHECK(beta(1.0) == 1.0);
}

TEST_CASE("beta_tilde is 1 on the support of beta")
{
    for (double s = 0.5; s <= 2.0; s += 0.01) CHECK(beta_tilde(s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_tilde(0.2) == 0.0);
    CHECK(beta_tilde(4.5) == 0.0);
}

TEST_CASE("dyadic partition of unity")
{
    CHECK(dyadic_partition_sum(1.5, -4, 4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dyadic_partition_sum(1024.0, 0, 20) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(dyadic_partition_sum(0.0, -4, 4), std::domain_error);
    double worst = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        const double s = std::exp2(-8.0 + 16.0 * i / 2000.0);
        worst = std::max(worst, std::abs(dyadic_partition_sum(s, -12, 12) - 1.0));
        worst = std::max(worst, std::abs(dyadic_partition_sum(-s, -12, 12) - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("partition holds for narrower glue")
{
    for (double g : {0.25, 0.5, 1.0})
        for (double s : {0.3, 0.77, 1.3, 5.5}) CHECK(dyadic_partition_sum(s, -10, 10, g) == doctest::Approx(1.0));
}

TEST_CASE("dyadic window covers the nonzero terms")
{
    int lo = 0, hi = 0;
    dyadic_window(1024.0, lo, hi);
    CHECK(lo <= 9);
    CHECK(hi >= 11);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += beta(std::ldexp(1024.0, -j));
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("amplitude a")
{
    CHECK(amplitude_a(1.0) == 1.0);
    CHECK(amplitude_a(-1.0) == -1.0);
    CHECK(amplitude_a(0.1) == 0.0);
    CHECK(amplitude_a(0.0) == 0.0);
    for (double t : {0.6, 1.2, 1.9}) CHECK(amplitude_a(-t) == -amplitude_a(t));
}

TEST_CASE("smooth step")
{
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(0.3) + smooth_step(0.7) == doctest::Approx(1.0));
}

TEST_CASE("BumpSpec dispatch")
{
    CHECK(evaluate({BumpKind::beta0, 6, 1.0}, 0.5) == beta0(0.5));
    CHECK(evaluate({BumpKind::beta, 6, 1.0}, 1.3) == beta(1.3));
    CHECK(evaluate({BumpKind::beta_tilde, 6, 1.0}, 3.1) == beta_tilde(3.1));
}
