#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/bumps.hpp"
#include "osc/grid.hpp"
#include "osc/kernel_synthesis.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace osc;
constexpr double pi = std::numbers::pi;

namespace {

GridField random_field(int n, double L, unsigned seed)
{
    GridField f(n, L);
    std::mt19937 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data(i) = {N(rng), N(rng)};
    return f;
}

GridField plane_wave(int n, double L, double kx, double ky)
{
    GridField f(n, L);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) f.data(i, k) = std::polar(1.0, kx * f.x(i) + ky * f.y(k));
    return f;
}

double max_diff(const GridField& a, const GridField& b) { return (a.data - b.data).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction")
{
    CHECK_THROWS_AS(GridField(100, 10.0), std::invalid_argument);
    const GridField g(64, 32.0);
    CHECK(g.x(32) == 0.0);
    CHECK(g.hx() == 0.5);
    CHECK(g.freq_x(1) == doctest::Approx(2.0 * pi / 32.0));
    CHECK(g.freq_x(63) == doctest::Approx(-2.0 * pi / 32.0));
}

TEST_CASE("transform round trip and Plancherel")
{
    const GridField f = random_field(64, 20.0, 1);
    const GridField F = transform_forward(f);
    CHECK(max_diff(transform_inverse(F), f) < 1e-12);
    CHECK(F.data.norm() == doctest::Approx(f.data.norm()).epsilon(1e-13));
}

TEST_CASE("constant field transforms to a zero-frequency delta")
{
    GridField f(32, 8.0);
    f.data.setConstant(1.0);
    GridField F = transform_forward(f);
    CHECK(std::abs(F.data(0, 0)) == doctest::Approx(32.0));
    F.data(0, 0) = 0.0;
    CHECK(F.data.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shift theorem")
{
    const GridField f = random_field(32, 16.0, 2);
    GridField g = f.zeros_like();
    for (int i = 0; i < 32; ++i)
        for (int k = 0; k < 32; ++k) g.data((i + 3) % 32, (k + 5) % 32) = f.data(i, k);
    const GridField F = transform_forward(f), G = transform_forward(g);
    double err = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int k = 0; k < 32; ++k) {
            const cplx phase = std::polar(1.0, -(F.freq_x(i) * 3 * f.hx() + F.freq_y(k) * 5 * f.hy()));
            err = std::max(err, std::abs(G.data(i, k) - phase * F.data(i, k)));
        }
    CHECK(err < 1e-10);
}

TEST_CASE("Littlewood-Paley projections")
{
    // Box 32 pi puts frequency 1 = 2^0 on the grid; Nyquist is 4.
    const GridField f = plane_wave(128, 32.0 * pi, 1.0, 0.0);
    CHECK(max_diff(lp_project(f, 1, 0, ProjectionMode::sharp), f) < 1e-12);
    CHECK(max_abs(lp_project(f, 1, -5, ProjectionMode::sharp)) < 1e-12);
    CHECK_THROWS_AS(lp_project(f, 1, 8, ProjectionMode::sharp), UnresolvedScale);
    const GridField r = random_field(128, 64.0, 3);
    for (int mm = -3; mm <= 0; ++mm) {
        const GridField p = lp_project(r, 2, mm, ProjectionMode::sharp);
        CHECK(max_diff(lp_project(p, 2, mm, ProjectionMode::tilde), p) < 1e-12);
    }
}

TEST_CASE("multiplier operator on a single frequency")
{
    const double L = 32.0;
    const double kx = 2.0 * pi * 4.0 / L, ky = 2.0 * pi * 2.0 / L;
    const GridField f = plane_wave(64, L, kx, ky);
    MultiplierQuery q;
    q.n = 4;
    q.w = 1.0;
    MultiplierOptions opt;
    opt.quad.abs_tol = 1e-13;
    const GridField g = apply_multiplier_operator(f, q, opt);
    const cplx m = multiplier_m(4, 1.0, kx, ky, opt).value;
    GridField expect = f;
    expect.data *= m;
    CHECK(max_diff(g, expect) < 1e-10);

    q.k1 = 5;  // beta(2^-5 kx) = 0
    CHECK(max_abs(apply_multiplier_operator(f, q, opt)) < 1e-14);
}

TEST_CASE("kernels")
{
    const GridField shape(64, 16.0);
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Ones(64, 64);
    const auto delta = kernel_from_symbol(shape, one);
    CHECK(delta.l1_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(delta.field.data(32, 32)) * shape.cell_area() == doctest::Approx(1.0));

    MultiplierQuery q;
    q.n = 4;
    q.k1 = 20;
    CHECK(kernel_of(q, shape).l1_norm == 0.0);
}

TEST_CASE("operator equals circular convolution with its kernel")
{
    const GridField f = random_field(32, 16.0, 4);
    MultiplierQuery q;
    q.n = 3;
    q.w = 2.0;
    q.k1 = 0;
    q.k2 = 0;
    const auto K = kernel_of(q, f);
    const GridField a = apply_multiplier_operator(f, q);
    const GridField b = circular_convolve_direct(K.field, f);
    CHECK(max_diff(a, b) / max_abs(a) < 1e-9);
}

TEST_CASE("parabola convolution")
{
    GridField one(64, 32.0);
    one.data.setConstant(1.0);
    const GridField avg = parabola_convolve(one, average_profile(2.0, 64));
    CHECK((avg.data.array() - 1.0).abs().maxCoeff() < 1e-12);

    // Odd weight on an even field cancels at the centre.
    const GridField g = gaussian_field(64, 32.0, 2.0);
    ParabolaProfile odd;
    for (double t : {0.5, 1.0, 1.5}) {
        odd.s.push_back(t);
        odd.w.push_back(1.0);
        odd.s.push_back(-t);
        odd.w.push_back(-1.0);
    }
    // Even in x: the parabola offsets t^2 match for t and -t.
    CHECK(std::abs(parabola_convolve(g, odd).data(32, 32)) < 1e-12);
}

TEST_CASE("parabolic maximal dominates each average")
{
    const GridField g = gaussian_field(64, 32.0, 2.0);
    const std::vector<double> radii{1.0, 2.0, 4.0};
    const GridField M = parabolic_maximal(g, radii);
    for (double r : radii) {
        GridField a = g;
        a.data = g.data.cwiseAbs().cast<cplx>();
        const GridField avg = parabola_convolve(a, average_profile(r, 512));
        CHECK((avg.data.cwiseAbs() - M.data.cwiseAbs()).maxCoeff() < 1e-3 * max_abs(M));
    }
    GridField one(64, 32.0);
    one.data.setConstant(1.0);
    CHECK((parabolic_maximal(one, radii).data.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("rescaling identity")
{
    const GridField f = gaussian_field(128, 64.0, 3.0);
    CHECK(rescaling_check(f, 0, 0, -2, -2, 1.0, RescalingRoute::fourier) < 1e-9);
    CHECK(rescaling_check(f.zeros_like(), 0, 0, -2, -2, 1.0, RescalingRoute::fourier) == 0.0);
}

TEST_CASE("spatial Hilbert piece matches its symbol")
{
    const GridField f = gaussian_field(256, 64.0, 2.0);
    const GridField a = parabola_convolve(f, hilbert_profile(1.0, 0, 0));
    const GridField b = apply_symbol(f, [](double xi, double eta) { return hilbert_symbol(1.0, 0, xi, eta); });
    CHECK(max_diff(a, b) / max_abs(b) < 1e-2);
}

TEST_CASE("propagator slice")
{
    const GridField f = gaussian_field(32, 16.0, 2.0);
    const GridField z = propagator_slice(f, Branch::plus, [](double, double) { return cplx(0.0); }, 4.0, 1.0);
    CHECK(max_abs(z) == 0.0);
}

TEST_CASE("row synthesis against the FFT kernel")
{
    MultiplierQuery q;
    q.n = 6;
    q.w = 1.0;
    q.k1 = 0;
    q.k2 = 0;
    const double fft = kernel_of(q, GridField(512, 512, 256.0, 256.0)).l1_norm;
    const double rows = synthesize_kernel(6, 1.0, 0, 0).l1_norm;
    CHECK(rows == doctest::Approx(fft).epsilon(2e-3));
}

TEST_CASE("cutoff kernel is the inverse transform of beta")
{
    const CutoffKernel k(CutoffKernel::Kind::sharp, 64.0);
    // Value at 0 is (1/2 pi) int beta = (1/pi) int_{1/2}^{2} beta(s) ds.
    std::vector<double> x, w;
    gauss_legendre_panels(0.5, 2.0, 32, x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * beta(x[i]);
    CHECK(k(0.0) == doctest::Approx(s / pi).epsilon(1e-6));
    CHECK(k(100.0) == 0.0);
}
