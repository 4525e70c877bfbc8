#pragma once

#include "osc/phase_geometry.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace osc {

using cplx = std::complex<double>;

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = true;
};

enum class PanelRule { gk15, gk21, gk31, gk41, gk51, gk61 };

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_subdivisions = 400000;
    bool use_levin = true;  // false forces Gauss-Kronrod panels everywhere
};

using Integrand = std::function<cplx(double)>;

/// exp(i omega phi(t)) with the argument formed and reduced mod 2 pi in long
/// double, so large phases keep double accuracy.
inline cplx unit_phase(double omega, const PhasePoint<double>& p, double t)
{
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    const PhasePoint<long double> q{p.w, p.xi, p.eta};
    long double arg = static_cast<long double>(omega) * phase(static_cast<long double>(t), q);
    arg -= two_pi * std::nearbyint(arg / two_pi);
    return std::polar(1.0, static_cast<double>(arg));
}
using RealFunction = std::function<double(double)>;

/// Appends the nodes and weights of `panels` equal 16-point Gauss-Legendre panels on [a, b].
void gauss_legendre_panels(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w);

/// Globally adaptive Gauss-Kronrod bisection on [a,b], starting from
/// initial_panels equal panels. Meant as a slow, generic reference.
QuadratureResult quadrature_refine(const Integrand& f, double a, double b, double tol,
                                   PanelRule rule = PanelRule::gk61, int initial_panels = 1,
                                   int max_panels = 1 << 22);

/// int_a^b exp(i omega phi(t)) amp(t) dt for the cubic phase of p. amp must be
/// smooth between consecutive breakpoints; critical points of the phase are
/// added as breakpoints automatically. Panels with little phase variation use
/// Gauss-Kronrod 21 (at least 8 nodes per wavelength); panels away from
/// critical points use Levin collocation on Chebyshev-Lobatto nodes.
QuadratureResult integrate_oscillatory(const RealFunction& amp, const PhasePoint<double>& p, double omega,
                                       double a, double b, std::vector<double> breakpoints,
                                       const QuadratureOptions& opt = {});

}  // namespace osc
