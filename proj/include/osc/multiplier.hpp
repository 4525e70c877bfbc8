#pragma once

#include "osc/phase_geometry.hpp"
#include "osc/quadrature.hpp"

#include <array>
#include <optional>
#include <vector>

namespace osc {

enum class CutoffMode { sharp, leq };

struct MultiplierQuery {
    int n = 0;
    double w = 1.0;
    double xi = 0.0;
    double eta = 0.0;
    std::optional<int> k1, k2;
    CutoffMode k1_mode = CutoffMode::sharp;
    CutoffMode k2_mode = CutoffMode::sharp;
    std::optional<int> ell;       // beta(2^(-2 k2 + 2 ell) Delta)
    std::optional<double> kappa;  // beta0(2^(-2 k2 + 2 floor(n kappa)) Delta)
};

enum class AmplitudeVariant {
    standard,   // beta(t)/t
    t_squared,  // beta(t) t^2, the w-derivative companion
};

struct MultiplierOptions {
    QuadratureOptions quad;
    AmplitudeVariant variant = AmplitudeVariant::standard;
    RealFunction amplitude;                // replaces the built-in amplitude when set
    std::vector<double> extra_breakpoints;  // smoothness breaks of a custom amplitude
};

/// int exp(i 2^n phi(t)) a(t) dt over 1/2 <= |t| <= 2.
QuadratureResult multiplier_m(int n, double w, double xi, double eta, const MultiplierOptions& opt = {});

/// Product of the frequency and discriminant cutoffs requested by q.
double cutoff_factor(const MultiplierQuery& q);

QuadratureResult multiplier_localized(const MultiplierQuery& q, const MultiplierOptions& opt = {});

/// Leading stationary-phase term a(t_b) sqrt(2 pi / (2^n |phi''|)) exp(i (2^n phi_b + sgn(phi'') pi/4)).
cplx stationary_phase_approx(int n, const PhasePoint<double>& p, Branch b);

/// Multiplier with the amplitude windowed by beta0(c_star^2 tau^(-1/2) (t - t_b)),
/// which keeps the stationary point t_b and drops the other one.
QuadratureResult isolated_root_multiplier(int n, const PhasePoint<double>& p, Branch b, double abs_tol = 1e-13,
                                          double c_star = 8.0, double tau = 1.0);

/// Measure of {t in (-1,1) : |1 - mu1 t - mu2 t^2 - mu3 t^3| < sigma} from
/// `samples` equal cells. Cells are cut at the critical points of the cubic so
/// the sublevel set meets each cell in one interval, whose ends are found by
/// bisection.
double sublevel_measure(const std::array<double, 3>& mu, double sigma, long samples = 10'000'000);

}  // namespace osc
