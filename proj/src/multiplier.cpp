#include "osc/multiplier.hpp"

#include "osc/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osc {

namespace {

double amplitude_t_squared(double t) { return beta(t) * t * t; }

QuadratureResult add(const QuadratureResult& a, const QuadratureResult& b)
{
    return {a.value + b.value, a.abs_error_estimate + b.abs_error_estimate, a.subdivisions + b.subdivisions,
            a.converged && b.converged};
}

}  // namespace

QuadratureResult multiplier_m(int n, double w, double xi, double eta, const MultiplierOptions& opt)
{
    if (n < 0) throw std::invalid_argument("multiplier_m: n < 0");
    RealFunction amp = opt.amplitude;
    if (!amp) amp = opt.variant == AmplitudeVariant::standard ? RealFunction(amplitude_a) : RealFunction(amplitude_t_squared);

    std::vector<double> bp = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    bp.insert(bp.end(), opt.extra_breakpoints.begin(), opt.extra_breakpoints.end());
    const PhasePoint<double> p{w, xi, eta};
    const double omega = std::ldexp(1.0, n);
    QuadratureOptions q = opt.quad;
    q.abs_tol = 0.5 * opt.quad.abs_tol;
    const auto left = integrate_oscillatory(amp, p, omega, -2.0, -0.5, bp, q);
    const auto right = integrate_oscillatory(amp, p, omega, 0.5, 2.0, bp, q);
    return add(left, right);
}

double cutoff_factor(const MultiplierQuery& q)
{
    if (q.ell && q.kappa) throw std::invalid_argument("MultiplierQuery: ell and kappa are exclusive");
    double f = 1.0;
    if (q.k1) {
        const double s = std::ldexp(q.xi, -*q.k1);
        f *= q.k1_mode == CutoffMode::sharp ? beta(s) : beta0(s);
    }
    if (q.k2) {
        const double s = std::ldexp(q.eta, -*q.k2);
        f *= q.k2_mode == CutoffMode::sharp ? beta(s) : beta0(s);
    }
    if (q.ell || q.kappa) {
        if (!q.k2) throw std::invalid_argument("MultiplierQuery: discriminant cutoff needs k2");
        const double delta = discriminant(PhasePoint<double>{q.w, q.xi, q.eta});
        if (q.ell) {
            f *= beta(std::ldexp(delta, -2 * *q.k2 + 2 * *q.ell));
        } else {
            const int m = static_cast<int>(std::floor(q.n * *q.kappa));
            f *= beta0(std::ldexp(delta, -2 * *q.k2 + 2 * m));
        }
    }
    return f;
}

QuadratureResult multiplier_localized(const MultiplierQuery& q, const MultiplierOptions& opt)
{
    const double c = cutoff_factor(q);
    if (c == 0.0) return {};
    auto r = multiplier_m(q.n, q.w, q.xi, q.eta, opt);
    r.value *= c;
    r.abs_error_estimate *= c;
    return r;
}

cplx stationary_phase_approx(int n, const PhasePoint<double>& p, Branch b)
{
    const auto c = critical_points(p);
    if (!c) throw NoRealRoots();
    if (!(c->delta > 0.0)) throw DegenerateDiscriminant();
    const double t = b == Branch::plus ? c->t_plus : c->t_minus;
    const double a = amplitude_a(t);
    if (a == 0.0) throw std::domain_error("stationary_phase_approx: critical point outside the amplitude support");
    const double omega = std::ldexp(1.0, n);
    const double d2 = phase_derivs(t, p).d2;
    const double mod = a * std::sqrt(2.0 * std::numbers::pi / (omega * std::abs(d2)));
    const double arg = omega * phase(t, p) + (d2 > 0.0 ? 1.0 : -1.0) * std::numbers::pi / 4.0;
    return std::polar(1.0, arg) * mod;
}

QuadratureResult isolated_root_multiplier(int n, const PhasePoint<double>& p, Branch b, double abs_tol, double c_star,
                                          double tau)
{
    const double tb = branch_root(p, b);
    const double scale = c_star * c_star / std::sqrt(tau);
    MultiplierOptions opt;
    opt.quad.abs_tol = abs_tol;
    opt.amplitude = [tb, scale](double t) {
        const double win = beta0(scale * (t - tb));
        return win == 0.0 ? 0.0 : amplitude_a(t) * win;
    };
    for (double s : {-2.0, -1.0, 1.0, 2.0}) opt.extra_breakpoints.push_back(tb + s / scale);
    return multiplier_m(n, p.w, p.xi, p.eta, opt);
}

double sublevel_measure(const std::array<double, 3>& mu, double sigma, long samples)
{
    if (!(sigma > 0.0)) throw std::invalid_argument("sublevel_measure: sigma must be positive");
    if (samples < 1) throw std::invalid_argument("sublevel_measure: samples < 1");
    auto g = [&mu](double t) { return 1.0 - t * (mu[0] + t * (mu[1] + t * mu[2])); };

    // Critical points of g split (-1, 1) into monotone pieces.
    std::vector<double> cuts;
    {
        const double A = -3.0 * mu[2], B = -2.0 * mu[1], C = -mu[0];
        if (A != 0.0) {
            const double disc = B * B - 4.0 * A * C;
            if (disc >= 0.0) {
                const double r = std::sqrt(disc);
                cuts.push_back((-B + r) / (2.0 * A));
                cuts.push_back((-B - r) / (2.0 * A));
            }
        } else if (B != 0.0) {
            cuts.push_back(-C / B);
        }
    }

    // Length of {t in [l, r] : |g(t)| < sigma} for g monotone on [l, r].
    auto piece = [&](double l, double r, double gl, double gr) {
        if (std::abs(gl) < sigma && std::abs(gr) < sigma) return r - l;
        const double lo = std::min(gl, gr), hi = std::max(gl, gr);
        if (hi <= -sigma || lo >= sigma) return 0.0;
        const bool increasing = gr >= gl;
        // Point where g crosses level c, clamped to [l, r].
        auto level = [&](double c) {
            if (c <= lo) return increasing ? l : r;
            if (c >= hi) return increasing ? r : l;
            double a = l, b = r;
            for (int it = 0; it < 200 && b - a > 0.0; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                if ((g(m) < c) == increasing) a = m;
                else b = m;
            }
            return 0.5 * (a + b);
        };
        return std::abs(level(sigma) - level(-sigma));
    };

    const double h = 2.0 / static_cast<double>(samples);
    double total = 0.0;
    double l = -1.0, gl = g(l);
    for (long i = 1; i <= samples; ++i) {
        const double r = i == samples ? 1.0 : -1.0 + h * static_cast<double>(i);
        double a = l, ga = gl;
        for (double c : cuts) {
            if (c > a && c < r) {
                const double gc = g(c);
                total += piece(a, c, ga, gc);
                a = c;
                ga = gc;
            }
        }
        const double gr = g(r);
        total += piece(a, r, ga, gr);
        l = r;
        gl = gr;
    }
    return total;
}

}  // namespace osc
