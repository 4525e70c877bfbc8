#include "osc/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace osc {

namespace {

struct Panel {
    double l, r;
    cplx value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// Kronrod value on one panel with the QUADPACK error heuristic built from
// |Kronrod - Gauss|. Boost's tables hold the Gauss nodes at the odd positions
// when the Gauss order is even and at the even positions otherwise.
template <unsigned N, class F>
Panel gk_panel(const F& f, double l, double r)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<double, N>;
    using gauss = boost::math::quadrature::gauss<double, (N - 1) / 2>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    constexpr std::size_t m = (N + 1) / 2;
    constexpr bool gauss_has_centre = ((N - 1) / 2) % 2 == 1;
    const double half = 0.5 * (r - l), mid = 0.5 * (r + l);

    std::array<cplx, m> fp, fm;
    fp[0] = fm[0] = f(mid);
    for (std::size_t i = 1; i < m; ++i) {
        fp[i] = f(mid + half * x[i]);
        fm[i] = f(mid - half * x[i]);
    }
    cplx k = fp[0] * wk[0];
    cplx g = gauss_has_centre ? fp[0] * wg[0] : cplx(0.0);
    double resabs = std::abs(fp[0]) * wk[0];
    for (std::size_t i = 1; i < m; ++i) {
        k += (fp[i] + fm[i]) * wk[i];
        resabs += (std::abs(fp[i]) + std::abs(fm[i])) * wk[i];
        const bool is_gauss = gauss_has_centre ? (i % 2 == 0) : (i % 2 == 1);
        if (is_gauss) g += (fp[i] + fm[i]) * wg[i / 2];
    }
    const cplx mean = 0.5 * k;
    double resasc = std::abs(fp[0] - mean) * wk[0];
    for (std::size_t i = 1; i < m; ++i) resasc += (std::abs(fp[i] - mean) + std::abs(fm[i] - mean)) * wk[i];

    double err = std::abs(k - g) * half;
    resabs *= half;
    resasc *= half;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
    return {l, r, k * half, err};
}

template <class F>
Panel gk_rule(PanelRule rule, const F& f, double l, double r)
{
    switch (rule) {
    case PanelRule::gk15: return gk_panel<15>(f, l, r);
    case PanelRule::gk21: return gk_panel<21>(f, l, r);
    case PanelRule::gk31: return gk_panel<31>(f, l, r);
    case PanelRule::gk41: return gk_panel<41>(f, l, r);
    case PanelRule::gk51: return gk_panel<51>(f, l, r);
    case PanelRule::gk61: return gk_panel<61>(f, l, r);
    }
    return gk_panel<21>(f, l, r);
}

// Sum the panel values from scratch so long runs do not accumulate drift.
QuadratureResult collect(const std::priority_queue<Panel>& heap_in, int count, bool converged)
{
    auto heap = heap_in;
    QuadratureResult res;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.l < b.l; });
    for (const auto& p : panels) {
        res.value += p.value;
        res.abs_error_estimate += p.err;
    }
    res.subdivisions = count;
    res.converged = converged;
    return res;
}

struct ChebyshevLobatto {
    Eigen::VectorXd x;  // x(0) = 1, x(n) = -1
    Eigen::MatrixXd D;

    explicit ChebyshevLobatto(int n) : x(n + 1), D(n + 1, n + 1)
    {
        for (int j = 0; j <= n; ++j) x(j) = std::cos(std::numbers::pi * j / n);
        Eigen::VectorXd c(n + 1);
        for (int j = 0; j <= n; ++j) c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0);
        for (int i = 0; i <= n; ++i) {
            double diag = 0.0;
            for (int j = 0; j <= n; ++j) {
                if (i == j) continue;
                D(i, j) = c(i) / c(j) / (x(i) - x(j));
                diag += D(i, j);
            }
            D(i, i) = -diag;
        }
    }
};

const ChebyshevLobatto& cheb(int n)
{
    static const ChebyshevLobatto c16(16), c24(24);
    return n == 16 ? c16 : c24;
}

class OscillatoryPanels {
public:
    OscillatoryPanels(const RealFunction& amp, const PhasePoint<double>& p, double omega)
        : amp_(amp), p_(p), omega_(omega)
    {
    }

    cplx integrand(double t) const
    {
        const double a = amp_(t);
        if (a == 0.0) return {0.0, 0.0};
        return a * unit_phase(omega_, p_, t);
    }

    // Extremes of |phi'| on [l, r]; phi' is a quadratic with vertex eta/(3w).
    void derivative_bounds(double l, double r, double& lo, double& hi) const
    {
        const double dl = phase_derivs(l, p_).d1;
        const double dr = phase_derivs(r, p_).d1;
        double vmin = std::min(dl, dr), vmax = std::max(dl, dr);
        if (p_.w != 0.0) {
            const double tv = p_.eta / (3.0 * p_.w);
            if (tv > l && tv < r) {
                const double dv = phase_derivs(tv, p_).d1;
                vmin = std::min(vmin, dv);
                vmax = std::max(vmax, dv);
            }
        }
        hi = std::max(std::abs(vmin), std::abs(vmax));
        lo = (vmin <= 0.0 && vmax >= 0.0) ? 0.0 : std::min(std::abs(vmin), std::abs(vmax));
    }

    cplx levin(double l, double r, int n) const
    {
        const auto& c = cheb(n);
        const double half = 0.5 * (r - l), mid = 0.5 * (r + l);
        Eigen::MatrixXcd M = (c.D / half).cast<cplx>();
        Eigen::VectorXcd rhs(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double t = mid + half * c.x(j);
            M(j, j) += cplx(0.0, omega_ * phase_derivs(t, p_).d1);
            rhs(j) = amp_(t);
        }
        const Eigen::VectorXcd q = M.partialPivLu().solve(rhs);
        return q(0) * unit_phase(omega_, p_, r) - q(n) * unit_phase(omega_, p_, l);
    }

    // Evaluates [l, r] with the cheapest admissible rule, splitting until one
    // applies. Returns the error estimate added to the heap.
    double evaluate(double l, double r, bool use_levin, std::priority_queue<Panel>& heap, int& count) const
    {
        const double len = r - l;
        double lo = 0.0, hi = 0.0;
        derivative_bounds(l, r, lo, hi);
        const double theta_max = omega_ * hi * len;
        const double theta_min = omega_ * lo * len;
        constexpr double gk_limit = 2.0 * std::numbers::pi * 21.0 / 8.0;
        const bool tiny = len <= 1e-13 * std::max(1.0, std::abs(l));
        if (theta_max <= gk_limit || tiny) {
            auto f = [this](double t) { return integrand(t); };
            const Panel p = gk_panel<21>(f, l, r);
            heap.push(p);
            ++count;
            return p.err;
        }
        if (use_levin && theta_min >= 8.0) {
            const cplx v24 = levin(l, r, 24);
            const cplx v16 = levin(l, r, 16);
            const Panel p{l, r, v24, std::abs(v24 - v16)};
            heap.push(p);
            ++count;
            return p.err;
        }
        const double m = 0.5 * (l + r);
        return evaluate(l, m, use_levin, heap, count) + evaluate(m, r, use_levin, heap, count);
    }

private:
    const RealFunction& amp_;
    PhasePoint<double> p_;
    double omega_;
};

}  // namespace

static double heap_error(std::priority_queue<Panel> heap)
{
    double e = 0.0;
    while (!heap.empty()) {
        e += heap.top().err;
        heap.pop();
    }
    return e;
}

void gauss_legendre_panels(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w)
{
    if (panels < 1) throw std::invalid_argument("gauss_legendre_panels: panels < 1");
    using gl = boost::math::quadrature::gauss<double, 16>;
    const auto& ab = gl::abscissa();
    const auto& wt = gl::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h, r = 0.5 * h;
        for (std::size_t k = 0; k < ab.size(); ++k) {
            x.push_back(c - r * ab[k]);
            w.push_back(wt[k] * r);
            if (ab[k] != 0.0) {
                x.push_back(c + r * ab[k]);
                w.push_back(wt[k] * r);
            }
        }
    }
}

QuadratureResult quadrature_refine(const Integrand& f, double a, double b, double tol, PanelRule rule,
                                   int initial_panels, int max_panels)
{
    if (!(tol > 0.0)) throw std::invalid_argument("quadrature_refine: tol must be positive");
    if (initial_panels < 1) throw std::invalid_argument("quadrature_refine: initial_panels < 1");
    std::priority_queue<Panel> heap;
    const double h = (b - a) / initial_panels;
    double err = 0.0;
    for (int i = 0; i < initial_panels; ++i) {
        const double l = a + i * h;
        const double r = i + 1 == initial_panels ? b : a + (i + 1) * h;
        const Panel p = gk_rule(rule, f, l, r);
        heap.push(p);
        err += p.err;
    }
    int count = initial_panels;
    while (err > tol && count < max_panels) {
        const Panel p = heap.top();
        if (p.r - p.l <= 1e-14 * std::max(1.0, std::abs(p.l))) break;
        heap.pop();
        const double m = 0.5 * (p.l + p.r);
        const Panel left = gk_rule(rule, f, p.l, m);
        const Panel right = gk_rule(rule, f, m, p.r);
        heap.push(left);
        heap.push(right);
        ++count;
        err += left.err + right.err - p.err;
        if (count % 4096 == 0) err = heap_error(heap);
    }
    return collect(heap, count, heap_error(heap) <= tol);
}

QuadratureResult integrate_oscillatory(const RealFunction& amp, const PhasePoint<double>& p, double omega,
                                       double a, double b, std::vector<double> breakpoints,
                                       const QuadratureOptions& opt)
{
    if (!(b > a)) return {};
    if (p.w != 0.0) {
        if (auto c = critical_points(p)) {
            breakpoints.push_back(c->t_plus);
            breakpoints.push_back(c->t_minus);
        }
    }
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> pts;
    for (double x : breakpoints) {
        if (x < a || x > b) continue;
        if (!pts.empty() && x - pts.back() <= 1e-15 * std::max(1.0, std::abs(x))) continue;
        pts.push_back(x);
    }

    const OscillatoryPanels engine(amp, p, omega);
    std::priority_queue<Panel> heap;
    int count = 0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) err += engine.evaluate(pts[i], pts[i + 1], opt.use_levin, heap, count);

    int steps = 0;
    while (err > opt.abs_tol && count < opt.max_subdivisions) {
        const Panel top = heap.top();
        if (top.r - top.l <= 1e-13 * std::max(1.0, std::abs(top.l))) break;
        heap.pop();
        const double m = 0.5 * (top.l + top.r);
        err -= top.err;
        err += engine.evaluate(top.l, m, opt.use_levin, heap, count);
        err += engine.evaluate(m, top.r, opt.use_levin, heap, count);
        if (++steps % 4096 == 0) err = heap_error(heap);
    }
    return collect(heap, count, heap_error(heap) <= opt.abs_tol);
}

}  // namespace osc
