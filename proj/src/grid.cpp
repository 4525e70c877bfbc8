#include "osc/grid.hpp"

#include "osc/bumps.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace osc {

namespace {

constexpr double pi = std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double wrapped_freq(int i, int n, double L)
{
    const int k = i < (n + 1) / 2 ? i : i - n;
    return 2.0 * pi * k / L;
}

// Unnormalized 2-D DFT of column-major data (x fastest), in place.
void fft2(Eigen::MatrixXcd& d, int sign)
{
    auto* p = reinterpret_cast<fftw_complex*>(d.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(d.cols()), static_cast<int>(d.rows()), p, p, sign,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

int wrap(int i, int n)
{
    const int r = i % n;
    return r < 0 ? r + n : r;
}

int panels_for(int nodes) { return std::max(1, (nodes + 15) / 16); }

}  // namespace

GridField::GridField(int nx_, int ny_, double Lx_, double Ly_) : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_)
{
    if (!is_pow2(nx) || !is_pow2(ny)) throw std::invalid_argument("GridField: sizes must be powers of two");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("GridField: box must be positive");
    data = Eigen::MatrixXcd::Zero(nx, ny);
}

double GridField::freq_x(int i) const { return wrapped_freq(i, nx, Lx); }
double GridField::freq_y(int k) const { return wrapped_freq(k, ny, Ly); }

GridField transform_forward(const GridField& f)
{
    GridField g = f;
    fft2(g.data, FFTW_FORWARD);
    g.data /= std::sqrt(static_cast<double>(f.nx) * f.ny);
    return g;
}

GridField transform_inverse(const GridField& f)
{
    GridField g = f;
    fft2(g.data, FFTW_BACKWARD);
    g.data /= std::sqrt(static_cast<double>(f.nx) * f.ny);
    return g;
}

double l2_norm(const GridField& f) { return std::sqrt(f.data.squaredNorm() * f.cell_area()); }

double lp_norm(const GridField& f, double p)
{
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p < 1");
    if (std::isinf(p)) return max_abs(f);
    return std::pow(f.data.cwiseAbs().array().pow(p).sum() * f.cell_area(), 1.0 / p);
}

double l1_norm(const GridField& f) { return f.data.cwiseAbs().sum() * f.cell_area(); }

double max_abs(const GridField& f) { return f.data.size() ? f.data.cwiseAbs().maxCoeff() : 0.0; }

GridField apply_symbol(const GridField& f, const Symbol& m, double skip_below)
{
    GridField g = transform_forward(f);
    const double cut = skip_below > 0.0 ? skip_below * max_abs(g) : -1.0;
    for (int k = 0; k < g.ny; ++k) {
        for (int i = 0; i < g.nx; ++i) {
            if (std::abs(g.data(i, k)) <= cut) g.data(i, k) = 0.0;
            else g.data(i, k) *= m(g.freq_x(i), g.freq_y(k));
        }
    }
    return transform_inverse(g);
}

GridField lp_project(const GridField& f, int axis, int m, ProjectionMode mode)
{
    if (axis != 1 && axis != 2) throw std::invalid_argument("lp_project: axis must be 1 or 2");
    const double nyquist = axis == 1 ? pi * f.nx / f.Lx : pi * f.ny / f.Ly;
    const double reach = std::ldexp(1.0, mode == ProjectionMode::tilde ? m + 2 : m + 1);
    if (reach > nyquist)
        throw UnresolvedScale("lp_project: scale 2^" + std::to_string(m) + " exceeds the grid Nyquist frequency");
    auto cut = [m, mode](double s) {
        const double u = std::ldexp(s, -m);
        switch (mode) {
        case ProjectionMode::sharp: return beta(u);
        case ProjectionMode::leq: return beta0(u);
        default: return beta_tilde(u);
        }
    };
    return apply_symbol(f, [&](double xi, double eta) { return cplx(cut(axis == 1 ? xi : eta)); });
}

QuadratureFailure::QuadratureFailure(double xi_, double eta_)
    : std::runtime_error("quadrature failed at (xi, eta) = (" + std::to_string(xi_) + ", " + std::to_string(eta_) +
                         ")"),
      xi(xi_),
      eta(eta_)
{
}

Eigen::MatrixXcd sample_multiplier(const GridField& shape, const MultiplierQuery& q, const MultiplierOptions& opt,
                                   double sx, double sy)
{
    Eigen::MatrixXcd m(shape.nx, shape.ny);
    MultiplierQuery p = q;
    for (int k = 0; k < shape.ny; ++k) {
        for (int i = 0; i < shape.nx; ++i) {
            p.xi = sx * shape.freq_x(i);
            p.eta = sy * shape.freq_y(k);
            const auto r = multiplier_localized(p, opt);
            if (!r.converged) throw QuadratureFailure(p.xi, p.eta);
            m(i, k) = r.value;
        }
    }
    return m;
}

GridField apply_multiplier_operator(const GridField& f, const MultiplierQuery& q, const MultiplierOptions& opt)
{
    GridField g = transform_forward(f);
    g.data = g.data.cwiseProduct(sample_multiplier(f, q, opt));
    return transform_inverse(g);
}

KernelResult kernel_from_symbol(const GridField& shape, const Eigen::MatrixXcd& symbol)
{
    KernelResult r{shape.zeros_like(), 0.0};
    r.field.data = symbol;
    // (-1)^(i + k) moves the origin from index 0 to (nx/2, ny/2).
    for (int k = 0; k < shape.ny; ++k)
        for (int i = 0; i < shape.nx; ++i)
            if ((i + k) & 1) r.field.data(i, k) = -r.field.data(i, k);
    fft2(r.field.data, FFTW_BACKWARD);
    r.field.data /= shape.Lx * shape.Ly;
    r.l1_norm = l1_norm(r.field);
    return r;
}

KernelResult kernel_of(const MultiplierQuery& q, const GridField& shape, const MultiplierOptions& opt)
{
    return kernel_from_symbol(shape, sample_multiplier(shape, q, opt));
}

GridField circular_convolve_direct(const GridField& kernel, const GridField& f)
{
    if (kernel.nx != f.nx || kernel.ny != f.ny) throw std::invalid_argument("circular_convolve_direct: shape mismatch");
    GridField out = f.zeros_like();
    const int cx = f.nx / 2, cy = f.ny / 2;
    for (int k = 0; k < f.ny; ++k) {
        for (int i = 0; i < f.nx; ++i) {
            cplx acc = 0.0;
            for (int l = 0; l < f.ny; ++l) {
                const int kk = wrap(k - l + cy, f.ny);
                for (int j = 0; j < f.nx; ++j) acc += kernel.data(wrap(i - j + cx, f.nx), kk) * f.data(j, l);
            }
            out.data(i, k) = acc * f.cell_area();
        }
    }
    return out;
}

cplx interpolate(const GridField& f, double x, double y)
{
    const double u = x / f.hx() + f.nx / 2, v = y / f.hy() + f.ny / 2;
    const double fu = std::floor(u), fv = std::floor(v);
    const double a = u - fu, b = v - fv;
    const int i0 = wrap(static_cast<int>(fu), f.nx), k0 = wrap(static_cast<int>(fv), f.ny);
    const int i1 = (i0 + 1) % f.nx, k1 = (k0 + 1) % f.ny;
    return (1 - a) * (1 - b) * f.data(i0, k0) + a * (1 - b) * f.data(i1, k0) + (1 - a) * b * f.data(i0, k1) +
           a * b * f.data(i1, k1);
}

GridField parabola_convolve(const GridField& f, const ParabolaProfile& profile, double lambda)
{
    if (profile.s.size() != profile.w.size()) throw std::invalid_argument("parabola_convolve: profile size mismatch");
    GridField out = f.zeros_like();
    const int nx = f.nx, ny = f.ny;
    std::vector<int> ix0(nx), ix1(nx), ky0(ny), ky1(ny);
    for (std::size_t q = 0; q < profile.s.size(); ++q) {
        const cplx wq = profile.w[q];
        if (wq == cplx(0.0)) continue;
        const double t = lambda * profile.s[q];
        // Every node shares the same shift, so the bilinear weights are common.
        const double u = -t / f.hx(), v = -t * t / f.hy();
        const double fu = std::floor(u), fv = std::floor(v);
        const double a = u - fu, b = v - fv;
        const int su = static_cast<int>(fu), sv = static_cast<int>(fv);
        for (int i = 0; i < nx; ++i) {
            ix0[i] = wrap(i + su, nx);
            ix1[i] = wrap(i + su + 1, nx);
        }
        for (int k = 0; k < ny; ++k) {
            ky0[k] = wrap(k + sv, ny);
            ky1[k] = wrap(k + sv + 1, ny);
        }
        const cplx w00 = wq * (1 - a) * (1 - b), w10 = wq * a * (1 - b), w01 = wq * (1 - a) * b, w11 = wq * a * b;
        for (int k = 0; k < ny; ++k) {
            const cplx* c0 = f.data.col(ky0[k]).data();
            const cplx* c1 = f.data.col(ky1[k]).data();
            cplx* o = out.data.col(k).data();
            for (int i = 0; i < nx; ++i)
                o[i] += w00 * c0[ix0[i]] + w10 * c0[ix1[i]] + w01 * c1[ix0[i]] + w11 * c1[ix1[i]];
        }
    }
    return out;
}

ParabolaProfile hilbert_profile(double v, int m, int nodes_per_side)
{
    const double lo = std::ldexp(0.5, m), hi = std::ldexp(2.0, m);
    if (nodes_per_side <= 0) {
        // Eight nodes per local wavelength of exp(i v t^3), at least 256.
        const double turns = std::abs(v) * (hi * hi * hi - lo * lo * lo) / (2.0 * pi);
        nodes_per_side = std::max(256, static_cast<int>(std::ceil(8.0 * turns)));
    }
    ParabolaProfile p;
    std::vector<double> s, w;
    gauss_legendre_panels(lo, hi, panels_for(nodes_per_side), s, w);
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (double sg : {-1.0, 1.0}) {
            const double t = sg * s[k];
            p.s.push_back(t);
            p.w.push_back(std::polar(w[k] * beta(std::ldexp(t, -m)) / t, v * t * t * t));
        }
    }
    return p;
}

ParabolaProfile average_profile(double r, int nodes)
{
    if (!(r > 0.0)) throw std::invalid_argument("average_profile: r must be positive");
    ParabolaProfile p;
    std::vector<double> s, w;
    gauss_legendre_panels(-r, r, panels_for(nodes), s, w);
    p.s = s;
    for (double wk : w) p.w.emplace_back(wk / (2.0 * r));
    return p;
}

GridField parabolic_maximal(const GridField& f, const std::vector<double>& radii, int nodes)
{
    GridField a = f;
    a.data = f.data.cwiseAbs().cast<cplx>();
    GridField out = f.zeros_like();
    const double h = std::min(f.hx(), f.hy());
    for (double r : radii) {
        int n = nodes;
        if (n <= 0) {
            const double arc = 2.0 * r * std::sqrt(1.0 + 4.0 * r * r);
            n = std::max(32, static_cast<int>(std::ceil(2.0 * arc / h)));
        }
        const GridField avg = parabola_convolve(a, average_profile(r, n));
        out.data = out.data.cwiseAbs().cwiseMax(avg.data.cwiseAbs()).cast<cplx>();
    }
    return out;
}

cplx hilbert_symbol(double v, int m, double xi, double eta, double abs_tol)
{
    // t = 2^m s turns the integral into m_0 with phase parameters rescaled.
    MultiplierOptions opt;
    opt.quad.abs_tol = abs_tol;
    const auto r = multiplier_m(0, std::ldexp(v, 3 * m), std::ldexp(xi, m), std::ldexp(eta, 2 * m), opt);
    if (!r.converged) throw QuadratureFailure(xi, eta);
    return r.value;
}

double rescaling_check(const GridField& f, int j, int ell, int k1, int k2, double v, RescalingRoute route,
                       int nodes_per_side)
{
    if (ell < 0) throw std::invalid_argument("rescaling_check: ell < 0");
    const int m = -j + ell;
    GridField g = lp_project(f, 1, k1 + 2 * ell + j, ProjectionMode::sharp);
    g = lp_project(g, 2, k2 + ell + 2 * j, ProjectionMode::sharp);
    const GridField lhs = route == RescalingRoute::spatial
                              ? parabola_convolve(g, hilbert_profile(v, m, nodes_per_side))
                              : apply_symbol(g, [&](double xi, double eta) { return hilbert_symbol(v, m, xi, eta); });

    // f_{l,j}(x, y) = f(2^(-2l-j) x, 2^(-l-2j) y): same samples on a dilated box.
    GridField d(f.nx, f.ny, std::ldexp(f.Lx, 2 * ell + j), std::ldexp(f.Ly, ell + 2 * j));
    d.data = f.data;
    MultiplierQuery q;
    q.n = 3 * ell;
    q.w = std::ldexp(v, -3 * j);
    q.k1 = k1;
    q.k2 = k2;
    MultiplierOptions opt;
    opt.quad.abs_tol = 1e-12;
    d.data = transform_forward(d).data;
    d.data = d.data.cwiseProduct(sample_multiplier(d, q, opt));
    const GridField rhs = transform_inverse(d);

    const double scale = max_abs(lhs);
    if (scale == 0.0) return max_abs(rhs) == 0.0 ? 0.0 : INFINITY;
    return (lhs.data - rhs.data).cwiseAbs().maxCoeff() / scale;
}

GridField propagator_slice(const GridField& f, Branch b, const std::function<cplx(double, double)>& amp,
                           double lambda, double w)
{
    const double wp = w / lambda;
    return apply_symbol(f, [&](double xi, double eta) {
        const cplx a = amp(xi, eta);
        if (a == cplx(0.0)) return cplx(0.0);
        const PhasePoint<double> p{wp, xi, eta};
        if (!(discriminant(p) > 0.0)) throw DegenerateDiscriminant();
        constexpr long double two_pi = 6.283185307179586476925286766559005768L;
        long double arg = static_cast<long double>(lambda) * phi_branch(p, b);
        arg -= two_pi * std::nearbyint(arg / two_pi);
        return a * std::polar(1.0, static_cast<double>(arg));
    });
}

GridField gaussian_field(int n, double L, double sigma, double cx, double cy)
{
    GridField g(n, L);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            const double dx = g.x(i) - cx, dy = g.y(k) - cy;
            g.data(i, k) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
    return g;
}

}  // namespace osc
