#include "osc/kernel_synthesis.hpp"

#include "osc/bumps.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace osc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double table_step = 1.0 / 512.0;

const std::vector<double>& cached_table(CutoffKernel::Kind kind, double band)
{
    static std::map<std::pair<int, double>, std::vector<double>> cache;
    auto key = std::make_pair(static_cast<int>(kind), band);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> xi, wt;
    const std::vector<double> cuts = kind == CutoffKernel::Kind::sharp ? std::vector<double>{0.5, 1.0, 2.0}
                                                                       : std::vector<double>{0.0, 1.0, 2.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int panels = std::max(2, static_cast<int>(std::ceil((band + 8.0) * len / pi)));
        gauss_legendre_panels(cuts[i], cuts[i + 1], panels, xi, wt);
    }
    for (std::size_t k = 0; k < xi.size(); ++k)
        wt[k] *= (kind == CutoffKernel::Kind::sharp ? beta(xi[k]) : beta0(xi[k])) / pi;

    const int n = static_cast<int>(std::ceil(band / table_step)) + 4;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
        const double u = i * table_step;
        double s = 0.0;
        for (std::size_t k = 0; k < xi.size(); ++k) s += wt[k] * std::cos(u * xi[k]);
        t[i] = s;
    }
    return cache.emplace(key, std::move(t)).first->second;
}

double smallest_pow2_at_least(double x)
{
    double p = 1.0;
    while (p < x) p *= 2.0;
    return p;
}

// Row convolution with g1 sampled on the step grid, by FFT of padded length P.
class RowConvolver {
public:
    RowConvolver(std::vector<double> c) : c_(std::move(c)) {}
    ~RowConvolver()
    {
        for (auto& [p, e] : plans_) {
            fftw_destroy_plan(e->fwd);
            fftw_destroy_plan(e->bwd);
            fftw_free(e->buf);
        }
    }
    RowConvolver(const RowConvolver&) = delete;
    RowConvolver& operator=(const RowConvolver&) = delete;

    int radius() const { return static_cast<int>(c_.size() / 2); }

    // out[o] = sum_j g[j] c[o - j], o in [0, g.size() + c.size() - 1).
    void convolve(const std::vector<cplx>& g, std::vector<cplx>& out)
    {
        const std::size_t len = g.size() + c_.size() - 1;
        const int P = static_cast<int>(smallest_pow2_at_least(static_cast<double>(len)));
        Entry& e = entry(P);
        auto* b = reinterpret_cast<cplx*>(e.buf);
        std::fill(b, b + P, cplx(0.0));
        std::copy(g.begin(), g.end(), b);
        fftw_execute(e.fwd);
        for (int i = 0; i < P; ++i) b[i] *= e.chat[i];
        fftw_execute(e.bwd);
        out.assign(b, b + len);
        for (auto& v : out) v /= static_cast<double>(P);
    }

private:
    struct Entry {
        fftw_plan fwd, bwd;
        fftw_complex* buf;
        std::vector<cplx> chat;
    };

    Entry& entry(int P)
    {
        auto it = plans_.find(P);
        if (it != plans_.end()) return *it->second;
        auto e = std::make_unique<Entry>();
        e->buf = fftw_alloc_complex(P);
        e->fwd = fftw_plan_dft_1d(P, e->buf, e->buf, FFTW_FORWARD, FFTW_ESTIMATE);
        e->bwd = fftw_plan_dft_1d(P, e->buf, e->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        auto* b = reinterpret_cast<cplx*>(e->buf);
        std::fill(b, b + P, cplx(0.0));
        for (std::size_t i = 0; i < c_.size(); ++i) b[i] = c_[i];
        fftw_execute(e->fwd);
        e->chat.assign(b, b + P);
        return *plans_.emplace(P, std::move(e)).first->second;
    }

    std::vector<double> c_;
    std::map<int, std::unique_ptr<Entry>> plans_;
};

struct Window {
    long m0, m1;  // s = m h for m0 <= m <= m1
};

// Index windows of s where a(s / 2^n) g2(y - s^2 / 2^n) can be nonzero.
std::vector<Window> s_windows(int n, double y, double r2, double h, long pad)
{
    std::vector<Window> out;
    const double N = std::ldexp(1.0, n);
    const double lo2 = std::max(N * (y - r2), 0.25 * N * N), hi2 = std::min(N * (y + r2), 4.0 * N * N);
    if (!(hi2 > lo2)) return out;
    const long m0 = static_cast<long>(std::ceil(std::sqrt(lo2) / h)), m1 = static_cast<long>(std::floor(std::sqrt(hi2) / h));
    if (m1 < m0) return out;
    if (m0 - pad <= pad - m0) {
        out.push_back({-m1, m1});
    } else {
        out.push_back({-m1, -m0});
        out.push_back({m0, m1});
    }
    return out;
}

struct RowSetup {
    int n;
    double w, h, r1, r2, scale1, scale2;
    const CutoffKernel* g2;

    cplx G(long m, double y) const
    {
        const double s = m * h;
        const double N = std::ldexp(1.0, n);
        const double a = amplitude_a(s / N);
        if (a == 0.0) return 0.0;
        const double v = scale2 * (*g2)(scale2 * (y - s * s / N));
        if (v == 0.0) return 0.0;
        constexpr long double two_pi = 6.283185307179586476925286766559005768L;
        const long double S = static_cast<long double>(s);
        long double arg = static_cast<long double>(w) * S * S * S / (static_cast<long double>(N) * N);
        arg -= two_pi * std::nearbyint(arg / two_pi);
        return std::polar(a * v / N, static_cast<double>(arg));
    }
};

double default_step(double w, int k1, int k2)
{
    const double band = 12.0 * std::abs(w) + std::ldexp(1.0, k2 + 3) + std::ldexp(1.0, k1 + 1);
    return std::min(0.25, 2.0 * pi / (1.1 * band));
}

}  // namespace

CutoffKernel::CutoffKernel(Kind kind, double band) : band_(band), step_(table_step)
{
    if (!(band > 0.0)) throw std::invalid_argument("CutoffKernel: band must be positive");
    table_ = cached_table(kind, band);
}

double CutoffKernel::operator()(double u) const
{
    u = std::abs(u);
    if (u >= band_) return 0.0;
    const double x = u / step_;
    long i = static_cast<long>(x) - 1;
    if (i < 0) i = 0;
    const double t = x - static_cast<double>(i);
    const double* p = table_.data() + i;
    // Cubic Lagrange through nodes i..i+3 at local coordinate t in [0, 3].
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double l1 = t * (t - 2) * (t - 3) / 2.0;
    const double l2 = -t * (t - 1) * (t - 3) / 2.0;
    const double l3 = t * (t - 1) * (t - 2) / 6.0;
    if (x < 1.0) {
        // Mirror through u = 0 so the even symmetry is kept near the origin.
        const double tm = x + 1.0;
        const double q[4] = {table_[1], table_[0], table_[1], table_[2]};
        const double m0 = -(tm - 1) * (tm - 2) * (tm - 3) / 6.0, m1 = tm * (tm - 2) * (tm - 3) / 2.0;
        const double m2 = -tm * (tm - 1) * (tm - 3) / 2.0, m3 = tm * (tm - 1) * (tm - 2) / 6.0;
        return m0 * q[0] + m1 * q[1] + m2 * q[2] + m3 * q[3];
    }
    return l0 * p[0] + l1 * p[1] + l2 * p[2] + l3 * p[3];
}

namespace {

struct Synthesizer {
    CutoffKernel g1, g2;
    RowSetup setup;
    std::unique_ptr<RowConvolver> conv;

    Synthesizer(int n, double w, int k1, int k2, const SynthesisOptions& opt)
        : g1(CutoffKernel::Kind::sharp, opt.band), g2(CutoffKernel::Kind::sharp, opt.band)
    {
        if (n < 0) throw std::invalid_argument("synthesize_kernel: n < 0");
        const double h = opt.h > 0.0 ? opt.h : default_step(w, k1, k2);
        setup = {n, w, h, std::ldexp(opt.band, -k1), std::ldexp(opt.band, -k2), std::ldexp(1.0, k1),
                 std::ldexp(1.0, k2), &g2};
        const int r = static_cast<int>(std::floor(setup.r1 / h));
        std::vector<double> c(2 * r + 1);
        for (int i = -r; i <= r; ++i) c[i + r] = setup.scale1 * g1(setup.scale1 * i * h) * h;
        conv = std::make_unique<RowConvolver>(std::move(c));
    }

    template <class Sink>
    void row(double y, Sink&& sink)
    {
        const int r = conv->radius();
        std::vector<cplx> g, out;
        for (const Window& win : s_windows(setup.n, y, setup.r2, setup.h, r)) {
            g.resize(static_cast<std::size_t>(win.m1 - win.m0 + 1));
            for (long m = win.m0; m <= win.m1; ++m) g[m - win.m0] = setup.G(m, y);
            conv->convolve(g, out);
            sink(win.m0 - r, out);
        }
    }
};

}  // namespace

KernelRow synthesize_kernel_row(int n, double w, int k1, int k2, double y, const SynthesisOptions& opt)
{
    Synthesizer syn(n, w, k1, k2, opt);
    KernelRow row;
    row.hx = syn.setup.h;
    syn.row(y, [&](long i0, const std::vector<cplx>& v) {
        if (row.values.empty()) {
            row.i0 = i0;
            row.values = v;
            return;
        }
        const long lo = std::min(row.i0, i0);
        const long hi = std::max(row.i0 + static_cast<long>(row.values.size()), i0 + static_cast<long>(v.size()));
        std::vector<cplx> merged(static_cast<std::size_t>(hi - lo), cplx(0.0));
        for (std::size_t k = 0; k < row.values.size(); ++k) merged[row.i0 - lo + k] += row.values[k];
        for (std::size_t k = 0; k < v.size(); ++k) merged[i0 - lo + k] += v[k];
        row.i0 = lo;
        row.values = std::move(merged);
    });
    return row;
}

SynthesisResult synthesize_kernel(int n, double w, int k1, int k2, const SynthesisOptions& opt)
{
    Synthesizer syn(n, w, k1, k2, opt);
    SynthesisResult res;
    res.hx = syn.setup.h;
    res.hy = std::ldexp(opt.hy, -k2);
    const double N = std::ldexp(1.0, n);
    const long r0 = static_cast<long>(std::ceil((0.25 * N - syn.setup.r2) / res.hy));
    const long r1 = static_cast<long>(std::floor((4.0 * N + syn.setup.r2) / res.hy));
    for (long r = r0; r <= r1; ++r) {
        const double y = r * res.hy;
        std::vector<std::pair<long, std::vector<cplx>>> parts;
        syn.row(y, [&](long i0, const std::vector<cplx>& v) { parts.emplace_back(i0, v); });
        if (parts.empty()) continue;
        ++res.rows;
        // Branch windows are merged by s_windows whenever their outputs would overlap.
        for (const auto& [i0, v] : parts) {
            for (const cplx& z : v) {
                const double a = std::abs(z);
                res.l1_norm += a;
                res.max_abs = std::max(res.max_abs, a);
            }
        }
    }
    res.l1_norm *= res.hx * res.hy;
    return res;
}

double low_kernel_max(int ell, double w, int c1, int c2, const SynthesisOptions& opt)
{
    if (ell < 0) throw std::invalid_argument("low_kernel_max: ell < 0");
    const int n = 3 * ell;
    const double N = std::ldexp(1.0, n);
    CutoffKernel g2(CutoffKernel::Kind::leq, opt.band);
    const double h = opt.h > 0.0 ? opt.h : default_step(w, -c1, -c2);
    const RowSetup setup{n, w, h, std::ldexp(opt.band, c1), std::ldexp(opt.band, c2), std::ldexp(1.0, -c1),
                         std::ldexp(1.0, -c2), &g2};

    // xi-quadrature of the narrow beta0(2^c1 xi) band.
    std::vector<double> xi, wt;
    gauss_legendre_panels(-std::ldexp(2.0, -c1), std::ldexp(2.0, -c1), 4, xi, wt);
    const int Q = static_cast<int>(xi.size());
    for (int q = 0; q < Q; ++q) wt[q] *= beta0(std::ldexp(xi[q], c1)) / (2.0 * pi);

    const double hX = std::ldexp(0.25, c1);
    const long nX = static_cast<long>(std::ceil((2.0 * N + std::ldexp(8.0, c1)) / hX));
    Eigen::MatrixXcd E(2 * nX + 1, Q);
    for (long i = -nX; i <= nX; ++i)
        for (int q = 0; q < Q; ++q) E(i + nX, q) = wt[q] * std::polar(1.0, i * hX * xi[q]);

    Eigen::VectorXcd step(Q);
    for (int q = 0; q < Q; ++q) step[q] = std::polar(1.0, -h * xi[q]);

    const double hy = std::ldexp(opt.hy, c2);
    const long r0 = static_cast<long>(std::ceil((0.25 * N - setup.r2) / hy));
    const long r1 = static_cast<long>(std::floor((4.0 * N + setup.r2) / hy));
    double best = 0.0;
    Eigen::VectorXcd ghat(Q), z(Q);
    for (long r = r0; r <= r1; ++r) {
        const double y = r * hy;
        ghat.setZero();
        for (const Window& win : s_windows(n, y, setup.r2, h, 0)) {
            for (int q = 0; q < Q; ++q) z[q] = std::polar(1.0, -win.m0 * h * xi[q]);
            for (long m = win.m0; m <= win.m1; ++m) {
                const cplx g = setup.G(m, y);
                if (g != cplx(0.0)) ghat += g * z;
                z = z.cwiseProduct(step);
            }
        }
        ghat *= h;
        best = std::max(best, (E * ghat).cwiseAbs().maxCoeff());
    }
    return std::ldexp(best, 3 * ell);
}

}  // namespace osc
