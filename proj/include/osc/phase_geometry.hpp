#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osc {

template <class Scalar>
struct PhasePoint {
    Scalar w{};
    Scalar xi{};
    Scalar eta{};
};

enum class Branch { plus, minus };

inline int sign_of(Branch b) { return b == Branch::plus ? 1 : -1; }
inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

template <class Scalar>
struct CriticalData {
    Scalar delta{};
    Scalar t_plus{};
    Scalar t_minus{};
};

template <class Scalar>
struct PhaseDerivs {
    Scalar d1{}, d2{}, d3{};
};

struct NoRealRoots : std::domain_error {
    NoRealRoots() : std::domain_error("discriminant is negative: no real critical points") {}
};

struct DegenerateDiscriminant : std::domain_error {
    DegenerateDiscriminant() : std::domain_error("discriminant is not positive: coalescing roots") {}
};

template <class Scalar>
Scalar phase(Scalar t, const PhasePoint<Scalar>& p)
{
    return t * (-p.xi + t * (-p.eta + t * p.w));
}

template <class Scalar>
PhaseDerivs<Scalar> phase_derivs(Scalar t, const PhasePoint<Scalar>& p)
{
    return {-p.xi - 2 * t * p.eta + 3 * t * t * p.w, -2 * p.eta + 6 * t * p.w, 6 * p.w};
}

template <class Scalar>
Scalar discriminant(const PhasePoint<Scalar>& p)
{
    return p.eta * p.eta + 3 * p.w * p.xi;
}

/// Roots of the derivative; nullopt when the discriminant is negative.
/// The root of larger modulus comes from the quadratic formula and the other
/// from the product t+ t- = -xi/(3w), which keeps both accurate when 3w xi is
/// small against eta^2.
template <class Scalar>
std::optional<CriticalData<Scalar>> critical_points(const PhasePoint<Scalar>& p)
{
    using std::sqrt;
    if (p.w == Scalar(0)) throw std::domain_error("critical_points: w = 0");
    const Scalar delta = discriminant(p);
    if (delta < Scalar(0)) return std::nullopt;
    const Scalar r = sqrt(delta);
    const Scalar w3 = 3 * p.w;
    CriticalData<Scalar> c{delta, Scalar(0), Scalar(0)};
    Scalar big;
    if (p.eta >= Scalar(0)) {
        big = (p.eta + r) / w3;
        c.t_plus = big;
        c.t_minus = big == Scalar(0) ? Scalar(0) : -p.xi / (w3 * big);
    } else {
        big = (p.eta - r) / w3;
        c.t_minus = big;
        c.t_plus = -p.xi / (w3 * big);
    }
    return c;
}

template <class Scalar>
Scalar branch_root(const PhasePoint<Scalar>& p, Branch b)
{
    auto c = critical_points(p);
    if (!c) throw NoRealRoots();
    return b == Branch::plus ? c->t_plus : c->t_minus;
}

template <class Scalar>
Scalar phi_branch(const PhasePoint<Scalar>& p, Branch b)
{
    return phase(branch_root(p, b), p);
}

namespace detail {

template <class Scalar>
CriticalData<Scalar> strict_roots(const PhasePoint<Scalar>& p)
{
    auto c = critical_points(p);
    if (!c) throw NoRealRoots();
    if (!(c->delta > Scalar(0))) throw DegenerateDiscriminant();
    return *c;
}

}  // namespace detail

/// (d_xi, d_eta, d_w) of the branch phase: (-t, -t^2, t^3).
template <class Scalar>
Eigen::Matrix<Scalar, 3, 1> phi_branch_grad(const PhasePoint<Scalar>& p, Branch b)
{
    const auto c = detail::strict_roots(p);
    const Scalar t = b == Branch::plus ? c.t_plus : c.t_minus;
    return {-t, -t * t, t * t * t};
}

template <class Scalar>
Scalar hessian_det(const PhasePoint<Scalar>& p, Branch b)
{
    const auto c = detail::strict_roots(p);
    const Scalar t = b == Branch::plus ? c.t_plus : c.t_minus;
    const Scalar t2 = t * t;
    return Scalar(-9) / 4 * t2 * t2 / (c.delta * c.delta);
}

template <class Scalar>
Scalar nikodym_det(const PhasePoint<Scalar>& p, Branch b)
{
    const auto c = detail::strict_roots(p);
    const Scalar t = b == Branch::plus ? c.t_plus : c.t_minus;
    const Scalar t2 = t * t;
    const Scalar t8 = t2 * t2 * t2 * t2;
    const Scalar d2 = c.delta * c.delta;
    return Scalar(-2187) / 16 * p.xi * t8 / (d2 * d2 * c.delta);
}

template <class Scalar>
Scalar exceptional_curvature(Scalar s, Scalar w_scaled)
{
    if (!(w_scaled > Scalar(0))) throw std::domain_error("exceptional_curvature: w_scaled <= 0");
    return Scalar(16) / 9 * s / (w_scaled * w_scaled * w_scaled);
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

struct StencilOutOfDomain : std::domain_error {
    StencilOutOfDomain() : std::domain_error("finite-difference stencil leaves the declared domain") {}
};

template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct FdOptions {
    int richardson_levels = 0;  // 0, 1 or 2
    std::function<bool(const VecX<Scalar>&)> domain;
};

namespace detail {

// Second-order central stencils for derivative orders 0..4 on offsets -2..2.
inline const std::array<std::array<double, 5>, 5>& central_weights()
{
    static const std::array<std::array<double, 5>, 5> w{{
        {0.0, 0.0, 1.0, 0.0, 0.0},
        {0.0, -0.5, 0.0, 0.5, 0.0},
        {0.0, 1.0, -2.0, 1.0, 0.0},
        {-0.5, 1.0, 0.0, -1.0, 0.5},
        {1.0, -4.0, 6.0, -4.0, 1.0},
    }};
    return w;
}

template <class Scalar, class F>
Scalar central_difference(const F& f, const VecX<Scalar>& x, const std::vector<int>& alpha,
                          const VecX<Scalar>& h, const FdOptions<Scalar>& opt)
{
    const auto& W = central_weights();
    const int k = static_cast<int>(x.size());
    std::vector<int> axes;
    for (int i = 0; i < k; ++i)
        if (alpha[i] > 0) axes.push_back(i);
    const int m = static_cast<int>(axes.size());

    Scalar sum(0);
    std::vector<int> idx(m, 0);
    VecX<Scalar> y(k);
    for (;;) {
        Scalar weight(1);
        y = x;
        for (int a = 0; a < m; ++a) {
            const int ax = axes[a];
            weight *= Scalar(W[alpha[ax]][idx[a]]);
            y[ax] += Scalar(idx[a] - 2) * h[ax];
        }
        if (weight != Scalar(0)) {
            if (opt.domain && !opt.domain(y)) throw StencilOutOfDomain();
            sum += weight * f(y);
        }
        int a = 0;
        while (a < m && ++idx[a] == 5) idx[a++] = 0;
        if (a == m) break;
    }
    for (int i = 0; i < k; ++i)
        for (int r = 0; r < alpha[i]; ++r) sum /= h[i];
    return sum;
}

}  // namespace detail

/// Central-difference estimate of the mixed partial d^alpha f at x, built as a
/// tensor product of one-dimensional second-order stencils. Each Richardson
/// level halves the steps and removes the next even power of h.
template <class Scalar, class F>
Scalar fd_oracle_derivative(const F& f, const VecX<Scalar>& x, const std::vector<int>& alpha,
                            const VecX<Scalar>& h, const FdOptions<Scalar>& opt = {})
{
    if (static_cast<Eigen::Index>(alpha.size()) != x.size() || h.size() != x.size())
        throw std::invalid_argument("fd_oracle_derivative: dimension mismatch");
    int order = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("fd_oracle_derivative: negative multi-index");
        order += a;
    }
    if (order > 4) throw std::invalid_argument("fd_oracle_derivative: |alpha| > 4");
    if (opt.richardson_levels < 0 || opt.richardson_levels > 2)
        throw std::invalid_argument("fd_oracle_derivative: richardson_levels must be 0, 1 or 2");

    const int levels = opt.richardson_levels;
    std::array<Scalar, 3> d{};
    VecX<Scalar> hh = h;
    for (int l = 0; l <= levels; ++l) {
        d[l] = detail::central_difference(f, x, alpha, hh, opt);
        hh /= Scalar(2);
    }
    if (levels >= 1) {
        for (int l = 0; l < levels; ++l) d[l] = (4 * d[l + 1] - d[l]) / 3;
    }
    if (levels == 2) d[0] = (16 * d[1] - d[0]) / 15;
    return d[0];
}

template <class Scalar, class F>
Scalar fd_oracle_derivative(const F& f, const VecX<Scalar>& x, const std::vector<int>& alpha,
                            Scalar h, const FdOptions<Scalar>& opt = {})
{
    return fd_oracle_derivative(f, x, alpha, VecX<Scalar>::Constant(x.size(), h).eval(), opt);
}

// ---------------------------------------------------------------------------
// Oracles for the closed-form identities. Coordinates are ordered (w, xi, eta).

/// Distance below which the critical-point map stays analytic: Delta over the
/// size of its gradient, capped by |w|.
template <class Scalar>
Scalar analytic_radius(const PhasePoint<Scalar>& p)
{
    using std::abs;
    using std::sqrt;
    const Scalar delta = discriminant(p);
    const Scalar g = sqrt(9 * p.xi * p.xi + 9 * p.w * p.w + 4 * p.eta * p.eta);
    Scalar r = delta / g;
    if (abs(p.w) < r) r = abs(p.w);
    return r;
}

template <class Scalar>
struct OracleOptions {
    Scalar step = Scalar(1e-3);  // relative to analytic_radius
    int richardson_levels = 0;
};

namespace detail {

template <class Scalar>
PhasePoint<Scalar> as_point(const VecX<Scalar>& y)
{
    return {y[0], y[1], y[2]};
}

template <class Scalar>
VecX<Scalar> as_vec(const PhasePoint<Scalar>& p)
{
    VecX<Scalar> v(3);
    v << p.w, p.xi, p.eta;
    return v;
}

template <class Scalar>
FdOptions<Scalar> positive_delta_domain(int levels)
{
    FdOptions<Scalar> o;
    o.richardson_levels = levels;
    o.domain = [](const VecX<Scalar>& y) { return y[0] != Scalar(0) && discriminant(as_point(y)) > Scalar(0); };
    return o;
}

}  // namespace detail

/// Determinant of the finite-difference (xi, eta)-Hessian of d_w phi_b.
template <class Scalar>
Scalar hessian_det_oracle(const PhasePoint<Scalar>& p, Branch b, const OracleOptions<Scalar>& o = {})
{
    const auto x = detail::as_vec(p);
    const Scalar h = o.step * analytic_radius(p);
    const auto opt = detail::positive_delta_domain<Scalar>(o.richardson_levels);
    auto dw = [b](const VecX<Scalar>& y) { return phi_branch_grad(detail::as_point(y), b)[2]; };
    const Scalar a = fd_oracle_derivative(dw, x, {0, 2, 0}, h, opt);
    const Scalar c = fd_oracle_derivative(dw, x, {0, 1, 1}, h, opt);
    const Scalar d = fd_oracle_derivative(dw, x, {0, 0, 2}, h, opt);
    return a * d - c * c;
}

/// Determinant of the 3x3 matrix with entries d_w^i of the second
/// (xi, eta)-derivatives of phi_b, i = 1..3, by nested central differences.
template <class Scalar>
Scalar nikodym_det_oracle(const PhasePoint<Scalar>& p, Branch b, const OracleOptions<Scalar>& o = {})
{
    const auto x = detail::as_vec(p);
    const Scalar h = o.step * analytic_radius(p);
    const auto opt = detail::positive_delta_domain<Scalar>(o.richardson_levels);
    auto dxi = [b](const VecX<Scalar>& y) { return phi_branch_grad(detail::as_point(y), b)[0]; };
    auto deta = [b](const VecX<Scalar>& y) { return phi_branch_grad(detail::as_point(y), b)[1]; };
    Eigen::Matrix<Scalar, 3, 3> N;
    for (int i = 1; i <= 3; ++i) {
        N(i - 1, 0) = fd_oracle_derivative(dxi, x, {i, 1, 0}, h, opt);
        N(i - 1, 1) = fd_oracle_derivative(dxi, x, {i, 0, 1}, h, opt);
        N(i - 1, 2) = fd_oracle_derivative(deta, x, {i, 0, 1}, h, opt);
    }
    return N.determinant();
}

/// Determinant of the finite-difference (xi, eta)-Hessian of phi_b itself.
template <class Scalar>
Scalar flat_hessian_check(const PhasePoint<Scalar>& p, Branch b, const OracleOptions<Scalar>& o = {})
{
    const auto x = detail::as_vec(p);
    const Scalar h = o.step * analytic_radius(p);
    const auto opt = detail::positive_delta_domain<Scalar>(o.richardson_levels);
    auto dxi = [b](const VecX<Scalar>& y) { return phi_branch_grad(detail::as_point(y), b)[0]; };
    auto deta = [b](const VecX<Scalar>& y) { return phi_branch_grad(detail::as_point(y), b)[1]; };
    const Scalar a = fd_oracle_derivative(dxi, x, {0, 1, 0}, h, opt);
    const Scalar c = fd_oracle_derivative(dxi, x, {0, 0, 1}, h, opt);
    const Scalar d = fd_oracle_derivative(deta, x, {0, 0, 1}, h, opt);
    return a * d - c * c;
}

/// Second difference in s of s -> d_w phi_{sgn s}(w; 0, s).
template <class Scalar>
Scalar curvature_oracle(Scalar s, Scalar w_scaled, const OracleOptions<Scalar>& o = {})
{
    using std::abs;
    if (s == Scalar(0)) throw std::domain_error("curvature_oracle: s = 0");
    const Branch b = s > Scalar(0) ? Branch::plus : Branch::minus;
    auto g = [b, w_scaled](const VecX<Scalar>& y) {
        return phi_branch_grad(PhasePoint<Scalar>{w_scaled, Scalar(0), y[0]}, b)[2];
    };
    FdOptions<Scalar> opt;
    opt.richardson_levels = o.richardson_levels;
    opt.domain = [s](const VecX<Scalar>& y) { return (y[0] > Scalar(0)) == (s > Scalar(0)); };
    VecX<Scalar> x(1);
    x << s;
    return fd_oracle_derivative(g, x, {2}, o.step * abs(s), opt);
}

// ---------------------------------------------------------------------------
// Amplitude classes (support conditions only)

enum class AmplitudeClass { A_pm, N_pm, E_pm, B };

struct AmplitudeClassSpec {
    AmplitudeClass class_kind = AmplitudeClass::A_pm;
    double tau = 0.1;
    double sigma = 0.5;
    double c_star = 8.0;
    Branch branch = Branch::plus;
};

struct MembershipReport {
    bool member = true;
    std::vector<std::pair<std::string, bool>> conditions;
    std::vector<std::string> reasons;  // failed conditions

    void require(const std::string& name, bool ok)
    {
        conditions.emplace_back(name, ok);
        if (!ok) {
            member = false;
            reasons.push_back(name);
        }
    }
};

MembershipReport amplitude_class_check(const AmplitudeClassSpec& spec, const PhasePoint<double>& p);

}  // namespace osc
