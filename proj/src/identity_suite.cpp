#include "osc/identity_suite.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cmath>

namespace osc {

namespace {

using mp50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

double rel(double approx, double exact) { return std::abs(approx - exact) / std::abs(exact); }

}  // namespace

SampledPoint sample_phase_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        const double w = 0.5 + 7.5 * U(rng);
        const double tb = (0.25 + 3.75 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
        const double to = 8.0 * U(rng) - 4.0;
        const Branch b = U(rng) < 0.5 ? Branch::plus : Branch::minus;
        const double tp = b == Branch::plus ? tb : to;
        const double tm = b == Branch::plus ? to : tb;
        const double s = 4.0 * U(rng) - 2.0;
        const double ws = 0.5 + 7.5 * U(rng);
        if (tp <= tm || s == 0.0) continue;
        const PhasePoint<double> p{w, -3.0 * w * tp * tm, 1.5 * w * (tp + tm)};
        if (discriminant(p) < 0.1 || std::abs(p.xi) < 0.05) continue;
        const double t = branch_root(p, b);
        if (std::abs(t) < 0.25 || std::abs(t) > 4.0) continue;
        return {p, b, s, ws};
    }
}

double vieta_residual(const PhasePoint<double>& p)
{
    const auto c = critical_points(p);
    if (!c) throw NoRealRoots();
    const double scale = std::max({std::abs(c->t_plus), std::abs(c->t_minus), 1.0});
    const double sum = std::abs(c->t_plus + c->t_minus - 2.0 * p.eta / (3.0 * p.w)) / scale;
    const double prod = std::abs(c->t_plus * c->t_minus + p.xi / (3.0 * p.w)) / (scale * scale);
    return std::max(sum, prod);
}

double criticality_residual(const PhasePoint<double>& p)
{
    const auto c = critical_points(p);
    if (!c) throw NoRealRoots();
    double r = 0.0;
    for (double t : {c->t_plus, c->t_minus}) {
        const double size = std::abs(p.xi) + std::abs(2.0 * t * p.eta) + std::abs(3.0 * t * t * p.w);
        if (size > 0.0) r = std::max(r, std::abs(phase_derivs(t, p).d1) / size);
    }
    return r;
}

IdentityReport run_identity_suite(const IdentityOptions& opt)
{
    if (opt.samples < 1) throw std::invalid_argument("run_identity_suite: samples < 1");
    std::mt19937_64 rng(opt.seed);
    OracleOptions<mp50> plain, rich;
    plain.step = mp50(opt.step);
    rich.step = mp50(opt.richardson_step);
    rich.richardson_levels = 2;

    IdentityReport rep;
    for (int k = 0; k < opt.samples; ++k) {
        IdentitySample r;
        r.point = sample_phase_point(rng);
        const SampledPoint& sp = r.point;
        const PhasePoint<mp50> q{mp50(sp.p.w), mp50(sp.p.xi), mp50(sp.p.eta)};
        const mp50 s(sp.s), ws(sp.w_scaled);
        r.hessian = hessian_det(sp.p, sp.branch);
        r.nikodym = nikodym_det(sp.p, sp.branch);
        r.curvature = exceptional_curvature(sp.s, sp.w_scaled);
        r.hessian_err = rel(static_cast<double>(hessian_det_oracle(q, sp.branch, plain)), r.hessian);
        r.hessian_err_r = rel(static_cast<double>(hessian_det_oracle(q, sp.branch, rich)), r.hessian);
        r.nikodym_err = rel(static_cast<double>(nikodym_det_oracle(q, sp.branch, plain)), r.nikodym);
        r.nikodym_err_r = rel(static_cast<double>(nikodym_det_oracle(q, sp.branch, rich)), r.nikodym);
        r.curvature_err = rel(static_cast<double>(curvature_oracle(s, ws, plain)), r.curvature);
        r.curvature_err_r = rel(static_cast<double>(curvature_oracle(s, ws, rich)), r.curvature);
        r.flat = std::abs(static_cast<double>(flat_hessian_check(q, sp.branch, rich)));
        r.vieta = vieta_residual(sp.p);
        r.criticality = criticality_residual(sp.p);
        rep.rows.push_back(r);
    }
    auto worst = [&](double IdentitySample::*field) {
        double m = 0.0;
        for (const auto& r : rep.rows) m = std::max(m, r.*field);
        return m;
    };
    rep.samples = opt.samples;
    auto add = [&](const char* name, double err, double tol) { rep.metrics.push_back({name, err, tol, err < tol}); };
    add("hessian_det", worst(&IdentitySample::hessian_err), opt.tol);
    add("hessian_det_richardson", worst(&IdentitySample::hessian_err_r), opt.richardson_tol);
    add("nikodym_det", worst(&IdentitySample::nikodym_err), opt.tol);
    add("nikodym_det_richardson", worst(&IdentitySample::nikodym_err_r), opt.richardson_tol);
    add("exceptional_curvature", worst(&IdentitySample::curvature_err), opt.tol);
    add("exceptional_curvature_richardson", worst(&IdentitySample::curvature_err_r), opt.richardson_tol);
    add("flat_hessian", worst(&IdentitySample::flat), opt.flat_tol);
    add("vieta", worst(&IdentitySample::vieta), opt.algebra_tol);
    add("criticality", worst(&IdentitySample::criticality), opt.algebra_tol);
    rep.pass = std::all_of(rep.metrics.begin(), rep.metrics.end(), [](const IdentityMetric& m) { return m.pass; });
    return rep;
}

}  // namespace osc
