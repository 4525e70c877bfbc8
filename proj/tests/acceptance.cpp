#include "osc/bumps.hpp"
#include "osc/decay.hpp"
#include "osc/grid.hpp"
#include "osc/identity_suite.hpp"
#include "osc/multiplier.hpp"
#include "osc/phase_geometry.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace osc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Prints the one-line verdict and returns it.
bool verdict(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("CRITERION %d %s %s  %s\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    return pass;
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void print_series(const LemmaReport& r)
{
    std::printf("  %s\n", summary_line(r).c_str());
    for (const auto& [s, v] : r.series) std::printf("    %g %.4e\n", s, v);
    for (const auto& n : r.notes) std::printf("    note %s\n", n.c_str());
}

std::string slope_text(const LemmaReport& r)
{
    return r.fit ? fmt("slope=%.4f", r.fit->slope) : std::string("slope=nan");
}

bool c1()
{
    const auto t0 = Clock::now();
    const auto rep = run_identity_suite({});
    const double t = seconds_since(t0);
    std::string detail;
    for (const auto& m : rep.metrics) {
        std::printf("  %s max=%.3e tol=%.0e %s\n", m.name.c_str(), m.max_error, m.tolerance, m.pass ? "ok" : "bad");
    }
    detail = fmt("samples=%.0f", rep.samples) + fmt(" runtime=%.2fs", t);
    return verdict(1, "identity_suite", rep.pass && rep.samples == 1000 && t < 10.0, detail);
}

bool c2()
{
    const PhasePoint<double> p{1.0, 3.0, 0.0};
    const double e1 = std::abs(hessian_det(p, Branch::plus) + 1.0 / 36.0);
    const double e2 = std::abs(nikodym_det(p, Branch::plus) + 1.0 / 144.0);
    const double e3 = std::abs(exceptional_curvature(1.0, 1.0) - 16.0 / 9.0);
    const double worst = std::max({e1, e2, e3});
    return verdict(2, "spot_values", worst < 1e-12, fmt("max_error=%.2e", worst));
}

bool c3()
{
    const auto t0 = Clock::now();
    std::vector<int> ns;
    for (int n = 8; n <= 18; ++n) ns.push_back(n);
    const auto rep = verify_stationary_phase(10, 1, ns);
    const double t = seconds_since(t0);
    return verdict(3, "stationary_phase", rep.pass && t < 60.0,
                   fmt("worst_slope=%.4f", rep.worst_slope) + fmt(" runtime=%.1fs", t));
}

bool run_lemmas(int id, const std::string& label, const std::vector<std::string>& names)
{
    bool pass = true;
    std::string detail;
    for (const auto& n : names) {
        const auto r = run_named_lemma(n);
        print_series(r);
        pass = pass && r.pass;
        detail += n + ":" + slope_text(r) + " ";
    }
    return verdict(id, label, pass, detail);
}

bool c6()
{
    const auto r = run_named_lemma("vdc2_ii");
    print_series(r);
    // Tail fit without the first ell, where both roots sit on the falling edge of beta.
    if (r.series.size() >= 4) {
        Series tail(r.series.begin() + 1, r.series.end());
        const double x0 = std::log2(tail.front().first), x1 = std::log2(tail.back().first);
        const double s = (std::log2(tail.back().second) - std::log2(tail.front().second)) / (x1 - x0);
        std::printf("  diagnostic: end-to-end slope over ell=3..5 is %.4f\n", s);
    }
    return verdict(6, "w_localized", r.pass, slope_text(r) + fmt(" threshold=%.1f", r.threshold));
}

bool c8()
{
    const auto r = run_named_lemma("low_kernel");
    print_series(r);
    return verdict(8, "low_frequency_kernel", r.pass, slope_text(r) + " (C1,C2)=(12,0)");
}

bool c10()
{
    double partition = 0.0;
    for (int i = 0; i < 4000; ++i) {
        const double s = std::exp2(-10.0 + 20.0 * i / 3999.0);
        partition = std::max(partition, std::abs(dyadic_partition_sum(s, -12, 12) - 1.0));
        partition = std::max(partition, std::abs(dyadic_partition_sum(-s, -12, 12) - 1.0));
    }

    double vieta = 0.0, crit = 0.0;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const auto sp = sample_phase_point(rng);
        vieta = std::max(vieta, vieta_residual(sp.p));
        crit = std::max(crit, criticality_residual(sp.p));
    }

    GridField f(128, 64.0);
    std::mt19937 frng(2);
    std::normal_distribution<double> N(0.0, 1.0);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data(i) = {N(frng), N(frng)};
    const double planch = (transform_inverse(transform_forward(f)).data - f.data).cwiseAbs().maxCoeff();

    double idem = 0.0;
    for (int axis : {1, 2})
        for (int m = -3; m <= 0; ++m) {
            const GridField p = lp_project(f, axis, m, ProjectionMode::sharp);
            idem = std::max(idem, (lp_project(p, axis, m, ProjectionMode::tilde).data - p.data).cwiseAbs().maxCoeff());
        }

    const double resc = rescaling_check(gaussian_field(512, 64.0, 4.0), 1, 1, -4, -4, 12.0);

    GridField g(32, 16.0);
    for (Eigen::Index i = 0; i < g.data.size(); ++i) g.data(i) = {N(frng), N(frng)};
    MultiplierQuery q;
    q.n = 3;
    q.w = 2.0;
    q.k1 = 0;
    q.k2 = 0;
    const GridField a = apply_multiplier_operator(g, q);
    const GridField b = circular_convolve_direct(kernel_of(q, g).field, g);
    const double conv = (a.data - b.data).cwiseAbs().maxCoeff() / max_abs(a);

    std::printf("  partition=%.2e vieta=%.2e criticality=%.2e plancherel=%.2e idempotence=%.2e\n", partition, vieta,
                crit, planch, idem);
    std::printf("  rescaling(1,1)=%.2e convolution=%.2e\n", resc, conv);
    const bool pass = partition < 1e-12 && vieta < 1e-9 && crit < 1e-9 && planch < 1e-12 && idem < 1e-12 &&
                      resc < 1e-2 && conv < 1e-9;
    return verdict(10, "structural", pass, fmt("rescaling=%.2e", resc) + fmt(" convolution=%.2e", conv));
}

bool c11()
{
    MaximalOptions opt;
    opt.route = RescalingRoute::spatial;
    const std::vector<double> radii{1, 2, 4, 8, 16, 32};
    bool pass = true;
    double worst = 0.0;
    for (double sigma : {1.0, 2.0}) {
        const GridField f = gaussian_field(256, 128.0, sigma);
        const auto d = domination_report(f, 1, {-2, -1, 0}, 9, radii, opt);
        std::printf("  sigma=%g ratio=%.4f refined=%.4f change=%.2e\n", sigma, d.max_ratio_coarse, d.max_ratio_fine,
                    d.relative_change);
        pass = pass && d.pass;
        worst = std::max(worst, d.relative_change);
    }
    return verdict(11, "domination", pass, fmt("max_relative_change=%.2e", worst));
}

bool c12()
{
    const GridField f = gaussian_field(256, 128.0, 8.0);
    const auto s = maximal_Cl_experiment(f, {1, 2, 3, 4, 5, 6}, {-2, -1, 0}, 9, 2.0);
    for (std::size_t i = 0; i < s.ell.size(); ++i) std::printf("    %d %.4e\n", s.ell[i], s.norms[i]);
    const bool pass = s.fit && s.fit->slope < 0.0;
    return verdict(12, "maximal_series", pass,
                   (s.fit ? fmt("slope=%.4f", s.fit->slope) : std::string("slope=nan")) + " (exploratory)");
}

}  // namespace

int main(int argc, char** argv)
{
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    CLI::App app{"acceptance criteria"};
    int criterion = 0;
    app.add_option("--criterion", criterion, "criterion to run (1-12); all when omitted")->check(CLI::Range(1, 12));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<bool()>> table{
        c1,
        c2,
        c3,
        [] { return run_lemmas(4, "van_der_corput", {"vdc1", "vdc1_eta"}); },
        [] { return run_lemmas(5, "non_stationary", {"nonstationary_G1", "nonstationary_G2"}); },
        c6,
        [] { return run_lemmas(7, "kernel_l1", {"kernel_l1", "localized_kernel_l1"}); },
        c8,
        [] { return run_lemmas(9, "sublevel", {"sublevel_cusp", "sublevel_flat"}); },
        c10,
        c11,
        c12,
    };

    bool all = true;
    for (int id = 1; id <= 12; ++id) {
        if (criterion != 0 && id != criterion) continue;
        const bool ok = table[id - 1]();
        if (id != 12) all = all && ok;  // the maximal series is reported, not gating
    }
    return all ? 0 : 1;
}
