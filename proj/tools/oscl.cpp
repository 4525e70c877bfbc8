#include "osc/bumps.hpp"
#include "osc/decay.hpp"
#include "osc/grid.hpp"
#include "osc/identity_suite.hpp"
#include "osc/io.hpp"
#include "osc/multiplier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace osc;

constexpr int exit_ok = 0, exit_fail = 1, exit_usage = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

// "a:b" inclusive integer range or "a,b,c" list.
std::vector<int> int_list(const std::string& s)
{
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        const auto p = split(s, ':');
        if (p.size() != 2) throw UsageError("bad range '" + s + "'");
        const int a = static_cast<int>(to_double(p[0])), b = static_cast<int>(to_double(p[1]));
        if (b < a) throw UsageError("empty range '" + s + "'");
        for (int i = a; i <= b; ++i) out.push_back(i);
        return out;
    }
    for (const auto& x : split(s, ',')) out.push_back(static_cast<int>(to_double(x)));
    return out;
}

std::vector<double> double_list(const std::string& s)
{
    std::vector<double> out;
    for (const auto& x : split(s, ',')) out.push_back(to_double(x));
    return out;
}

// "lo:hi" as `points` geometric values, or a comma list.
std::vector<double> geometric_sweep(const std::string& s, int points)
{
    if (s.find(':') == std::string::npos) return double_list(s);
    const auto p = split(s, ':');
    if (p.size() != 2) throw UsageError("bad sweep '" + s + "'");
    const double lo = to_double(p[0]), hi = to_double(p[1]);
    if (!(lo > 0.0 && hi > lo) || points < 2) throw UsageError("sweep needs 0 < lo < hi and at least 2 points");
    std::vector<double> out;
    for (int i = 0; i < points; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return out;
}

struct Common {
    std::string config_file;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> N, C1, C2;
    std::optional<double> L, C_star, kappa;
    std::vector<std::string> tolerances;  // name=value

    RunConfig resolve() const
    {
        RunConfig cfg = config_file.empty() ? RunConfig{} : load_config(config_file);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (seed) cfg.seed = *seed;
        if (N) cfg.N = *N;
        if (L) cfg.L = *L;
        if (C1) cfg.C1 = *C1;
        if (C2) cfg.C2 = *C2;
        if (C_star) cfg.C_star = *C_star;
        if (kappa) cfg.kappa = *kappa;
        for (const auto& t : tolerances) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + t + "'");
            cfg.tolerances[t.substr(0, eq)] = to_double(t.substr(eq + 1));
        }
        cfg.validate();
        return cfg;
    }
};

std::filesystem::path artifact(const RunConfig& cfg, const std::string& name)
{
    return cfg.resolved_output_dir() / name;
}

void write_series(const RunConfig& cfg, const LemmaReport& r, const std::string& stem)
{
    CsvWriter csv(artifact(cfg, stem + ".csv"), cfg, {"scale", "value"}, {{"lemma", r.lemma}});
    for (auto [s, v] : r.series) csv.row(std::vector<double>{s, v});
    if (!r.series.empty()) {
        PlotStyle style;
        style.title = r.lemma;
        emit_plot(r.series, r.fit, style, artifact(cfg, stem + ".svg"));
    }
}

int report(const LemmaReport& r)
{
    for (const auto& n : r.notes) std::cout << "  note: " << n << '\n';
    std::cout << summary_line(r) << '\n';
    return r.pass ? exit_ok : exit_fail;
}

int cmd_verify_identities(const RunConfig& cfg, int samples)
{
    IdentityOptions opt;
    opt.samples = samples;
    opt.seed = cfg.seed;
    opt.tol = cfg.tolerance("fd", opt.tol);
    opt.richardson_tol = cfg.tolerance("fd_richardson", opt.richardson_tol);
    opt.flat_tol = cfg.tolerance("flat", opt.flat_tol);
    opt.algebra_tol = cfg.tolerance("algebra", opt.algebra_tol);
    const IdentityReport rep = run_identity_suite(opt);
    CsvWriter csv(artifact(cfg, "identities.csv"), cfg,
                  {"w", "xi", "eta", "branch", "s", "w_scaled", "hessian_det", "nikodym_det", "curvature",
                   "hessian_err", "hessian_err_richardson", "nikodym_err", "nikodym_err_richardson", "curvature_err",
                   "curvature_err_richardson", "flat_hessian", "vieta", "criticality"});
    for (const auto& r : rep.rows) {
        const auto& p = r.point;
        csv.row(std::vector<double>{p.p.w, p.p.xi, p.p.eta, static_cast<double>(sign_of(p.branch)), p.s, p.w_scaled,
                                    r.hessian, r.nikodym, r.curvature, r.hessian_err, r.hessian_err_r, r.nikodym_err,
                                    r.nikodym_err_r, r.curvature_err, r.curvature_err_r, r.flat, r.vieta,
                                    r.criticality});
    }
    for (const auto& m : rep.metrics)
        std::printf("IDENTITY %s max_error=%.3e tolerance=%.1e %s\n", m.name.c_str(), m.max_error, m.tolerance,
                    m.pass ? "PASS" : "FAIL");
    return rep.pass ? exit_ok : exit_fail;
}

struct QueryFlags {
    int n = 0;
    double w = 1.0, xi = 0.0, eta = 0.0;
    std::optional<int> k1, k2, ell;
    std::optional<double> kappa;
    bool k1_leq = false, k2_leq = false;

    void add(CLI::App* app, bool with_point)
    {
        app->add_option("--n", n, "scale n")->check(CLI::NonNegativeNumber);
        app->add_option("--w", w, "w");
        if (with_point) {
            app->add_option("--xi", xi, "xi");
            app->add_option("--eta", eta, "eta");
        }
        app->add_option("--k1", k1, "xi cutoff scale");
        app->add_option("--k2", k2, "eta cutoff scale");
        app->add_flag("--k1-leq", k1_leq, "use beta0 for the xi cutoff");
        app->add_flag("--k2-leq", k2_leq, "use beta0 for the eta cutoff");
        app->add_option("--ell", ell, "discriminant localization ell");
        app->add_option("--kappa-loc", kappa, "discriminant localization kappa");
    }
    MultiplierQuery query() const
    {
        MultiplierQuery q;
        q.n = n;
        q.w = w;
        q.xi = xi;
        q.eta = eta;
        q.k1 = k1;
        q.k2 = k2;
        q.k1_mode = k1_leq ? CutoffMode::leq : CutoffMode::sharp;
        q.k2_mode = k2_leq ? CutoffMode::leq : CutoffMode::sharp;
        q.ell = ell;
        q.kappa = kappa;
        if ((ell || kappa) && !k2) throw UsageError("--ell and --kappa-loc need --k2");
        if (ell && kappa) throw UsageError("--ell and --kappa-loc are exclusive");
        return q;
    }
};

int cmd_eval_multiplier(const RunConfig& cfg, const QueryFlags& f)
{
    MultiplierOptions opt;
    opt.quad.abs_tol = cfg.tolerance("quadrature", opt.quad.abs_tol);
    const MultiplierQuery q = f.query();
    const auto r = multiplier_localized(q, opt);
    nlohmann::ordered_json j;
    j["n"] = q.n;
    j["w"] = q.w;
    j["xi"] = q.xi;
    j["eta"] = q.eta;
    j["re"] = r.value.real();
    j["im"] = r.value.imag();
    j["abs"] = std::abs(r.value);
    j["abs_error_estimate"] = r.abs_error_estimate;
    j["subdivisions"] = r.subdivisions;
    j["converged"] = r.converged;
    std::cout << j.dump() << '\n';
    return r.converged ? exit_ok : exit_fail;
}

int cmd_apply_operator(const RunConfig& cfg, const QueryFlags& f, const std::string& in, std::optional<double> sigma,
                       const std::string& out, const std::string& slice)
{
    GridField g;
    if (!in.empty()) g = read_field(in);
    else if (sigma) g = gaussian_field(cfg.N, cfg.L, *sigma);
    else throw UsageError("apply-operator needs --in or --gaussian");
    MultiplierOptions opt;
    opt.quad.abs_tol = cfg.tolerance("quadrature", opt.quad.abs_tol);
    const GridField r = apply_multiplier_operator(g, f.query(), opt);
    const std::filesystem::path out_path = out.empty() ? artifact(cfg, "operator.oplb") : std::filesystem::path(out);
    write_field(r, out_path);
    if (!slice.empty()) {
        CsvWriter csv(slice, cfg, {"x", "re", "im", "abs"}, {{"slice", "y=0"}});
        const int k = r.ny / 2;
        for (int i = 0; i < r.nx; ++i)
            csv.row(std::vector<double>{r.x(i), r.data(i, k).real(), r.data(i, k).imag(), std::abs(r.data(i, k))});
    }
    std::printf("OPERATOR N=%d L=%g l2_in=%.6e l2_out=%.6e file=%s\n", r.nx, r.Lx, l2_norm(g), l2_norm(r),
                out_path.string().c_str());
    return exit_ok;
}

struct DecayFlags {
    std::string axis = "n", values, statistic = "abs_value";
    double p = 2.0;
    int w_points = 65;
    double w_nodes_per_period = 0.0;
    std::optional<double> threshold, xi_shift;
    std::string mu = "0,0,1";
    long samples = 1'000'000;
};

int cmd_decay_fit(const RunConfig& cfg, const QueryFlags& qf, const DecayFlags& d)
{
    SamplePlan plan;
    if (d.axis == "n") plan.scale_axis = ScaleAxis::n;
    else if (d.axis == "ell") plan.scale_axis = ScaleAxis::ell;
    else if (d.axis == "eta") plan.scale_axis = ScaleAxis::eta;
    else if (d.axis == "sigma") plan.scale_axis = ScaleAxis::sigma;
    else throw UsageError("unknown axis '" + d.axis + "'");
    if (d.statistic == "abs_value") plan.statistic = Statistic::abs_value;
    else if (d.statistic == "sup_over_set") plan.statistic = Statistic::sup_over_set;
    else if (d.statistic == "w_integral_p") plan.statistic = Statistic::w_integral_p;
    else throw UsageError("unknown statistic '" + d.statistic + "'");
    if (d.values.empty()) throw UsageError("decay-fit needs --values");
    plan.scale_values = plan.scale_axis == ScaleAxis::n || plan.scale_axis == ScaleAxis::ell
                            ? [&] {
                                  std::vector<double> v;
                                  for (int i : int_list(d.values)) v.push_back(i);
                                  return v;
                              }()
                            : double_list(d.values);
    plan.frozen = qf.query();
    plan.options.quad.abs_tol = cfg.tolerance("quadrature", plan.options.quad.abs_tol);
    plan.p = d.p;
    plan.w_quadrature_points = d.w_points;
    plan.w_nodes_per_period = d.w_nodes_per_period;
    plan.xi_shift = d.xi_shift;
    const auto mu = double_list(d.mu);
    if (mu.size() != 3) throw UsageError("--mu expects three values");
    plan.mu = {mu[0], mu[1], mu[2]};
    plan.sublevel_samples = d.samples;
    const PlanResult res = run_plan(plan);
    LemmaReport r;
    r.lemma = "decay-fit";
    r.series = res.series;
    r.fit = res.fit;
    r.notes = res.warnings;
    if (res.degenerate) r.notes.push_back("degenerate series");
    r.threshold = d.threshold.value_or(INFINITY);
    r.pass = r.fit && r.fit->slope <= r.threshold;
    write_series(cfg, r, "decay_fit");
    return report(r);
}

int cmd_verify(const RunConfig& cfg, const std::string& lemma)
{
    LemmaSettings st;
    st.C1 = cfg.C1;
    st.C2 = cfg.C2;
    st.kappa = cfg.kappa;
    st.seed = cfg.seed;
    const auto& names = lemma_names();
    if (std::find(names.begin(), names.end(), lemma) == names.end()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        throw UsageError("unknown lemma '" + lemma + "'; known: " + all);
    }
    const LemmaReport r = run_named_lemma(lemma, st);
    write_series(cfg, r, "lemma_" + lemma);
    return report(r);
}

int cmd_sublevel(const RunConfig& cfg, const std::string& mu_text, const std::string& sweep, int points, long samples,
                 std::optional<double> expected, double tol)
{
    const auto mu = double_list(mu_text);
    if (mu.size() != 3) throw UsageError("--mu expects three values");
    const auto sigmas = geometric_sweep(sweep, points);
    LemmaReport r = verify_sublevel({mu[0], mu[1], mu[2]}, sigmas, expected.value_or(0.0), tol, samples);
    if (!expected) {
        r.threshold = NAN;
        r.pass = r.fit.has_value();
    }
    CsvWriter csv(artifact(cfg, "sublevel.csv"), cfg, {"sigma", "measure"}, {{"mu", mu_text}});
    for (auto [s, v] : r.series) csv.row(std::vector<double>{s, v});
    PlotStyle style;
    style.title = "sublevel measure, mu = " + mu_text;
    style.x_label = "sigma";
    style.y_label = "measure";
    emit_plot(r.series, r.fit, style, artifact(cfg, "sublevel.svg"));
    return report(r);
}

struct MaximalFlags {
    std::string ell = "1:6", window = "-2,-1,0";
    int v_points = 9;
    double p = 2.0, sigma = 8.0;
    std::string route = "fourier";
    bool domination = false;
    std::string radii = "1,2,4,8,16,32";
};

int cmd_maximal(const RunConfig& cfg, const MaximalFlags& m)
{
    MaximalOptions opt;
    if (m.route == "fourier") opt.route = RescalingRoute::fourier;
    else if (m.route == "spatial") opt.route = RescalingRoute::spatial;
    else throw UsageError("--route must be fourier or spatial");
    const GridField f = gaussian_field(cfg.N, cfg.L, m.sigma);
    const auto window = int_list(m.window);
    const auto ells = int_list(m.ell);
    if (m.domination) {
        int code = exit_ok;
        CsvWriter csv(artifact(cfg, "domination.csv"), cfg, {"ell", "max_ratio_coarse", "max_ratio_fine", "relative_change"},
                      {{"sigma", format_number(m.sigma)}});
        for (int l : ells) {
            const auto d = domination_report(f, l, window, m.v_points, double_list(m.radii), opt);
            csv.row(std::vector<double>{static_cast<double>(l), d.max_ratio_coarse, d.max_ratio_fine, d.relative_change});
            std::printf("DOMINATION ell=%d max_ratio=%.6e refined=%.6e change=%.3e %s\n", l, d.max_ratio_coarse,
                        d.max_ratio_fine, d.relative_change, d.pass ? "PASS" : "FAIL");
            if (!d.pass) code = exit_fail;
        }
        return code;
    }
    const auto s = maximal_Cl_experiment(f, ells, window, m.v_points, m.p, opt);
    LemmaReport r;
    r.lemma = "maximal_Cl";
    r.threshold = 0.0;
    for (std::size_t i = 0; i < s.ell.size(); ++i) r.series.emplace_back(std::exp2(s.ell[i]), s.norms[i]);
    r.fit = s.fit;
    r.pass = s.fit && s.fit->slope < 0.0;
    write_series(cfg, r, "maximal_Cl");
    return report(r);
}

int cmd_dump_bumps(const RunConfig& cfg, int points, double lo, double hi, double glue)
{
    if (points < 2 || !(hi > lo)) throw UsageError("dump-bumps needs --points >= 2 and lo < hi");
    CsvWriter csv(artifact(cfg, "bumps.csv"), cfg, {"s", "beta0", "beta", "beta_tilde"},
                  {{"glue_width", format_number(glue)}});
    for (int i = 0; i < points; ++i) {
        const double s = lo + (hi - lo) * i / (points - 1);
        csv.row(std::vector<double>{s, beta0(s, glue), beta(s, glue), beta_tilde(s, glue)});
    }
    std::printf("BUMPS points=%d file=%s\n", points, artifact(cfg, "bumps.csv").string().c_str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"oscl: oscillatory multiplier laboratory"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config_file, "ini config file")->check(CLI::ExistingFile);
    app.add_option("--output-dir", common.output_dir, "artifact directory (default $OSC_OUTPUT_DIR or ./out)");
    app.add_option("--seed", common.seed, "random seed");
    app.add_option("--N", common.N, "grid points per side");
    app.add_option("--L", common.L, "grid box size");
    app.add_option("--C1", common.C1, "surrogate constant C1");
    app.add_option("--C2", common.C2, "surrogate constant C2");
    app.add_option("--C-star", common.C_star, "amplitude class constant");
    app.add_option("--kappa", common.kappa, "localization exponent kappa");
    app.add_option("--tol", common.tolerances, "tolerance override name=value")->take_all();

    auto* ident = app.add_subcommand("verify-identities", "closed forms against finite-difference oracles");
    int samples = 1000;
    ident->add_option("--samples", samples, "random points")->check(CLI::PositiveNumber);

    auto* evalm = app.add_subcommand("eval-multiplier", "one multiplier value as a JSON record");
    QueryFlags eq;
    eq.add(evalm, true);

    auto* apply = app.add_subcommand("apply-operator", "apply a multiplier to a grid field");
    QueryFlags aq;
    aq.add(apply, false);
    std::string in_file, out_file, slice_file;
    std::optional<double> gauss;
    apply->add_option("--in", in_file, "input grid file")->check(CLI::ExistingFile);
    apply->add_option("--gaussian", gauss, "use a centred Gaussian of this width on the config grid");
    apply->add_option("--out", out_file, "output grid file");
    apply->add_option("--slice-csv", slice_file, "CSV of the y = 0 slice");

    auto* decay = app.add_subcommand("decay-fit", "run a sample plan and fit its log-log slope");
    QueryFlags dq;
    dq.add(decay, true);
    DecayFlags df;
    decay->add_option("--axis", df.axis, "n, ell, eta or sigma");
    decay->add_option("--values", df.values, "scale values: a:b or a,b,c")->required();
    decay->add_option("--statistic", df.statistic, "abs_value, sup_over_set or w_integral_p");
    decay->add_option("--p", df.p, "exponent of w_integral_p");
    decay->add_option("--w-points", df.w_points, "w quadrature points");
    decay->add_option("--w-nodes-per-period", df.w_nodes_per_period, "extra w nodes per oscillation period");
    decay->add_option("--xi-shift", df.xi_shift, "eta axis: xi = shift - 2 eta");
    decay->add_option("--threshold", df.threshold, "PASS when slope <= threshold");
    decay->add_option("--mu", df.mu, "sigma axis: cubic coefficients");
    decay->add_option("--samples", df.samples, "sigma axis: sublevel cells");

    auto* verify = app.add_subcommand("verify", "run a named decay check");
    std::string lemma;
    verify->add_option("--lemma", lemma, "check name")->required();

    auto* sub = app.add_subcommand("sublevel", "sublevel-set measure against sigma");
    std::string mu = "3,-3,1", sweep = "1e-6:1e-2";
    int sweep_points = 5;
    long sub_samples = 1'000'000;
    std::optional<double> expected;
    double sub_tol = 0.02;
    sub->add_option("--mu", mu, "cubic coefficients mu1,mu2,mu3");
    sub->add_option("--sigma-sweep", sweep, "lo:hi (geometric) or a list");
    sub->add_option("--points", sweep_points, "sweep points");
    sub->add_option("--samples", sub_samples, "cells on (-1, 1)");
    sub->add_option("--expected", expected, "expected slope; PASS within --slope-tol");
    sub->add_option("--slope-tol", sub_tol, "slope tolerance");

    auto* maxi = app.add_subcommand("maximal-experiment", "maximal Hilbert series or domination ratios");
    MaximalFlags mf;
    maxi->add_option("--ell", mf.ell, "ell values");
    maxi->add_option("--j-window", mf.window, "j offsets relative to ell");
    maxi->add_option("--v-points", mf.v_points, "v grid points per dyadic block");
    maxi->add_option("--p", mf.p, "norm exponent");
    maxi->add_option("--sigma", mf.sigma, "Gaussian width");
    maxi->add_option("--route", mf.route, "fourier or spatial");
    maxi->add_flag("--domination", mf.domination, "report domination ratios instead of norms");
    maxi->add_option("--radii", mf.radii, "parabolic maximal radii");

    auto* bumps = app.add_subcommand("dump-bumps", "tabulate the cutoffs");
    int bump_points = 401;
    double bump_lo = 0.0, bump_hi = 4.0, glue = 1.0;
    bumps->add_option("--points", bump_points, "rows");
    bumps->add_option("--from", bump_lo, "first s");
    bumps->add_option("--to", bump_hi, "last s");
    bumps->add_option("--glue-width", glue, "glue width in (0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const RunConfig cfg = common.resolve();
        if (*ident) return cmd_verify_identities(cfg, samples);
        if (*evalm) return cmd_eval_multiplier(cfg, eq);
        if (*apply) return cmd_apply_operator(cfg, aq, in_file, gauss, out_file, slice_file);
        if (*decay) return cmd_decay_fit(cfg, dq, df);
        if (*verify) return cmd_verify(cfg, lemma);
        if (*sub) return cmd_sublevel(cfg, mu, sweep, sweep_points, sub_samples, expected, sub_tol);
        if (*maxi) return cmd_maximal(cfg, mf);
        if (*bumps) return cmd_dump_bumps(cfg, bump_points, bump_lo, bump_hi, glue);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n' << app.help();
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fail;
    }
    return exit_usage;
}
