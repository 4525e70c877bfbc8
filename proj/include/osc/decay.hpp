#pragma once

#include "osc/grid.hpp"
#include "osc/multiplier.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osc {

enum class RegimeLabel { G1, G2, Bdiag, Low };
const char* to_string(RegimeLabel r);

/// G1: k1 > max(k2, 0) + 8. G2: k2 > max(k1, 0) + 8. Bdiag: the remaining pairs of
/// (-C1, inf) x (-C2, inf). Low: pairs with k1 <= -C1 or k2 <= -C2.
/// Throws std::invalid_argument unless C1 = 2 C2 + 12.
RegimeLabel classify_regime(int k1, int k2, int C1, int C2);

/// Whether (k1, k2) lies in the diagonal band |k1 - k2| <= max(C1, C2) + 16,
/// k1 > -C1, k2 > -C2 - 8.
bool in_diagonal_band(int k1, int k2, int C1, int C2);

struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_residual = 0.0;
    int points = 0;  // positive values used
    int zeros = 0;   // values dropped as nonpositive
};

using Series = std::vector<std::pair<double, double>>;  // (scale, value)

/// Ordinary least squares of log2 value against log2 scale. Needs at least four
/// positive values; nonpositive values are counted and skipped.
DecayFit fit_decay(const Series& points);

enum class ScaleAxis { n, ell, sigma, eta };
enum class Statistic {
    abs_value,     // |m| at the frozen query
    sup_over_set,  // max |m| over sup_points, or over the w nodes when sup_points is empty
    w_integral_p,  // int |m|^p dw over the w range (no p-th root)
    grid_norm_p,   // L^p grid norm of the operator applied to field
};
const char* to_string(ScaleAxis a);
const char* to_string(Statistic s);

struct SamplePlan {
    ScaleAxis scale_axis = ScaleAxis::n;
    std::vector<double> scale_values;
    MultiplierQuery frozen;
    MultiplierOptions options;
    Statistic statistic = Statistic::abs_value;
    double p = 2.0;
    int w_quadrature_points = 65;
    // Nodes per period of the w-oscillation added on top of w_quadrature_points;
    // 0 keeps the fixed count.
    double w_nodes_per_period = 0.0;
    double w_lo = 1.0, w_hi = 8.0;
    std::vector<std::array<double, 3>> sup_points;  // (w, xi, eta)
    std::array<double, 3> mu{0.0, 0.0, 1.0};        // sigma axis: sublevel cubic
    long sublevel_samples = 1'000'000;
    std::shared_ptr<const GridField> field;         // grid_norm_p
    std::optional<double> xi_shift;                 // eta axis: xi = xi_shift - 2 eta
};

struct PlanResult {
    Series series;
    std::optional<DecayFit> fit;
    bool degenerate = false;  // every value zero or fewer than four positive values
    std::vector<std::string> warnings;
};

/// Throws std::invalid_argument for invalid plans.
void validate_plan(const SamplePlan& plan);
PlanResult run_plan(const SamplePlan& plan);

/// Scale coordinate used for fitting: 2^v on the n and ell axes, v otherwise.
double scale_coordinate(ScaleAxis axis, double v);

struct LemmaReport {
    std::string lemma;
    Series series;
    std::optional<DecayFit> fit;
    double threshold = 0.0;
    bool pass = false;
    std::vector<std::string> notes;
};

/// LEMMA <name> slope=<s> threshold=<t> PASS|FAIL
std::string summary_line(const LemmaReport& r);

struct NonstationaryOptions {
    double abs_tol = 1e-15;
};

/// Samples |m_n^w| on the support of the (k1, k2) block and fits the n-slope.
/// Values below the quadrature resolution are reported as unresolved and do not
/// enter the fit. PASS needs slope <= -3 on at least four resolved values.
LemmaReport verify_nonstationary(int k1, int k2, int C1, int C2, const std::vector<int>& n_values,
                                 const NonstationaryOptions& opt = {});

enum class VdcKind { vdc1, vdc2_i, vdc2_ii, mult_dec_ell };
const char* to_string(VdcKind k);

struct VdcParams {
    ScaleAxis axis = ScaleAxis::n;
    std::vector<double> scale_values;
    int n = 12;
    double w = 1.0;
    double xi = 0.0, eta = 256.0;
    int k1 = 0, k2 = 0;
    int ell = 2;
    double kappa = 0.05;
    int C1 = 12, C2 = 0;
    // vdc1 on the eta axis: xi follows eta as xi = xi_shift - 2 eta so the critical
    // point sits at t = 1 when xi_shift = 3 w. Unused when absent.
    std::optional<double> xi_shift;
    int w_quadrature_points = 65;
    double w_nodes_per_period = 8.0;
};

/// Runs the matching sample plan and checks the fitted slope against the lemma
/// exponent plus 0.1 (times p for the squared w-integral statistic).
LemmaReport verify_vdc(VdcKind kind, const VdcParams& params);

/// Slope of the relative error of stationary_phase_approx against the isolated
/// root quadrature over n, per sampled point.
struct StationaryPhaseReport {
    std::vector<LemmaReport> points;
    double worst_slope = 0.0;
    bool pass = false;
};
StationaryPhaseReport verify_stationary_phase(int count, std::uint64_t seed, const std::vector<int>& n_values,
                                              double threshold = -0.8);

/// Low-frequency kernel sup 2^(3 ell) sup |K| over ell, sup over the w grid.
LemmaReport verify_low_kernel(const std::vector<int>& ell_values, const std::vector<double>& w_values, int C1,
                              int C2, double threshold = -3.0);

/// Kernel L1 of m_n^w beta(2^-k1 xi) beta(2^-k2 eta) over n by row synthesis;
/// PASS when |slope| <= 0.1.
LemmaReport verify_kernel_flatness(const std::vector<int>& n_values, int k1, int k2, double w);

/// Kernel L1 of the Delta-localized pieces at n = 3 ell by FFT on grids sized to
/// the kernel; PASS when the ell-slope is <= 2.2.
LemmaReport verify_localized_kernels(const std::vector<int>& ell_values, int k1, int k2, double w);

/// Sublevel measure against sigma; PASS when |slope - expected| <= tol.
LemmaReport verify_sublevel(const std::array<double, 3>& mu, const std::vector<double>& sigmas, double expected,
                            double tol = 0.02, long samples = 1'000'000);

struct LemmaSettings {
    int C1 = 12, C2 = 0;
    double kappa = 0.05;
    std::uint64_t seed = 1;
};

/// Names accepted by run_named_lemma: vdc1, vdc1_eta, vdc2_i, vdc2_ii,
/// mult_dec_ell, nonstationary_G1, nonstationary_G2, stationary_phase, kernel_l1,
/// localized_kernel_l1, low_kernel, sublevel_cusp, sublevel_flat.
const std::vector<std::string>& lemma_names();

/// Runs one named check with its standard parameters. Throws
/// std::invalid_argument for an unknown name.
LemmaReport run_named_lemma(const std::string& name, const LemmaSettings& settings = {});

/// Geometric grid of `points` values over [2^(3j), 2^(3(j+1))].
std::vector<double> v_grid(int j, int points);

struct MaximalSeries {
    std::vector<int> ell;
    std::vector<double> norms;
    std::optional<DecayFit> fit;
};

/// For each ell, the L^p norm of max over j in the window and v in the v-grid of
/// |H^v_{-j+ell} f|. On the Fourier route H^v_m is applied through its symbol and
/// coefficients of f below skip_below relative are dropped. A window relative to
/// ell keeps the parabola offsets inside the box.
struct MaximalOptions {
    bool window_relative_to_ell = true;  // j ranges over ell + j_window
    double skip_below = 1e-13;
    RescalingRoute route = RescalingRoute::fourier;  // spatial: parabola_convolve with hilbert_profile
    int nodes_per_side = 0;                          // spatial route; 0 picks from the phase
};
MaximalSeries maximal_Cl_experiment(const GridField& f, const std::vector<int>& ell_values,
                                    const std::vector<int>& j_window, int v_points, double p,
                                    const MaximalOptions& opt = {});

/// sup over (j, v) of |H^v_{-j+ell} f| with the same conventions.
GridField linearized_sup(const GridField& f, int ell, const std::vector<int>& j_window, int v_points,
                         const MaximalOptions& opt = {});

struct DominationReport {
    double max_ratio_coarse = 0.0;
    double max_ratio_fine = 0.0;
    double relative_change = 0.0;
    bool pass = false;
};

/// Ratio field sup |H^v f| / (M_par f + 1e-30) at v_points and 2 v_points - 1
/// (a nested refinement); PASS when both maxima are finite and agree within 5%.
DominationReport domination_report(const GridField& f, int ell, const std::vector<int>& j_window, int v_points,
                                   const std::vector<double>& radii, const MaximalOptions& opt = {});

}  // namespace osc
