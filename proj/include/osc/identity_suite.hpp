#pragma once

#include "osc/phase_geometry.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace osc {

struct SampledPoint {
    PhasePoint<double> p;
    Branch branch = Branch::plus;
    double s = 1.0;        // curvature abscissa
    double w_scaled = 1.0;  // curvature weight
};

/// Random point built from its roots: w in [1/2, 8], 1/4 <= |t_b| <= 4, the other
/// root in [-4, 4]; rejected unless Delta >= 0.1 and |xi| >= 0.05.
SampledPoint sample_phase_point(std::mt19937_64& rng);

/// max(|t+ + t- - 2 eta / 3w|, |t+ t- + xi / 3w|) relative to the root scale.
double vieta_residual(const PhasePoint<double>& p);

/// max over both roots of |phi'(t)| relative to the size of its terms.
double criticality_residual(const PhasePoint<double>& p);

struct IdentityOptions {
    int samples = 1000;
    std::uint64_t seed = 1;
    double step = 1e-5;             // plain central differences
    double richardson_step = 1e-3;  // two Richardson levels
    double tol = 1e-3;
    double richardson_tol = 1e-6;
    double flat_tol = 1e-6;
    double algebra_tol = 1e-9;
};

struct IdentityMetric {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentitySample {
    SampledPoint point;
    double hessian = 0.0, nikodym = 0.0, curvature = 0.0;  // closed forms
    double hessian_err = 0.0, hessian_err_r = 0.0;          // relative, plain and Richardson
    double nikodym_err = 0.0, nikodym_err_r = 0.0;
    double curvature_err = 0.0, curvature_err_r = 0.0;
    double flat = 0.0, vieta = 0.0, criticality = 0.0;
};

struct IdentityReport {
    std::vector<IdentityMetric> metrics;
    std::vector<IdentitySample> rows;
    int samples = 0;
    bool pass = false;
};

/// Closed-form determinants and curvature against finite-difference oracles
/// evaluated in 50-digit arithmetic, plus the root identities in double.
IdentityReport run_identity_suite(const IdentityOptions& opt = {});

}  // namespace osc
