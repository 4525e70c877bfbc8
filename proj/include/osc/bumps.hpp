#pragma once

namespace osc {

enum class BumpKind { beta0, beta, beta_tilde };

struct BumpSpec {
    BumpKind kind = BumpKind::beta0;
    int smooth_order = 6;     // advisory, the exp glue is C^inf
    double glue_width = 1.0;  // width of the transition zone, in (0,1]
};

// Monotone C^inf step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

// Even cutoff, 1 on [-1,1], 0 outside [-2,2]. The transition is centred at
// |s| = 3/2 and has width glue_width.
double beta0(double s, double glue_width = 1.0);

// beta0(s) - beta0(2s), supported in 1/2 <= |s| <= 2.
double beta(double s, double glue_width = 1.0);

// beta0(s/2) - beta0(4s): 1 on 1/2 <= |s| <= 2, supported in 1/4 <= |s| <= 4.
double beta_tilde(double s, double glue_width = 1.0);

double evaluate(const BumpSpec& spec, double s);

// sum_{j_min <= j <= j_max} beta(2^-j s). Throws std::domain_error for s = 0.
double dyadic_partition_sum(double s, int j_min, int j_max, double glue_width = 1.0);

// Smallest window [j_min, j_max] covering every j with beta(2^-j s) != 0.
void dyadic_window(double s, int& j_min, int& j_max);

// beta(t)/t, exactly odd; 0 for |t| < 1/4 without dividing.
double amplitude_a(double t);

}  // namespace osc
