#include "osc/bumps.hpp"

#include <cmath>
#include <stdexcept>

namespace osc {

namespace {

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = psi(x);
    const double b = psi(1.0 - x);
    return a / (a + b);
}

double beta0(double s, double glue_width)
{
    const double g = glue_width;
    const double r = std::abs(s);
    const double lo = 1.5 - 0.5 * g;
    const double hi = 1.5 + 0.5 * g;
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    return smooth_step((hi - r) / g);
}

double beta(double s, double glue_width)
{
    return beta0(s, glue_width) - beta0(2.0 * s, glue_width);
}

double beta_tilde(double s, double glue_width)
{
    return beta0(0.5 * s, glue_width) - beta0(4.0 * s, glue_width);
}

double evaluate(const BumpSpec& spec, double s)
{
    switch (spec.kind) {
    case BumpKind::beta0: return beta0(s, spec.glue_width);
    case BumpKind::beta: return beta(s, spec.glue_width);
    case BumpKind::beta_tilde: return beta_tilde(s, spec.glue_width);
    }
    return 0.0;
}

double dyadic_partition_sum(double s, int j_min, int j_max, double glue_width)
{
    if (s == 0.0) throw std::domain_error("dyadic_partition_sum: s = 0");
    double sum = 0.0;
    for (int j = j_min; j <= j_max; ++j) sum += beta(std::ldexp(s, -j), glue_width);
    return sum;
}

void dyadic_window(double s, int& j_min, int& j_max)
{
    if (s == 0.0) throw std::domain_error("dyadic_window: s = 0");
    const int e = std::ilogb(std::abs(s));
    j_min = e - 2;
    j_max = e + 2;
}

double amplitude_a(double t)
{
    const double r = std::abs(t);
    if (r < 0.25) return 0.0;
    const double v = beta(r) / r;
    return t < 0.0 ? -v : v;
}

}  // namespace osc
