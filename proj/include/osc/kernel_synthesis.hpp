#pragma once

#include "osc/quadrature.hpp"

#include <vector>

namespace osc {

/// Inverse 1-D transform of a dyadic cutoff, (1/2 pi) int cut(xi) exp(i u xi) dxi,
/// tabulated once and read by cubic interpolation. Zero past |u| = band.
class CutoffKernel {
public:
    enum class Kind { sharp, leq };  // beta or beta0
    CutoffKernel(Kind kind, double band);
    double operator()(double u) const;
    double band() const { return band_; }

private:
    double band_, step_;
    std::vector<double> table_;
};

struct SynthesisOptions {
    double band = 64.0;   // truncation radius of the unit-scale cutoff kernels
    double hy = 0.5;      // row spacing at unit eta scale
    double h = 0.0;       // s and x step; 0 picks it from the integrand bandwidth
};

struct SynthesisResult {
    double l1_norm = 0.0;
    double max_abs = 0.0;
    long rows = 0;
    double hx = 0.0, hy = 0.0;
};

/// Kernel of m_n^w(xi, eta) beta(2^-k1 xi) beta(2^-k2 eta), computed row by row from
/// K(x, y) = int exp(i w s^3 / 4^n) g1(x - s) g2(y - s^2 / 2^n) a(s / 2^n) ds / 2^n.
SynthesisResult synthesize_kernel(int n, double w, int k1, int k2, const SynthesisOptions& opt = {});

/// One row of the same kernel: values at x = i hx for i in [i0, i0 + values.size()).
struct KernelRow {
    long i0 = 0;
    double hx = 0.0;
    std::vector<cplx> values;
};
KernelRow synthesize_kernel_row(int n, double w, int k1, int k2, double y, const SynthesisOptions& opt = {});

/// 2^(3 ell) sup |F^-1[mm](X, Y)| for
/// mm(xi, eta) = beta0(2^c1 xi) beta0(2^c2 eta) m_{3 ell}^w(xi, eta), sampled on a
/// grid in (X, Y). This is the sup of the rescaled low-frequency kernel at j = 0.
double low_kernel_max(int ell, double w, int c1, int c2, const SynthesisOptions& opt = {});

}  // namespace osc
