#pragma once

#include "osc/multiplier.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace osc {

/// Periodic complex samples on an nx-by-ny box of size Lx-by-Ly. Row i holds
/// x = (i - nx/2) hx and column k holds y = (k - ny/2) hy, so the origin sits
/// at index (nx/2, ny/2).
struct GridField {
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;
    Eigen::MatrixXcd data;

    GridField() = default;
    GridField(int n, double L) : GridField(n, n, L, L) {}
    GridField(int nx_, int ny_, double Lx_, double Ly_);

    double hx() const { return Lx / nx; }
    double hy() const { return Ly / ny; }
    double x(int i) const { return (i - nx / 2) * hx(); }
    double y(int k) const { return (k - ny / 2) * hy(); }
    // Angular frequency of FFT bin i (wrapped to the symmetric range).
    double freq_x(int i) const;
    double freq_y(int k) const;
    double cell_area() const { return hx() * hy(); }

    GridField zeros_like() const { return GridField(nx, ny, Lx, Ly); }
};

/// Field data after a Fourier transform is indexed by FFT bin, not by position.
GridField transform_forward(const GridField& f);
GridField transform_inverse(const GridField& f);

double l2_norm(const GridField& f);  // (sum |f|^2 hx hy)^(1/2)
double lp_norm(const GridField& f, double p);
double l1_norm(const GridField& f);
double max_abs(const GridField& f);

using Symbol = std::function<cplx(double xi, double eta)>;

/// Inverse transform of symbol * transform of f. Coefficients with
/// |fhat| <= skip_below * max |fhat| are set to zero without evaluating m.
GridField apply_symbol(const GridField& f, const Symbol& m, double skip_below = 0.0);

enum class ProjectionMode { sharp, leq, tilde };

/// Multiplies by beta(2^-m freq), beta0 or beta_tilde along axis 1 (x) or 2 (y).
/// Throws UnresolvedScale when the cutoff reaches past the Nyquist frequency.
GridField lp_project(const GridField& f, int axis, int m, ProjectionMode mode);

struct UnresolvedScale : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureFailure : std::runtime_error {
    double xi, eta;
    QuadratureFailure(double xi_, double eta_);
};

/// Samples multiplier_localized at every grid frequency (q.xi, q.eta ignored).
/// freq_scale maps grid frequencies before evaluation: (sx xi, sy eta).
Eigen::MatrixXcd sample_multiplier(const GridField& shape, const MultiplierQuery& q, const MultiplierOptions& opt = {},
                                   double sx = 1.0, double sy = 1.0);

GridField apply_multiplier_operator(const GridField& f, const MultiplierQuery& q, const MultiplierOptions& opt = {});

struct KernelResult {
    GridField field;  // positions, origin at (nx/2, ny/2)
    double l1_norm = 0.0;
};

/// Kernel of a sampled symbol: K(x) = (Lx Ly)^-1 sum_k m_k exp(i x . xi_k).
KernelResult kernel_from_symbol(const GridField& shape, const Eigen::MatrixXcd& symbol);
KernelResult kernel_of(const MultiplierQuery& q, const GridField& shape, const MultiplierOptions& opt = {});

/// Circular convolution sum_j K(x_i - x_j) f(x_j) hx hy, computed directly.
GridField circular_convolve_direct(const GridField& kernel, const GridField& f);

/// Periodic bilinear interpolation at a physical point.
cplx interpolate(const GridField& f, double x, double y);

struct ParabolaProfile {
    std::vector<double> s;
    std::vector<cplx> w;
};

/// out(x, y) = sum_k w_k f(x - lambda s_k, y - (lambda s_k)^2), off-grid samples
/// by bilinear interpolation with wraparound.
GridField parabola_convolve(const GridField& f, const ParabolaProfile& profile, double lambda = 1.0);

/// Quadrature profile of H^v_m: exp(i v t^3) beta(2^-m t) / t dt.
ParabolaProfile hilbert_profile(double v, int m, int nodes_per_side);

/// Average (1/2r) int_{-r}^{r} over the parabola, as a profile on |f|.
ParabolaProfile average_profile(double r, int nodes);

GridField parabolic_maximal(const GridField& f, const std::vector<double>& radii, int nodes = 0);

/// Symbol of H^v_m: m_{3l}^{2^-3j v}(2^(-2l-j) xi, 2^(-l-2j) eta) with m = -j + l,
/// written for a general m as the t-integral of exp(i(-t xi - t^2 eta + v t^3)) beta(2^-m t)/t.
cplx hilbert_symbol(double v, int m, double xi, double eta, double abs_tol = 1e-12);

enum class RescalingRoute {
    spatial,  // left side by parabola_convolve
    fourier,  // left side by the H^v_m symbol on the original grid
};

/// Max relative discrepancy between H^v_{-j+l} P_{k1+2l+j} P_{k2+l+2j} f and
/// the dilated-grid H_{3l}^{2^-3j v} P_{k1} P_{k2} f_{l,j} read at the same nodes.
double rescaling_check(const GridField& f, int j, int ell, int k1, int k2, double v,
                       RescalingRoute route = RescalingRoute::spatial, int nodes_per_side = 0);

/// Fixed-w slice: inverse transform of exp(i lambda phi_b(w/lambda; xi, eta)) amp(xi, eta) fhat.
GridField propagator_slice(const GridField& f, Branch b, const std::function<cplx(double, double)>& amp,
                           double lambda, double w);

/// Gaussian exp(-(x^2 + y^2) / (2 sigma^2)) centred at (cx, cy).
GridField gaussian_field(int n, double L, double sigma, double cx = 0.0, double cy = 0.0);

}  // namespace osc
