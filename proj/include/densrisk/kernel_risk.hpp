#pragma once

// Exact finite-sample moments, MSE and MISE of the kernel estimator
// n^-1 sum K_h(X_i - x) for a normal truth, with the normal and
// Epanechnikov kernels, plus the usual asymptotic approximations.

#include "densrisk/parametric_risk.hpp"

#include <array>
#include <string_view>

namespace densrisk {

enum class KernelType
{
  normal,
  epanechnikov
};

std::string_view to_string(KernelType k);
/// Accepts "normal" and "epan"/"epanechnikov".
KernelType parse_kernel(std::string_view name);

/// Kernel constants: roughness R(K) = int K^2, second moment k2 = int u^2 K,
/// and the support.
struct Kernel
{
  KernelType id;
  double r_k;
  double k2;
  numerics::Interval support;

  static Kernel of(KernelType id);
};

class Bandwidth
{
public:
  explicit Bandwidth(double h);
  double value() const { return h_; }

private:
  double h_;
};

/// Mean e_h(x) = int K(u) f(x + hu) du, a_h(x) = int K(u)^2 f(x + hu) du and
/// the estimator variance a_h/(nh) - e_h^2/n.
struct ExactMoments
{
  double e_h;
  double a_h;
  double variance;
};

/// N_{j,h}(x) = h^-1 int_{x-h/2}^{x+h/2} v^j phi(v) dv for j = 0..4.
struct TruncatedMoments
{
  std::array<double, 5> n{};

  double operator[](std::size_t j) const { return n[j]; }
};

double kernel_eval(const Kernel& k, double u);

TruncatedMoments truncated_normal_moments(double x, double h);

/// Standard-normal-truth mean and squared-kernel mean, e0_h(x) and a0_h(x).
struct StandardMoments
{
  double e0;
  double a0;
};
StandardMoments standard_kernel_moments(KernelType k, double x, double h);

ExactMoments exact_moments(const Kernel& k, double x, const NormalParams& p,
                           int n, const Bandwidth& h);

PointRisk exact_mse_kernel(const Kernel& k, double x, const NormalParams& p,
                           int n, const Bandwidth& h);

/// g_K(u) = int K(v) K(v + u) dv for the Epanechnikov kernel.
double gk_epanechnikov(double u);
/// g_K for either kernel.
double kernel_autoconvolution(KernelType k, double u);

/// int K(u) g(hu) du and int g_K(u) g(hu) du for the Epanechnikov kernel and
/// a standard normal truth, g being the N(0, 2) density.
double epan_cross_term(double h);
double epan_self_term(double h);

/// Exact MISE for the standard normal truth.
double mise_closed_normal_kernel(int n, double h);
double mise_closed_epan_kernel(int n, double h);
/// Closed-form MISE for a N(mu, sigma^2) truth via sigma^-1 MISE0(h/sigma).
double mise_closed(KernelType k, const NormalParams& p, int n, double h);

/// Generic exact MISE by quadrature of g_K and g; independent of the closed
/// forms above.
MiseReport mise_exact_generic(const Kernel& k, const NormalParams& p, int n,
                              const Bandwidth& h,
                              const QuadratureConfig& cfg = {});

/// R(f'') for N(mu, sigma^2): 3 / (8 sqrt(pi) sigma^5)
double normal_curvature_roughness(double sigma);

struct AsymptoticKernelRisk
{
  double h_a;
  double amise_min;
};

AsymptoticKernelRisk asymptotic_kernel_risk(const Kernel& k,
                                            const NormalParams& p, int n);

} // namespace densrisk
