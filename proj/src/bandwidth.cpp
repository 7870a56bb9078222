#include "densrisk/bandwidth.hpp"

#include "densrisk/parallel.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace densrisk {

using numerics::integrate;
using numerics::Interval;
using numerics::kInf;
using numerics::kInvSqrt2Pi;
using numerics::kPi;
using numerics::kRoughnessStdNormal;

namespace {

void require_n(int n, int min_n, const char* what)
{
  if (n < min_n)
    throw std::domain_error(std::string(what) + ": requires n >= " +
                            std::to_string(min_n) + " (got " +
                            std::to_string(n) + ")");
}

Interval constant_bracket(KernelType k)
{
  return k == KernelType::normal ? Interval(0.5, 3.0) : Interval(2.0, 10.0);
}

// int_{-t0}^{t0} cos^{n-3}(t) h(scale sin t) dt, the substitution v = scale sin t
// turning (1 - v^2/scale^2)^{(n-4)/2} dv into a bounded weight even for n = 3.
double arcsine_weighted(int n, double scale, double limit,
                        const numerics::RealFunction& h,
                        const QuadratureConfig& cfg, bool even)
{
  const double t0 = std::asin(std::min(1.0, limit / scale));
  const double power = n - 3.0;
  auto integrand = [&](double t) {
    const double c = std::cos(t);
    const double w = power == 0.0 ? 1.0 : std::pow(std::max(c, 0.0), power);
    return w == 0.0 ? 0.0 : w * h(scale * std::sin(t));
  };
  if (even)
    return 2.0 * integrate(integrand, Interval(0.0, t0), cfg);
  return integrate(integrand, Interval(-t0, 0.0), cfg) +
         integrate(integrand, Interval(0.0, t0), cfg);
}

} // namespace

BandwidthRule::BandwidthRule(KernelType k, double a) : kernel(Kernel::of(k)), multiplier(a)
{
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("BandwidthRule: multiplier must be positive");
}

BandwidthRule BandwidthRule::finite_sample_optimal(KernelType k, int n)
{
  return {k, optimal_constant(k, n) / std::pow(static_cast<double>(n), 0.2)};
}

BandwidthRule BandwidthRule::asymptotic(KernelType k, int n)
{
  require_n(n, 1, "BandwidthRule::asymptotic");
  return {k, asymptotic_constant(k) / std::pow(static_cast<double>(n), 0.2)};
}

double optimal_constant(KernelType k, int n, double tol)
{
  require_n(n, 2, "optimal_constant");
  const double scale = std::pow(static_cast<double>(n), -0.2);
  auto mise = [&](double c) {
    return k == KernelType::normal ? mise_closed_normal_kernel(n, c * scale)
                                   : mise_closed_epan_kernel(n, c * scale);
  };
  return numerics::minimize_scalar(mise, constant_bracket(k), tol).argmin;
}

double optimal_b(int n, double tol)
{
  return optimal_constant(KernelType::normal, n, tol);
}

double optimal_c(int n, double tol)
{
  return optimal_constant(KernelType::epanechnikov, n, tol);
}

double optimal_mise(KernelType k, int n)
{
  const double h = optimal_constant(k, n) * std::pow(static_cast<double>(n), -0.2);
  return mise_closed(k, NormalParams::standard(), n, h);
}

double asymptotic_constant(KernelType k)
{
  const Kernel kern = Kernel::of(k);
  return std::pow(kern.r_k / (kern.k2 * kern.k2), 0.2) *
         std::pow(normal_curvature_roughness(1.0), -0.2);
}

AncillaryDensities::AncillaryDensities(int n)
  : n_(n), k_n_(0.0), lambda_n_(0.0), r_max_(0.0), s_max_(0.0)
{
  require_n(n, 3, "AncillaryDensities");
  k_n_ = umvu_normalizer(n);
  lambda_n_ = k_n_ * std::sqrt((n - 1.0) / (2.0 * n));
  r_max_ = (n - 1.0) / std::sqrt(static_cast<double>(n));
  s_max_ = std::sqrt(2.0 * (n - 1.0));

  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  const double mass_r = expect_r([](double) { return 1.0; }, cfg);
  const double mass_s = expect_s_even([](double) { return 1.0; }, cfg);
  if (std::abs(mass_r - 1.0) > 1e-8 || std::abs(mass_s - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "AncillaryDensities(" << n << "): normalization check failed (p: "
        << mass_r << ", q: " << mass_s << ")";
    throw numerics::numerical_error(msg.str());
  }
}

double AncillaryDensities::p(double r) const
{
  if (std::abs(r) > r_max_)
    return 0.0;
  const double base = 1.0 - n_ * r * r / ((n_ - 1.0) * (n_ - 1.0));
  return k_n_ * std::pow(std::max(base, 0.0), 0.5 * (n_ - 4.0));
}

double AncillaryDensities::q(double s) const
{
  if (std::abs(s) > s_max_)
    return 0.0;
  const double base = 1.0 - s * s / (2.0 * (n_ - 1.0));
  return lambda_n_ * std::pow(std::max(base, 0.0), 0.5 * (n_ - 4.0));
}

double AncillaryDensities::expect_r(const numerics::RealFunction& h,
                                    const QuadratureConfig& cfg,
                                    double limit) const
{
  return k_n_ * r_max_ * arcsine_weighted(n_, r_max_, limit, h, cfg, false);
}

double AncillaryDensities::expect_s_even(const numerics::RealFunction& h,
                                         const QuadratureConfig& cfg,
                                         double limit) const
{
  return lambda_n_ * s_max_ * arcsine_weighted(n_, s_max_, limit, h, cfg, true);
}

MiseReport real_mise_exact(const BandwidthRule& rule, int n,
                           const QuadratureConfig& cfg)
{
  require_n(n, 3, "real_mise_exact");
  const AncillaryDensities dens(n);
  const double a = rule.multiplier;
  const Kernel& k = rule.kernel;
  const double inv_scale = expected_inverse_scale(n);
  const bool epan = k.id == KernelType::epanechnikov;

  const double roughness_term = k.r_k / (n * a) * inv_scale;

  const double gk_mean = dens.expect_s_even(
    [&](double s) { return kernel_autoconvolution(k.id, s / a) / a; }, cfg,
    epan ? a : kInf);
  const double pair_term = (1.0 - 1.0 / n) * inv_scale * gk_mean;

  // Predictive density of mu_hat + sigma_hat t, averaged over (mu_hat, sigma_hat).
  const double nn = n;
  const double pred_scale = kInvSqrt2Pi * std::sqrt(nn / (nn + 1.0));
  const double pred_coef = nn / ((nn + 1.0) * (nn - 1.0));
  auto predictive = [&](double t) {
    return pred_scale * std::exp(-0.5 * (nn - 1.0) * std::log1p(pred_coef * t * t));
  };
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.abs_tol = cfg.abs_tol / 10.0;
  auto inner = [&](double u) {
    const double w = kernel_eval(k, u);
    if (w == 0.0)
      return 0.0;
    return w * dens.expect_r([&](double r) { return predictive(r + a * u); },
                             inner_cfg);
  };
  const Interval outer = epan ? Interval(-0.5, 0.5) : Interval(-8.0, 8.0);
  const double cross_term = integrate(inner, outer, cfg);

  const double value = roughness_term + pair_term - 2.0 * cross_term + kRoughnessStdNormal;
  return {value, MiseMethod::quadrature, std::nullopt};
}

void McConfig::validate() const
{
  if (replicates < 1)
    throw std::invalid_argument("McConfig: replicates must be >= 1");
  if (eval_points < 1)
    throw std::invalid_argument("McConfig: eval_points must be >= 1");
}

MiseReport real_mise_mc(const BandwidthRule& rule, int n, const McConfig& mc)
{
  require_n(n, 2, "real_mise_mc");
  mc.validate();
  const auto replicates = static_cast<std::size_t>(mc.replicates);
  const Kernel k = rule.kernel;
  const double a = rule.multiplier;
  std::vector<double> z(replicates);

  parallel_for(replicates, mc.threads, [&](std::size_t i) {
    std::mt19937_64 engine = numerics::substream(mc.seed, i);
    std::normal_distribution<double> normal;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (double& x : xs)
      x = normal(engine);
    const double h = a * PluginEstimate::from_sample(xs).sigma_hat();
    double acc = 0.0;
    for (int j = 0; j < mc.eval_points; ++j) {
      const double x = normal(engine);
      double est = 0.0;
      for (double xi : xs)
        est += kernel_eval(k, (xi - x) / h);
      est /= n * h;
      const double f = numerics::std_normal_pdf(x);
      const double root = std::sqrt(f);
      const double d = est / root - root;
      acc += d * d;
    }
    z[i] = acc / mc.eval_points;
  });

  double sum = 0.0;
  for (double v : z)
    sum += v;
  const double mean = sum / static_cast<double>(replicates);
  double ss = 0.0;
  for (double v : z)
    ss += (v - mean) * (v - mean);
  const double se =
    replicates > 1 ? std::sqrt(ss / static_cast<double>(replicates - 1) /
                               static_cast<double>(replicates))
                   : kInf;
  return {mean, MiseMethod::monte_carlo, se};
}

} // namespace densrisk
