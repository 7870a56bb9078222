#include "densrisk/parametric_risk.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace densrisk {

using numerics::integrate;
using numerics::Interval;
using numerics::kInf;
using numerics::kPi;
using numerics::kRoughnessStdNormal;
using numerics::log_gamma;
using numerics::std_normal_pdf;

namespace {

void require_n(int n, int min_n, const char* what)
{
  if (n < min_n)
    throw std::domain_error(std::string(what) + ": requires n >= " +
                            std::to_string(min_n) + " (got " +
                            std::to_string(n) + ")");
}

// E h(Z) under the scaled-chi law, truncated at its 1e-13 density tails.
double expect_over_scale(int n, const numerics::RealFunction& h,
                         const QuadratureConfig& cfg)
{
  const Interval support = numerics::scaled_chi_support(n);
  return integrate(
    [&](double z) { return h(z) * numerics::scaled_chi_pdf(n, z); }, support,
    cfg);
}

} // namespace

NormalParams::NormalParams(double mu, double sigma) : mu_(mu), sigma_(sigma)
{
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0))
    throw std::invalid_argument("NormalParams: sigma must be positive and finite");
}

double NormalParams::density(double x) const
{
  return std_normal_pdf(standardize(x)) / sigma_;
}

PluginEstimate::PluginEstimate(double mu_hat, double sigma_hat)
  : mu_hat_(mu_hat), sigma_hat_(sigma_hat)
{
  if (!std::isfinite(mu_hat) || !std::isfinite(sigma_hat) || !(sigma_hat > 0.0))
    throw std::invalid_argument("PluginEstimate: sigma_hat must be positive");
}

PluginEstimate PluginEstimate::from_sample(const std::vector<double>& xs)
{
  if (xs.size() < 2)
    throw std::domain_error("PluginEstimate: need at least two observations");
  double mean = 0.0;
  for (double x : xs)
    mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs)
    ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string_view to_string(MiseMethod m)
{
  switch (m) {
  case MiseMethod::closed_form:
    return "closed_form";
  case MiseMethod::quadrature:
    return "quadrature";
  case MiseMethod::monte_carlo:
    return "monte_carlo";
  }
  return "unknown";
}

bool MiseReport::infinite() const { return std::isinf(value); }

double PointRisk::sd() const { return std::sqrt(std::max(variance, 0.0)); }

double plugin_density(double x, const PluginEstimate& est)
{
  return std_normal_pdf((x - est.mu_hat()) / est.sigma_hat()) / est.sigma_hat();
}

double asymptotic_mse_plugin(double x, const NormalParams& p, int n)
{
  require_n(n, 2, "asymptotic_mse_plugin");
  const double y = p.standardize(x);
  const double phi = std_normal_pdf(y);
  const double s = y * y - 1.0;
  return phi * phi * (y * y + 0.5 * s * s) / (n * p.sigma() * p.sigma());
}

double asymptotic_mise_plugin(const NormalParams& p, int n)
{
  require_n(n, 2, "asymptotic_mise_plugin");
  return 0.875 * kRoughnessStdNormal / (n * p.sigma());
}

double shifted_gaussian_expectation(double t, double a)
{
  if (!(t > -1.0))
    throw std::domain_error("shifted_gaussian_expectation: requires t > -1");
  return std::exp(-0.5 * a * a * t / (1.0 + t)) / std::sqrt(1.0 + t);
}

ConditionalMoments conditional_moments_given_z(double x, int n, double z)
{
  require_n(n, 2, "conditional_moments_given_z");
  if (!(z > 0.0))
    throw std::domain_error("conditional_moments_given_z: z must be positive");
  const double nz2 = n * z * z;
  const double rn = std::sqrt(static_cast<double>(n));
  const double mean = numerics::kInvSqrt2Pi * rn / std::sqrt(1.0 + nz2) *
                      std::exp(-0.5 * x * x * n / (1.0 + nz2));
  const double second = rn / (2.0 * kPi * z * std::sqrt(2.0 + nz2)) *
                        std::exp(-x * x * n / (2.0 + nz2));
  return {mean, second};
}

double expected_inverse_scale(int n)
{
  require_n(n, 3, "expected_inverse_scale");
  return std::sqrt(0.5 * (n - 1.0)) *
         std::exp(log_gamma(0.5 * (n - 2.0)) - log_gamma(0.5 * (n - 1.0)));
}

PointRisk exact_mse_plugin(double x, const NormalParams& p, int n,
                           const QuadratureConfig& cfg)
{
  require_n(n, 3, "exact_mse_plugin");
  const double y = p.standardize(x);
  const double mean0 = expect_over_scale(
    n, [&](double z) { return conditional_moments_given_z(y, n, z).mean; }, cfg);
  const double second0 = expect_over_scale(
    n,
    [&](double z) { return conditional_moments_given_z(y, n, z).second_moment; },
    cfg);
  const double s = p.sigma();
  const double mean = mean0 / s;
  const double truth = std_normal_pdf(y) / s;
  PointRisk r;
  r.bias = mean - truth;
  r.variance = second0 / (s * s) - mean * mean;
  r.mse = r.bias * r.bias + r.variance;
  return r;
}

double plugin_mise_sequence(int n, const QuadratureConfig& cfg)
{
  require_n(n, 3, "plugin_mise_sequence");
  const double cross = expect_over_scale(
    n, [n](double z) { return std::sqrt(2.0 * n / (1.0 + n * (1.0 + z * z))); },
    cfg);
  return n * (1.0 + expected_inverse_scale(n) - 2.0 * cross);
}

MiseReport exact_mise_plugin(const NormalParams& p, int n,
                             const QuadratureConfig& cfg)
{
  const double a_n = plugin_mise_sequence(n, cfg);
  return {a_n * kRoughnessStdNormal / (n * p.sigma()), MiseMethod::quadrature,
          std::nullopt};
}

double a_n_expansion_residual(int n, const QuadratureConfig& cfg)
{
  const double a_n = plugin_mise_sequence(n, cfg);
  const double nn = n;
  return nn * nn * std::abs(a_n - 0.875 - (271.0 / 96.0) / nn);
}

double umvu_normalizer(int n)
{
  require_n(n, 3, "umvu_normalizer");
  return std::exp(log_gamma(0.5 * (n - 1.0)) - log_gamma(0.5 * (n - 2.0))) /
         std::sqrt(kPi) * std::sqrt(static_cast<double>(n)) / (n - 1.0);
}

double umvu_density(double x, const PluginEstimate& est, int n)
{
  require_n(n, 4, "umvu_density");
  const double r = (x - est.mu_hat()) / est.sigma_hat();
  const double edge = (n - 1.0) / std::sqrt(static_cast<double>(n));
  if (std::abs(r) > edge)
    return 0.0;
  const double base = std::max(0.0, 1.0 - n * r * r / ((n - 1.0) * (n - 1.0)));
  return umvu_normalizer(n) / est.sigma_hat() * std::pow(base, 0.5 * n - 2.0);
}

MiseReport exact_mise_umvu(const NormalParams& p, int n)
{
  require_n(n, 3, "exact_mise_umvu");
  if (n == 3)
    return {kInf, MiseMethod::closed_form, std::nullopt};
  const double nn = n;
  const double log_k = std::log(umvu_normalizer(n));
  const double log_first = 0.5 * std::log(0.5 * (nn - 1.0)) +
                           log_gamma(0.5 * (nn - 2.0)) -
                           log_gamma(0.5 * (nn - 1.0)) + 2.0 * log_k +
                           std::log(nn - 1.0) - 0.5 * std::log(nn) +
                           log_gamma(nn - 3.0) + 0.5 * std::log(kPi) -
                           log_gamma(0.5 * (2.0 * nn - 5.0));
  const double value = std::exp(log_first) - kRoughnessStdNormal;
  return {value / p.sigma(), MiseMethod::closed_form, std::nullopt};
}

double shrink_factor(double mise, double r_f)
{
  if (!(mise >= 0.0) || !(r_f > 0.0))
    throw std::domain_error("shrink_factor: requires mise >= 0 and r_f > 0");
  return r_f / (mise + r_f);
}

double shrunk_mise(double mise, double r_f)
{
  if (!(mise >= 0.0) || !(r_f > 0.0))
    throw std::domain_error("shrunk_mise: requires mise >= 0 and r_f > 0");
  return mise * r_f / (r_f + mise);
}

ScoreFunction finite_difference_score(DensityFunction density, double step)
{
  return [density = std::move(density), step](double x, const ParamVector& theta) {
    ParamVector u(theta.size());
    ParamVector shifted = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      shifted[i] = theta[i] + step;
      const double up = std::log(density(x, shifted));
      shifted[i] = theta[i] - step;
      const double down = std::log(density(x, shifted));
      shifted[i] = theta[i];
      u[i] = (up - down) / (2.0 * step);
    }
    return u;
  };
}

InformationMatrices information_matrices(const ScoreFunction& score,
                                         const DensityFunction& density,
                                         const ParamVector& theta,
                                         const QuadratureConfig& cfg,
                                         const Interval& support)
{
  const auto d = static_cast<Eigen::Index>(theta.size());
  if (d == 0)
    throw std::invalid_argument("information_matrices: empty parameter vector");
  InformationMatrices out{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      auto entry = [&](int power) {
        return integrate(
          [&](double x) {
            const double f = density(x, theta);
            if (!(f > 0.0) || !std::isfinite(f))
              return 0.0;
            const ParamVector u = score(x, theta);
            return std::pow(f, power) * u[i] * u[j];
          },
          support, cfg);
      };
      out.fisher(i, j) = out.fisher(j, i) = entry(1);
      out.roughness(i, j) = out.roughness(j, i) = entry(2);
    }
  }
  return out;
}

double asymptotic_mise_parametric_general(const ScoreFunction& score,
                                          const DensityFunction& density,
                                          const ParamVector& theta,
                                          const QuadratureConfig& cfg,
                                          const Interval& support)
{
  const InformationMatrices m =
    information_matrices(score, density, theta, cfg, support);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.fisher);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : kInf;
  if (!(lo > 0.0) || cond > 1e12) {
    std::ostringstream msg;
    msg << "asymptotic_mise_parametric_general: Fisher information is singular"
        << " (eigenvalues [" << lo << ", " << hi << "], condition number "
        << cond << ")";
    throw numerics::numerical_error(msg.str());
  }
  return m.fisher.ldlt().solve(m.roughness).trace();
}

} // namespace densrisk
