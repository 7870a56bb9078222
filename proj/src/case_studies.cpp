#include "densrisk/case_studies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace densrisk {

using numerics::kInf;

LognormalParams::LognormalParams(double a, double b) : a_(a), b_(b)
{
  if (!std::isfinite(a))
    throw std::invalid_argument("LognormalParams: a must be finite");
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("LognormalParams: b must be positive");
}

double LognormalParams::mean() const { return std::exp(a_ + 0.5 * b_ * b_); }

double lognormal_mse_nonparametric(const LognormalParams& p, int n)
{
  if (n < 1)
    throw std::domain_error("lognormal_mse_nonparametric: requires n >= 1");
  const double b2 = p.b() * p.b();
  return std::exp(2.0 * p.a() + b2) * std::expm1(b2) / n;
}

double lognormal_mse_parametric(const LognormalParams& p, int n)
{
  if (n < 2)
    throw std::domain_error("lognormal_mse_parametric: requires n >= 2");
  const double b2 = p.b() * p.b();
  const double m = n - 1.0;
  if (2.0 * b2 >= m)
    return kInf;
  // (1 - 2b^2/m)^{-m/2} and (1 - b^2/m)^{-m} in log form.
  const double first = b2 / n - 0.5 * m * std::log1p(-2.0 * b2 / m);
  const double second = -m * std::log1p(-b2 / m);
  const double bracket = first > second ? std::exp(second) * std::expm1(first - second)
                                        : std::exp(first) - std::exp(second);
  return std::exp(2.0 * p.a() + b2 / n) * bracket;
}

double lognormal_variance_ratio_limit(double b)
{
  if (!(b > 0.0))
    throw std::domain_error("lognormal_variance_ratio_limit: requires b > 0");
  const double b2 = b * b;
  return std::expm1(b2) / (b2 + 0.5 * b2 * b2);
}

CrossoverResult lognormal_crossover(double b)
{
  const LognormalParams p(0.0, b);
  int last_np_win = 1;
  for (int n = 2; n - last_np_win <= kCrossoverWindow; ++n) {
    if (n > kCrossoverSearchLimit)
      throw numerics::numerical_error("lognormal_crossover: no crossover below n = " +
                                      std::to_string(kCrossoverSearchLimit));
    if (lognormal_mse_nonparametric(p, n) <= lognormal_mse_parametric(p, n))
      last_np_win = n;
  }
  return {b, last_np_win};
}

namespace {

struct SkewParams
{
  double a, b, gamma;
};

SkewParams unpack(const ParamVector& theta)
{
  if (theta.size() != 3)
    throw std::invalid_argument("skew-normal: theta must have three entries");
  if (!(theta[1] > 0.0) || !(theta[2] > 0.0))
    throw std::domain_error("skew-normal: requires b > 0 and gamma > 0");
  return {theta[0], theta[1], theta[2]};
}

} // namespace

double skew_normal_log_density(double x, const ParamVector& theta)
{
  const auto [a, b, gamma] = unpack(theta);
  const double y = (x - a) / b;
  return std::log(gamma) + (gamma - 1.0) * numerics::log_std_normal_cdf(y) -
         0.5 * y * y - 0.5 * std::log(2.0 * numerics::kPi) - std::log(b);
}

double skew_normal_density(double x, const ParamVector& theta)
{
  return std::exp(skew_normal_log_density(x, theta));
}

std::array<double, 3> skew_normal_score(double x, const ParamVector& theta)
{
  const auto [a, b, gamma] = unpack(theta);
  const double y = (x - a) / b;
  const double log_cdf = numerics::log_std_normal_cdf(y);
  const double mills =
    std::exp(-0.5 * y * y - 0.5 * std::log(2.0 * numerics::kPi) - log_cdf);
  const double tilt = (gamma - 1.0) * mills;
  return {(y - tilt) / b, (y * y - 1.0 - tilt * y) / b, 1.0 / gamma + log_cdf};
}

namespace {

ScoreFunction skew_score_fn()
{
  return [](double x, const ParamVector& theta) {
    const auto s = skew_normal_score(x, theta);
    return ParamVector(s.begin(), s.end());
  };
}

numerics::Interval skew_support(double sigma)
{
  return {-12.0 * sigma, 12.0 * sigma};
}

void require_sigma(double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::domain_error("skew-normal: sigma must be positive");
}

} // namespace

InformationMatrices skew_normal_information(double sigma,
                                            const QuadratureConfig& cfg)
{
  require_sigma(sigma);
  return information_matrices(skew_score_fn(), skew_normal_density,
                              {0.0, sigma, 1.0}, cfg, skew_support(sigma));
}

double skew_normal_asymptotic_mise(double sigma, const QuadratureConfig& cfg)
{
  require_sigma(sigma);
  return asymptotic_mise_parametric_general(skew_score_fn(), skew_normal_density,
                                            {0.0, sigma, 1.0}, cfg,
                                            skew_support(sigma));
}

} // namespace densrisk
