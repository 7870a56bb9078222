#pragma once

// Two small studies outside density estimation proper: estimating a
// lognormal mean, and the asymptotic MISE of a three-parameter
// skew-extended normal fit when the truth is normal.

#include "densrisk/parametric_risk.hpp"

#include <array>

namespace densrisk {

/// log X ~ N(a, b^2); the target is mu = exp(a + b^2/2).
class LognormalParams
{
public:
  LognormalParams(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double mean() const;

private:
  double a_;
  double b_;
};

/// n0: the last sample size at which the sample mean is at least as good as
/// the parametric estimate exp(a_hat + b_hat^2 / 2).
struct CrossoverResult
{
  double b;
  int n0;
};

/// exp(2a + b^2)(exp(b^2) - 1)/n, the variance of the sample mean.
double lognormal_mse_nonparametric(const LognormalParams& p, int n);
/// Closed-form risk of exp(a_hat + b_hat^2 / 2), with b_hat^2 the (n-1)
/// divisor variance of the logs. +inf once 2 b^2 >= n - 1.
double lognormal_mse_parametric(const LognormalParams& p, int n);
/// (exp(b^2) - 1)/(b^2 + b^4/2), the large-n ratio of the two risks.
double lognormal_variance_ratio_limit(double b);

inline constexpr int kCrossoverWindow = 200;
inline constexpr int kCrossoverSearchLimit = 1000000;

CrossoverResult lognormal_crossover(double b);

/// theta = (a, b, gamma): f(x) = gamma Phi(y)^(gamma-1) phi(y) / b, y = (x-a)/b.
double skew_normal_log_density(double x, const ParamVector& theta);
double skew_normal_density(double x, const ParamVector& theta);
std::array<double, 3> skew_normal_score(double x, const ParamVector& theta);

/// n * MISE limit of the skew-extended plug-in under a N(0, sigma^2) truth.
double skew_normal_asymptotic_mise(double sigma,
                                   const QuadratureConfig& cfg = {});
InformationMatrices skew_normal_information(double sigma,
                                            const QuadratureConfig& cfg = {});

} // namespace densrisk
