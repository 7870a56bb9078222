#pragma once

// Finite-sample optimal bandwidth constants and the real MISE incurred when
// the bandwidth is estimated from the data as h = a * sigma_hat.

#include "densrisk/kernel_risk.hpp"

#include <cstdint>

namespace densrisk {

/// Data-driven bandwidth h = multiplier * sigma_hat.
struct BandwidthRule
{
  Kernel kernel;
  double multiplier;

  BandwidthRule(KernelType k, double multiplier);
  /// multiplier = (finite-sample optimal constant) / n^(1/5)
  static BandwidthRule finite_sample_optimal(KernelType k, int n);
  /// multiplier = (asymptotic constant 1.0592 or 4.6898) / n^(1/5)
  static BandwidthRule asymptotic(KernelType k, int n);
};

inline constexpr double kDefaultArgminTol = 1e-9;

/// b_n: minimizer over b in [0.5, 3] of the normal-kernel MISE at h = b n^-1/5.
double optimal_b(int n, double tol = kDefaultArgminTol);
/// c_n: minimizer over c in [2, 10] of the Epanechnikov MISE at h = c n^-1/5.
double optimal_c(int n, double tol = kDefaultArgminTol);
double optimal_constant(KernelType k, int n, double tol = kDefaultArgminTol);
/// Oracle (sigma known) exact MISE minimized over h, standard normal truth.
double optimal_mise(KernelType k, int n);

/// Limits of b_n and c_n: {R(K)/k2^2}^(1/5) R(phi'')^(-1/5).
double asymptotic_constant(KernelType k);

/// Densities of R = (X_1 - mu_hat)/sigma_hat and S = (X_1 - X_2)/sigma_hat
/// under normal sampling. Both are free of (mu, sigma).
class AncillaryDensities
{
public:
  explicit AncillaryDensities(int n);

  int n() const { return n_; }
  double k_n() const { return k_n_; }
  double lambda_n() const { return lambda_n_; }
  double r_max() const { return r_max_; }
  double s_max() const { return s_max_; }

  double p(double r) const;
  double q(double s) const;

  /// E h(R), optionally restricted to |R| <= limit.
  double expect_r(const numerics::RealFunction& h, const QuadratureConfig& cfg,
                  double limit = numerics::kInf) const;
  /// E h(S), optionally restricted to |S| <= limit; h must be even.
  double expect_s_even(const numerics::RealFunction& h,
                       const QuadratureConfig& cfg,
                       double limit = numerics::kInf) const;

private:
  int n_;
  double k_n_;
  double lambda_n_;
  double r_max_;
  double s_max_;
};

/// Exact EISE for h = a sigma_hat, standard normal truth (scale by 1/sigma
/// for other truths). Requires n >= 3.
MiseReport real_mise_exact(const BandwidthRule& rule, int n,
                           const QuadratureConfig& cfg = {});

struct McConfig
{
  long long replicates = 10000; ///< B
  int eval_points = 10;         ///< m
  std::uint64_t seed = 20240101;
  int threads = 1;

  void validate() const;
};

/// Monte Carlo EISE: mean of B draws of Z_{n,m} with its standard error.
/// Replicate i draws from substream(seed, i), so the result does not depend
/// on the thread count.
MiseReport real_mise_mc(const BandwidthRule& rule, int n, const McConfig& mc);

} // namespace densrisk
