#pragma once

// Risk of the normality-based density estimators: the plug-in estimator
// sigma_hat^-1 phi((x - mu_hat)/sigma_hat), the UMVU estimator, and the
// shrunk variants. All exact results assume a N(mu, sigma^2) truth.

#include "densrisk/numerics.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace densrisk {

using numerics::QuadratureConfig;

/// The N(mu, sigma^2) estimand.
class NormalParams
{
public:
  NormalParams() = default;
  NormalParams(double mu, double sigma);

  static NormalParams standard() { return {}; }

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  /// (x - mu) / sigma
  double standardize(double x) const { return (x - mu_) / sigma_; }
  double density(double x) const;

private:
  double mu_ = 0.0;
  double sigma_ = 1.0;
};

/// Sample mean and sample standard deviation (divisor n - 1).
class PluginEstimate
{
public:
  PluginEstimate(double mu_hat, double sigma_hat);

  static PluginEstimate from_sample(const std::vector<double>& xs);

  double mu_hat() const { return mu_hat_; }
  double sigma_hat() const { return sigma_hat_; }

private:
  double mu_hat_;
  double sigma_hat_;
};

enum class MiseMethod
{
  closed_form,
  quadrature,
  monte_carlo
};

std::string_view to_string(MiseMethod m);

/// Expected integrated squared error, in units of 1/sigma. `value` may be
/// +infinity (UMVU at n = 3); `std_error` is set only for Monte Carlo.
struct MiseReport
{
  double value = 0.0;
  MiseMethod method = MiseMethod::closed_form;
  std::optional<double> std_error;

  bool infinite() const;
};

/// Pointwise risk at one x.
struct PointRisk
{
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;

  double sd() const;
};

struct ConditionalMoments
{
  double mean;
  double second_moment;
};

// --- plug-in estimator -----------------------------------------------------

double plugin_density(double x, const PluginEstimate& est);

double asymptotic_mse_plugin(double x, const NormalParams& p, int n);
/// (7/8) / (2 sqrt(pi) n sigma)
double asymptotic_mise_plugin(const NormalParams& p, int n);

/// E exp{-t (N + a)^2 / 2} for N ~ N(0,1) and t > -1.
double shifted_gaussian_expectation(double t, double a);

/// E{f_hat(x) | Z = z} and E{f_hat(x)^2 | Z = z} for a standard normal
/// truth, where sigma_hat = Z.
ConditionalMoments conditional_moments_given_z(double x, int n, double z);

/// E(1/Z) for Z^2 ~ chi^2_{n-1}/(n-1), i.e. E(sigma / sigma_hat). n >= 3.
double expected_inverse_scale(int n);

PointRisk exact_mse_plugin(double x, const NormalParams& p, int n,
                           const QuadratureConfig& cfg = {});

/// a_n = n 2 sqrt(pi) MISE for the standard normal; decreases to 7/8.
double plugin_mise_sequence(int n, const QuadratureConfig& cfg = {});
MiseReport exact_mise_plugin(const NormalParams& p, int n,
                             const QuadratureConfig& cfg = {});
/// n^2 |a_n - 7/8 - (271/96)/n|
double a_n_expansion_residual(int n, const QuadratureConfig& cfg = {});

// --- UMVU estimator --------------------------------------------------------

/// k_n = Gamma((n-1)/2) / (sqrt(pi) Gamma((n-2)/2)) * sqrt(n)/(n-1)
double umvu_normalizer(int n);
/// Zero outside |x - mu_hat|/sigma_hat <= (n-1)/sqrt(n). Requires n >= 4.
double umvu_density(double x, const PluginEstimate& est, int n);
/// +infinity at n = 3, closed form for n >= 4.
MiseReport exact_mise_umvu(const NormalParams& p, int n);

// --- shrinkage -------------------------------------------------------------

double shrink_factor(double mise, double r_f);
double shrunk_mise(double mise, double r_f);

// --- general parametric families -------------------------------------------

using ParamVector = std::vector<double>;
using DensityFunction = std::function<double(double, const ParamVector&)>;
using ScoreFunction = std::function<ParamVector(double, const ParamVector&)>;

struct InformationMatrices
{
  Eigen::MatrixXd fisher;    ///< J = int f u u^T
  Eigen::MatrixXd roughness; ///< L = int f^2 u u^T
};

/// Central differences of log f in each parameter.
ScoreFunction finite_difference_score(DensityFunction density,
                                      double step = 1e-5);

InformationMatrices information_matrices(
  const ScoreFunction& score, const DensityFunction& density,
  const ParamVector& theta, const QuadratureConfig& cfg = {},
  const numerics::Interval& support = numerics::Interval::whole_line());

/// lim n * MISE = Tr{J^-1 L}. Throws numerical_error (with the condition
/// number) when J is singular or badly conditioned.
double asymptotic_mise_parametric_general(
  const ScoreFunction& score, const DensityFunction& density,
  const ParamVector& theta, const QuadratureConfig& cfg = {},
  const numerics::Interval& support = numerics::Interval::whole_line());

} // namespace densrisk
