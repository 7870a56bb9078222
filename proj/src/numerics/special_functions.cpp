#include "densrisk/numerics.hpp"

#include <cmath>

namespace densrisk::numerics {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
} // namespace

double std_normal_pdf(double x)
{
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_sf(double x)
{
  return 0.5 * std::erfc(x / kSqrt2);
}

double normal_mass(double a, double b)
{
  if (a >= 0.0)
    return std_normal_sf(a) - std_normal_sf(b);
  if (b <= 0.0)
    return std_normal_cdf(b) - std_normal_cdf(a);
  return 1.0 - std_normal_cdf(a) - std_normal_sf(b);
}

double log_std_normal_cdf(double x)
{
  if (x > -30.0)
    return std::log(std_normal_cdf(x));
  // Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
  const double inv2 = 1.0 / (x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    series += term;
  }
  return -0.5 * x * x - kLogSqrt2Pi - std::log(-x) + std::log(series);
}

double log_gamma(double x)
{
  if (!(x > 0.0))
    throw std::domain_error("log_gamma: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_scaled_chi_pdf(int n, double z)
{
  if (n < 2)
    throw std::domain_error("scaled_chi_pdf: n must be >= 2");
  if (!(z > 0.0))
    return -kInf;
  // Z^2 = W/k, W ~ chi^2_k; g(z) = gamma_k(k z^2) * 2 k z
  const double k = n - 1.0;
  const double w = k * z * z;
  const double log_chi2 = (0.5 * k - 1.0) * std::log(w) - 0.5 * w -
                          0.5 * k * std::log(2.0) - log_gamma(0.5 * k);
  return log_chi2 + std::log(2.0 * k * z);
}

double scaled_chi_pdf(int n, double z)
{
  if (!(z > 0.0)) {
    if (n < 2)
      throw std::domain_error("scaled_chi_pdf: n must be >= 2");
    return 0.0;
  }
  return std::exp(log_scaled_chi_pdf(n, z));
}

Interval scaled_chi_support(int n, double tail)
{
  if (n < 2)
    throw std::domain_error("scaled_chi_support: n must be >= 2");
  const double log_tail = std::log(tail);
  const double mode = std::sqrt((n - 2.0) / (n - 1.0));
  auto below = [&](double z) { return log_scaled_chi_pdf(n, z) < log_tail; };

  // Upper tail: expand then bisect on the decreasing branch.
  double lo = std::max(mode, 1e-3);
  double hi = lo + 1.0;
  while (!below(hi))
    hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  const double upper = hi;

  double lower = 0.0;
  if (mode > 0.0 && below(0.5 * mode)) {
    double a = 0.0, b = mode;
    for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
      const double mid = 0.5 * (a + b);
      (below(mid) ? a : b) = mid;
    }
    lower = a;
  }
  return {lower, upper};
}

} // namespace densrisk::numerics
