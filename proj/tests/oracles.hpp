#pragma once

// Test oracles that share no code with the library: fixed-order composite
// Gauss-Legendre quadrature, brute-force risk integrals and plain simulations.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch would need an eigen solver; Newton on P_m is enough here.
inline GaussRule gauss_legendre_rule(int m)
{
  GaussRule rule;
  for (int i = 1; i <= m; ++i) {
    double x = std::cos(kPi * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 200)
{
  static const GaussRule rule = gauss_legendre_rule(20);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    total += 0.5 * width * s;
  }
  return total;
}

inline double epan(double u) { return std::abs(u) <= 0.5 ? 1.5 * (1.0 - 4.0 * u * u) : 0.0; }

// int K(u) phi(x + h u) du and int K(u)^2 phi(x + h u) du by brute force.
inline double kernel_mean(bool epanechnikov, double x, double h)
{
  if (epanechnikov)
    return integrate([&](double u) { return epan(u) * phi(x + h * u); }, -0.5, 0.5, 40);
  return integrate([&](double u) { return phi(u) * phi(x + h * u); }, -12.0, 12.0, 200);
}

inline double kernel_square_mean(bool epanechnikov, double x, double h)
{
  if (epanechnikov)
    return integrate([&](double u) { return epan(u) * epan(u) * phi(x + h * u); }, -0.5,
                     0.5, 40);
  return integrate([&](double u) { return phi(u) * phi(u) * phi(x + h * u); }, -12.0, 12.0,
                   200);
}

// int K(v) K(v + u) dv for the Epanechnikov kernel.
inline double epan_autoconvolution(double u)
{
  const double lo = std::max(-0.5, -0.5 - u);
  const double hi = std::min(0.5, 0.5 - u);
  if (hi <= lo)
    return 0.0;
  return integrate([&](double v) { return epan(v) * epan(v + u); }, lo, hi, 20);
}

struct SampleStats
{
  double mean;
  double std_error;
};

template <class Draw>
SampleStats simulate(long long replicates, std::uint64_t seed, Draw&& draw)
{
  std::mt19937_64 engine(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long long i = 0; i < replicates; ++i) {
    const double v = draw(engine);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / replicates;
  const double var = (sum_sq - replicates * mean * mean) / (replicates - 1);
  return {mean, std::sqrt(var / replicates)};
}

} // namespace oracle
