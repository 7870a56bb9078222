#include "densrisk/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace densrisk::numerics;

TEST(Quadrature, NormalDensityOverWholeLine)
{
  EXPECT_NEAR(integrate(std_normal_pdf, Interval::whole_line()), 1.0, 1e-10);
}

TEST(Quadrature, EpanechnikovSecondMoment)
{
  auto f = [](double u) { return u * u * 1.5 * (1.0 - 4.0 * u * u); };
  EXPECT_NEAR(integrate(f, {-0.5, 0.5}), 0.05, 1e-12);
}

TEST(Quadrature, SquaredNormalDensity)
{
  auto f = [](double x) { return std_normal_pdf(x) * std_normal_pdf(x); };
  EXPECT_NEAR(integrate(f, Interval::whole_line()), 0.28209479177387814, 1e-10);
}

TEST(Quadrature, HalfInfiniteRanges)
{
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, {0.0, kInf}), 1.0, 1e-10);
  EXPECT_NEAR(integrate(std_normal_pdf, {-kInf, 1.0}), oracle::Phi(1.0), 1e-10);
}

TEST(Quadrature, LinearInRandomPolynomials)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  QuadratureConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const double p[4] = {coef(rng), coef(rng), coef(rng), coef(rng)};
    const double q[4] = {coef(rng), coef(rng), coef(rng), coef(rng)};
    const double alpha = coef(rng), beta = coef(rng);
    auto poly = [](const double* c, double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); };
    const Interval iv(-1.3, 2.1);
    const double lhs =
      integrate([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, iv, cfg);
    const double rhs = alpha * integrate([&](double x) { return poly(p, x); }, iv, cfg) +
                       beta * integrate([&](double x) { return poly(q, x); }, iv, cfg);
    EXPECT_NEAR(lhs, rhs, 2.0 * cfg.abs_tol);
  }
}

TEST(Quadrature, NonConvergenceIsAnError)
{
  QuadratureConfig cfg;
  cfg.max_subdivisions = 3;
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
  EXPECT_THROW(integrate(wild, {0.0, 1.0}, cfg), numerical_error);
}

TEST(Quadrature, RejectsBadConfigAndInterval)
{
  QuadratureConfig cfg;
  cfg.abs_tol = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(Interval(1.0, 1.0), std::invalid_argument);
}

TEST(Minimize, Quadratic)
{
  const auto r = minimize_scalar([](double x) { return (x - 2.0) * (x - 2.0); }, {0.0, 5.0}, 1e-8);
  EXPECT_NEAR(r.argmin, 2.0, 1e-8);
  EXPECT_NEAR(r.min_value, 0.0, 1e-12);
  EXPECT_GT(r.iterations, 0);
}

TEST(Minimize, ReparameterizationEquivariance)
{
  auto f = [](double x) { return 3.0 * (x - 0.7) * (x - 0.7) + 1.0; };
  const double a = 2.5, b = -1.0;
  const auto direct = minimize_scalar(f, {-1.0, 3.0}, 1e-9);
  // g(t) = f(a t + b) is minimized at t* with a t* + b = argmin f.
  const auto mapped =
    minimize_scalar([&](double t) { return f(a * t + b); }, {0.0, 1.6}, 1e-9);
  EXPECT_NEAR(a * mapped.argmin + b, direct.argmin, 1e-8);
}

TEST(Minimize, MinimumAtBracketEdgeFails)
{
  EXPECT_THROW(minimize_scalar([](double x) { return x; }, {0.0, 1.0}, 1e-8), numerical_error);
}

TEST(SpecialFunctions, NormalValues)
{
  EXPECT_NEAR(std_normal_pdf(0.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(normal_mass(0.0, kInf), 0.5, 1e-15);
  EXPECT_NEAR(normal_mass(-1.96, 1.96), 0.9500042097035591, 1e-13);
}

TEST(SpecialFunctions, CdfAccuracyAgainstErfc)
{
  for (double x = -8.0; x <= 8.0; x += 0.125)
    EXPECT_NEAR(std_normal_cdf(x), oracle::Phi(x), 1e-12) << "x=" << x;
}

TEST(SpecialFunctions, NormalMassIsAdditive)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    double v[3] = {u(rng), u(rng), u(rng)};
    std::sort(v, v + 3);
    EXPECT_NEAR(normal_mass(v[0], v[1]) + normal_mass(v[1], v[2]), normal_mass(v[0], v[2]),
                1e-14);
  }
}

TEST(SpecialFunctions, LogCdfTail)
{
  EXPECT_NEAR(log_std_normal_cdf(0.0), std::log(0.5), 1e-15);
  EXPECT_NEAR(log_std_normal_cdf(-10.0), std::log(oracle::Phi(-10.0)), 1e-10);
  // Asymptotic region: log Phi(x) ~ -x^2/2 - log(-x sqrt(2 pi)).
  const double x = -40.0;
  EXPECT_NEAR(log_std_normal_cdf(x), -0.5 * x * x - std::log(-x * std::sqrt(2.0 * kPi)),
              1e-3);
  EXPECT_TRUE(std::isfinite(log_std_normal_cdf(-200.0)));
}

TEST(SpecialFunctions, LogGamma)
{
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(0.5), 0.5723649429247001, 1e-14);
  EXPECT_NEAR(std::exp(log_gamma(6.0)), 120.0, 1e-10);
  EXPECT_THROW(log_gamma(0.0), std::domain_error);
  EXPECT_THROW(log_gamma(-1.5), std::domain_error);
}

TEST(ScaledChi, Moments)
{
  const Interval pos(0.0, kInf);
  EXPECT_NEAR(integrate([](double z) { return scaled_chi_pdf(10, z); }, pos), 1.0, 1e-10);
  EXPECT_NEAR(integrate([](double z) { return z * z * scaled_chi_pdf(10, z); }, pos), 1.0,
              1e-10);
  EXPECT_NEAR(integrate([](double z) { return scaled_chi_pdf(5, z) / z; }, pos),
              1.2533141373155003, 1e-9);
  EXPECT_EQ(scaled_chi_pdf(5, -1.0), 0.0);
  EXPECT_EQ(scaled_chi_pdf(5, 0.0), 0.0);
}

TEST(ScaledChi, ConcentratesNearOne)
{
  for (int n : {30, 60, 200}) {
    const double mass = integrate([&](double z) { return scaled_chi_pdf(n, z); }, {0.7, 1.3});
    EXPECT_GT(mass, 0.98) << "n=" << n;
  }
}

TEST(ScaledChi, CentralMassMatchesChiSquareCdf)
{
  // P(0.49 (n-1) < chi2_{n-1} < 1.69 (n-1)) from an independent chi-square cdf.
  const double mass = integrate([](double z) { return scaled_chi_pdf(30, z); }, {0.7, 1.3});
  EXPECT_NEAR(mass, 0.9787413590033266, 1e-10);
}

TEST(ScaledChi, SupportCarriesAllMass)
{
  for (int n : {3, 10, 1000}) {
    const Interval s = scaled_chi_support(n);
    const double mass = integrate([&](double z) { return scaled_chi_pdf(n, z); }, s);
    EXPECT_NEAR(mass, 1.0, 1e-11) << "n=" << n;
  }
}

TEST(Sampling, DeterministicAndEmpty)
{
  EXPECT_TRUE(sample_standard_normals(42, 0).empty());
  EXPECT_EQ(sample_standard_normals(42, 1000), sample_standard_normals(42, 1000));
  EXPECT_NE(sample_standard_normals(42, 10), sample_standard_normals(43, 10));
}

TEST(Sampling, DistributionalSanity)
{
  const auto xs = sample_standard_normals(20240101, 1000000);
  double sum = 0.0, sum_sq = 0.0;
  long tail = 0;
  for (double x : xs) {
    sum += x;
    sum_sq += x * x;
    tail += std::abs(x) > 1.96;
  }
  const double n = static_cast<double>(xs.size());
  EXPECT_NEAR(sum / n, 0.0, 0.004);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.006);
  // Binomial(1e6, 0.05) has sd 2.2e-4.
  EXPECT_NEAR(tail / n, 0.0499958, 0.0007);
}

TEST(Sampling, SubstreamsDiffer)
{
  auto a = substream(1, 0);
  auto b = substream(1, 1);
  auto c = substream(1, 0);
  const auto va = a();
  EXPECT_NE(va, b());
  EXPECT_EQ(va, c());
}
