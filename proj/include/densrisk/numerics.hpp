#pragma once

// Numerical building blocks shared by every risk computation: normal special
// functions, adaptive quadrature, bracketed scalar minimization and seeded
// normal sampling.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace densrisk::numerics {

/// Raised when an iterative numerical routine cannot meet its contract
/// (quadrature budget exhausted, minimum outside the bracket, singular
/// matrix). Never returned silently as a bad value.
class numerical_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// 1/sqrt(2*pi)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
/// R(phi) = int phi^2 = 1/(2 sqrt(pi))
inline constexpr double kRoughnessStdNormal = 0.28209479177387814347;

struct QuadratureConfig
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;

  void validate() const;
};

/// Integration range; either endpoint may be infinite.
class Interval
{
public:
  Interval(double lo, double hi);

  static Interval whole_line() { return {-kInf, kInf}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool finite() const;
  bool contains(double x) const { return x >= lo_ && x <= hi_; }

private:
  double lo_;
  double hi_;
};

struct MinimizeResult
{
  double argmin;
  double min_value;
  int iterations;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. Infinite endpoints are
/// mapped onto a finite range. Stops once the summed error estimate is below
/// max(abs_tol, rel_tol*|I|); throws numerical_error if max_subdivisions is
/// reached first or the integrand returns a non-finite value.
double integrate(const RealFunction& f, const Interval& iv,
                 const QuadratureConfig& cfg = {});

/// Brent's derivative-free minimizer (golden section with parabolic steps)
/// on a closed bracket. Throws numerical_error if the minimum sits on the
/// bracket boundary, i.e. the bracket does not enclose an interior minimum.
MinimizeResult minimize_scalar(const RealFunction& f, const Interval& bracket,
                               double tol = 1e-8);

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate far into the right tail.
double std_normal_sf(double x);
/// Phi(b) - Phi(a), evaluated on the tail side that avoids cancellation.
double normal_mass(double a, double b);
/// log Phi(x); uses the asymptotic Mills-ratio series for x < -30.
double log_std_normal_cdf(double x);

/// log Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

/// Density of Z where Z^2 ~ chi^2_{n-1}/(n-1). Zero for z <= 0.
double scaled_chi_pdf(int n, double z);
double log_scaled_chi_pdf(int n, double z);
/// Range of z on which scaled_chi_pdf(n, .) exceeds `tail`; the mass outside
/// is negligible next to `tail`.
Interval scaled_chi_support(int n, double tail = 1e-13);

/// Independent engine for replicate `index` of a seeded computation.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);
/// Deterministic N(0,1) draws; a pure function of (seed, count).
std::vector<double> sample_standard_normals(std::uint64_t seed,
                                            std::size_t count);

} // namespace densrisk::numerics
