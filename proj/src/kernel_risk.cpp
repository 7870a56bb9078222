#include "densrisk/kernel_risk.hpp"

#include <cmath>
#include <string>

namespace densrisk {

using numerics::integrate;
using numerics::Interval;
using numerics::kInvSqrt2Pi;
using numerics::kPi;
using numerics::kRoughnessStdNormal;
using numerics::normal_mass;
using numerics::std_normal_pdf;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Below these bandwidths (in sigma units) the closed forms lose digits to
// cancellation of h^-2 .. h^-5 terms and the power series are used instead.
constexpr double kMomentSeriesBelow = 0.2;
constexpr double kMiseSeriesBelow = 1.0;
constexpr int kMaxSeriesTerms = 160;

// int u^k K(u) du, Epanechnikov, k even.
double epan_moment(int k)
{
  return 6.0 * std::pow(0.5, k + 1) / ((k + 1.0) * (k + 3.0));
}

// int u^k K(u)^2 du, Epanechnikov, k even.
double epan_sq_moment(int k)
{
  return 4.5 * std::pow(0.5, k + 1) *
         (1.0 / (k + 1.0) - 2.0 / (k + 3.0) + 1.0 / (k + 5.0));
}

// int u^k g_K(u) du, Epanechnikov, k even.
double epan_gk_moment(int k)
{
  return 2.4 * (1.0 / (k + 1.0) - 5.0 / (k + 3.0) + 5.0 / (k + 4.0) -
                1.0 / (k + 6.0));
}

// sum_k phi^(k)(x)/k! h^k m(k) over even k, with phi^(k) = He_k phi for even
// k. Hermite values are carried as He_k(x)/k! to stay in range.
template <class Moment>
double hermite_series(double x, double h, Moment m)
{
  const double phi = std_normal_pdf(x);
  if (phi == 0.0)
    return 0.0;
  double c_prev = 0.0; // He_{k-1}(x) / (k-1)!
  double c = 1.0;      // He_k(x) / k!
  double hk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    if (k > 0) {
      const double c_next = (x * c - c_prev) / k;
      c_prev = c;
      c = c_next;
      hk *= h;
    }
    if (k % 2 != 0)
      continue;
    const double term = c * hk * m(k);
    sum += term;
    if (k > 8 + std::abs(x) * h && std::abs(term) <= 1e-17 * std::abs(sum))
      break;
  }
  return sum * phi;
}

// Central moments C_j = h^-1 int_{-h/2}^{h/2} t^j phi(x + t) dt, j = 0..4, by
// Taylor expansion of phi around x. Accurate for small h.
std::array<double, 5> central_moments_series(double x, double h)
{
  std::array<double, 5> out{};
  for (int j = 0; j < 5; ++j) {
    // C_j = sum_k (-1)^k He_k(x)/k! phi(x) * m_{j+k}, m_p = (h/2)^p/(p+1) for p even.
    const double phi = std_normal_pdf(x);
    double c_prev = 0.0;
    double c = 1.0;
    double sum = 0.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
      if (k > 0) {
        const double c_next = (x * c - c_prev) / k;
        c_prev = c;
        c = c_next;
      }
      const int p = j + k;
      if (p % 2 != 0)
        continue;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double term = sign * c * std::pow(0.5 * h, p) / (p + 1.0);
      sum += term;
      if (k > 8 + std::abs(x) * h && std::abs(term) <= 1e-17 * std::abs(sum))
        break;
    }
    out[j] = sum * phi;
  }
  return out;
}

double binomial(int n, int k)
{
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

// II - 2 I + R(f) for the Epanechnikov kernel as a power series in h; the
// k = 0, 1 terms cancel exactly.
double epan_bias_part_series(double h)
{
  const double q = -0.25 * h * h;
  double coef = 1.0; // q^k / k!
  double sum = 0.0;
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    coef *= q / k;
    if (k < 2)
      continue;
    const double term = coef * (epan_gk_moment(2 * k) - 2.0 * epan_moment(2 * k));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum))
      break;
  }
  return kRoughnessStdNormal * sum;
}

template <class Moment>
double gauss_weight_series(double h, Moment m)
{
  const double q = -0.25 * h * h;
  double coef = 1.0;
  double sum = m(0);
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    coef *= q / k;
    const double term = coef * m(2 * k);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum))
      break;
  }
  return kRoughnessStdNormal * sum;
}

void require_positive_h(double h, const char* what)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::domain_error(std::string(what) + ": bandwidth must be positive");
}

void require_n(int n, const char* what)
{
  if (n < 1)
    throw std::domain_error(std::string(what) + ": requires n >= 1");
}

// Density of X_i - X_j for a standard normal truth.
double difference_density(double t)
{
  return std_normal_pdf(t / kSqrt2) / kSqrt2;
}

} // namespace

std::string_view to_string(KernelType k)
{
  return k == KernelType::normal ? "normal" : "epan";
}

KernelType parse_kernel(std::string_view name)
{
  if (name == "normal" || name == "gaussian")
    return KernelType::normal;
  if (name == "epan" || name == "epanechnikov")
    return KernelType::epanechnikov;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

Kernel Kernel::of(KernelType id)
{
  if (id == KernelType::normal)
    return {id, kRoughnessStdNormal, 1.0, Interval::whole_line()};
  return {id, 1.2, 0.05, Interval(-0.5, 0.5)};
}

Bandwidth::Bandwidth(double h) : h_(h)
{
  require_positive_h(h, "Bandwidth");
}

double kernel_eval(const Kernel& k, double u)
{
  if (k.id == KernelType::normal)
    return std_normal_pdf(u);
  return std::abs(u) <= 0.5 ? 1.5 * (1.0 - 4.0 * u * u) : 0.0;
}

TruncatedMoments truncated_normal_moments(double x, double h)
{
  require_positive_h(h, "truncated_normal_moments");
  TruncatedMoments out;
  if (h < kMomentSeriesBelow) {
    const auto c = central_moments_series(x, h);
    for (int j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int i = 0; i <= j; ++i)
        s += binomial(j, i) * std::pow(x, j - i) * c[i];
      out.n[j] = s;
    }
    return out;
  }
  const double a = x - 0.5 * h;
  const double b = x + 0.5 * h;
  const double pa = std_normal_pdf(a);
  const double pb = std_normal_pdf(b);
  std::array<double, 5> m{};
  m[0] = normal_mass(a, b);
  m[1] = pa - pb;
  for (int j = 2; j < 5; ++j)
    m[j] = std::pow(a, j - 1) * pa - std::pow(b, j - 1) * pb + (j - 1) * m[j - 2];
  for (int j = 0; j < 5; ++j)
    out.n[j] = m[j] / h;
  return out;
}

StandardMoments standard_kernel_moments(KernelType k, double x, double h)
{
  require_positive_h(h, "standard_kernel_moments");
  if (k == KernelType::normal) {
    const double s1 = std::sqrt(1.0 + h * h);
    const double s2 = std::sqrt(1.0 + 0.5 * h * h);
    return {std_normal_pdf(x / s1) / s1,
            kRoughnessStdNormal * std_normal_pdf(x / s2) / s2};
  }
  if (h < kMomentSeriesBelow) {
    return {hermite_series(x, h, epan_moment), hermite_series(x, h, epan_sq_moment)};
  }
  const TruncatedMoments t = truncated_normal_moments(x, h);
  const double x2 = x * x;
  const double c2 = t[2] - 2.0 * x * t[1] + x2 * t[0];
  const double c4 = t[4] - 4.0 * x * t[3] + 6.0 * x2 * t[2] -
                    4.0 * x2 * x * t[1] + x2 * x2 * t[0];
  const double h2 = h * h;
  return {1.5 * (t[0] - 4.0 * c2 / h2),
          2.25 * (t[0] - 8.0 * c2 / h2 + 16.0 * c4 / (h2 * h2))};
}

ExactMoments exact_moments(const Kernel& k, double x, const NormalParams& p,
                           int n, const Bandwidth& h)
{
  require_n(n, "exact_moments");
  const double s = p.sigma();
  const StandardMoments m =
    standard_kernel_moments(k.id, p.standardize(x), h.value() / s);
  ExactMoments out;
  out.e_h = m.e0 / s;
  out.a_h = m.a0 / s;
  out.variance = std::max(0.0, out.a_h / (n * h.value()) - out.e_h * out.e_h / n);
  return out;
}

PointRisk exact_mse_kernel(const Kernel& k, double x, const NormalParams& p,
                           int n, const Bandwidth& h)
{
  const ExactMoments m = exact_moments(k, x, p, n, h);
  PointRisk r;
  r.bias = m.e_h - p.density(x);
  r.variance = m.variance;
  r.mse = r.bias * r.bias + r.variance;
  return r;
}

double gk_epanechnikov(double u)
{
  const double a = std::abs(u);
  if (a > 1.0)
    return 0.0;
  const double a2 = a * a;
  return 1.2 * (1.0 - 5.0 * a2 + 5.0 * a2 * a - a2 * a2 * a);
}

double kernel_autoconvolution(KernelType k, double u)
{
  if (k == KernelType::normal)
    return difference_density(u);
  return gk_epanechnikov(u);
}

double epan_cross_term(double h)
{
  require_positive_h(h, "epan_cross_term");
  if (h < kMiseSeriesBelow)
    return gauss_weight_series(h, epan_moment);
  const double c = h / (2.0 * kSqrt2);
  return 3.0 / h *
         ((1.0 - 8.0 / (h * h)) * normal_mass(0.0, c) +
          2.0 * kSqrt2 / h * std_normal_pdf(c));
}

double epan_self_term(double h)
{
  require_positive_h(h, "epan_self_term");
  if (h < kMiseSeriesBelow)
    return gauss_weight_series(h, epan_gk_moment);
  const double c = h / kSqrt2;
  const double h2 = h * h;
  const double h3 = h2 * h;
  const double h5 = h3 * h2;
  return 2.4 / h *
         ((1.0 - 10.0 / h2) * normal_mass(0.0, c) +
          (20.0 * kSqrt2 / h3 - 32.0 * kSqrt2 / h5) * kInvSqrt2Pi +
          (kSqrt2 / h - 12.0 * kSqrt2 / h3 + 32.0 * kSqrt2 / h5) *
            std_normal_pdf(c));
}

double mise_closed_normal_kernel(int n, double h)
{
  require_n(n, "mise_closed_normal_kernel");
  require_positive_h(h, "mise_closed_normal_kernel");
  // (1 + t)^(-1/2) - 1 without cancellation.
  const double a = std::expm1(-0.5 * std::log1p(h * h));
  const double b = std::expm1(-0.5 * std::log1p(0.5 * h * h));
  return kRoughnessStdNormal *
         (1.0 / (n * h) - (1.0 + a) / n + a - 2.0 * b);
}

double mise_closed_epan_kernel(int n, double h)
{
  require_n(n, "mise_closed_epan_kernel");
  require_positive_h(h, "mise_closed_epan_kernel");
  const double self = epan_self_term(h);
  if (h < kMiseSeriesBelow)
    return 1.2 / (n * h) - self / n + epan_bias_part_series(h);
  return 1.2 / (n * h) + (1.0 - 1.0 / n) * self - 2.0 * epan_cross_term(h) +
         kRoughnessStdNormal;
}

double mise_closed(KernelType k, const NormalParams& p, int n, double h)
{
  const double h0 = h / p.sigma();
  const double m0 = k == KernelType::normal ? mise_closed_normal_kernel(n, h0)
                                            : mise_closed_epan_kernel(n, h0);
  return m0 / p.sigma();
}

MiseReport mise_exact_generic(const Kernel& k, const NormalParams& p, int n,
                              const Bandwidth& h, const QuadratureConfig& cfg)
{
  require_n(n, "mise_exact_generic");
  const double h0 = h.value() / p.sigma();
  auto kernel = [&k](double u) { return kernel_eval(k, u); };

  double r_k = 0.0, self = 0.0, cross = 0.0;
  if (k.id == KernelType::normal) {
    const Interval ku(-8.0, 8.0);
    const Interval gu(-8.0 * kSqrt2, 8.0 * kSqrt2);
    r_k = integrate([&](double u) { return kernel(u) * kernel(u); }, ku, cfg);
    self = integrate(
      [&](double u) {
        return kernel_autoconvolution(k.id, u) * difference_density(h0 * u);
      },
      gu, cfg);
    cross = integrate(
      [&](double u) { return kernel(u) * difference_density(h0 * u); }, ku, cfg);
  } else {
    const Interval ku(-0.5, 0.5);
    r_k = integrate([&](double u) { return kernel(u) * kernel(u); }, ku, cfg);
    auto self_integrand = [&](double u) {
      return gk_epanechnikov(u) * difference_density(h0 * u);
    };
    // g_K is not smooth at 0; integrate each half separately.
    self = integrate(self_integrand, Interval(-1.0, 0.0), cfg) +
           integrate(self_integrand, Interval(0.0, 1.0), cfg);
    cross = integrate(
      [&](double u) { return kernel(u) * difference_density(h0 * u); }, ku, cfg);
  }
  const double value0 = r_k / (n * h0) + (1.0 - 1.0 / n) * self - 2.0 * cross +
                        difference_density(0.0);
  return {value0 / p.sigma(), MiseMethod::quadrature, std::nullopt};
}

double normal_curvature_roughness(double sigma)
{
  return 3.0 / (8.0 * std::sqrt(kPi) * std::pow(sigma, 5));
}

AsymptoticKernelRisk asymptotic_kernel_risk(const Kernel& k,
                                            const NormalParams& p, int n)
{
  require_n(n, "asymptotic_kernel_risk");
  const double rf2 = normal_curvature_roughness(p.sigma());
  const double nn = n;
  const double h_a = std::pow(k.r_k / (k.k2 * k.k2), 0.2) * std::pow(rf2, -0.2) *
                     std::pow(nn, -0.2);
  const double d = 1.25 * std::pow(k.r_k * std::sqrt(k.k2), 0.8) * std::pow(rf2, 0.2);
  const double r_f = kRoughnessStdNormal / p.sigma();
  return {h_a, d / std::pow(nn, 0.8) - r_f / nn};
}

} // namespace densrisk
