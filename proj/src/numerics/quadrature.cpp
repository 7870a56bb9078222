#include "densrisk/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace densrisk::numerics {

void QuadratureConfig::validate() const
{
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
  if (!(rel_tol >= 0.0))
    throw std::invalid_argument("QuadratureConfig: rel_tol must be >= 0");
  if (max_subdivisions < 1)
    throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    throw std::invalid_argument("Interval: requires lo < hi");
}

bool Interval::finite() const
{
  return std::isfinite(lo_) && std::isfinite(hi_);
}

namespace {

// Kronrod 15-point nodes/weights with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
  double a;
  double b;
  double result;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const RealFunction& f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1)
      resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(result))
    throw numerical_error("integrate: integrand is not finite on [" +
                          std::to_string(a) + ", " + std::to_string(b) + "]");
  return {a, b, result, err};
}

double adaptive(const RealFunction& f, double a, double b,
                const QuadratureConfig& cfg)
{
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  double total = first.result;
  double total_err = first.error;
  heap.push(first);
  int subdivisions = 1;
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (subdivisions >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << a << ", " << b << "] after "
          << subdivisions << " subdivisions (estimate " << total
          << ", error " << total_err << ")";
      throw numerical_error(msg.str());
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at machine resolution; accept what is left.
      total_err -= worst.error;
      worst.error = 0.0;
      heap.push(worst);
      if (total_err <= 0.0)
        break;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.result + right.result - worst.result;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().result;
    heap.pop();
  }
  return sum;
}

} // namespace

double integrate(const RealFunction& f, const Interval& iv,
                 const QuadratureConfig& cfg)
{
  cfg.validate();
  const double lo = iv.lo();
  const double hi = iv.hi();
  if (iv.finite())
    return adaptive(f, lo, hi, cfg);

  auto guarded = [&f](double x) {
    if (!std::isfinite(x))
      return 0.0;
    return f(x);
  };
  if (std::isinf(lo) && std::isinf(hi)) {
    // x = t / (1 - t^2)
    auto g = [&](double t) {
      const double d = 1.0 - t * t;
      const double fx = guarded(t / d);
      return fx == 0.0 ? 0.0 : fx * (1.0 + t * t) / (d * d);
    };
    return adaptive(g, -1.0, 1.0, cfg);
  }
  if (std::isinf(hi)) {
    // x = lo + t / (1 - t)
    auto g = [&](double t) {
      const double d = 1.0 - t;
      const double fx = guarded(lo + t / d);
      return fx == 0.0 ? 0.0 : fx / (d * d);
    };
    return adaptive(g, 0.0, 1.0, cfg);
  }
  auto g = [&](double t) {
    const double d = 1.0 - t;
    const double fx = guarded(hi - t / d);
    return fx == 0.0 ? 0.0 : fx / (d * d);
  };
  return adaptive(g, 0.0, 1.0, cfg);
}

} // namespace densrisk::numerics
