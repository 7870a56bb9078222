#include "densrisk/numerics.hpp"

#include <cmath>
#include <sstream>

namespace densrisk::numerics {

MinimizeResult minimize_scalar(const RealFunction& f, const Interval& bracket,
                               double tol)
{
  if (!bracket.finite())
    throw std::invalid_argument("minimize_scalar: bracket must be finite");
  if (!(tol > 0.0))
    throw std::invalid_argument("minimize_scalar: tol must be > 0");

  constexpr double golden = 0.38196601125010515180; // (3 - sqrt 5) / 2
  constexpr int max_iter = 500;
  const double eps = 2.0 * std::numeric_limits<double>::epsilon();

  double a = bracket.lo();
  double b = bracket.hi();
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a))
      break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Fit a parabola through x, w, v.
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0)
        p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2)
          d = x < m ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (iter == max_iter)
    throw numerical_error("minimize_scalar: iteration limit reached");

  const double edge = 3.0 * (eps * std::abs(x) + tol);
  if (x - bracket.lo() <= edge || bracket.hi() - x <= edge) {
    std::ostringstream msg;
    msg << "minimize_scalar: minimum at bracket boundary (argmin " << x
        << " in [" << bracket.lo() << ", " << bracket.hi()
        << "]); bracket does not enclose a minimum";
    throw numerical_error(msg.str());
  }
  return {x, fx, iter};
}

} // namespace densrisk::numerics
