#include "lorentzk/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lorentzk::quad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Result divergent_result() {
  Result r;
  r.value = kInf;
  r.error = kInf;
  r.converged = false;
  r.divergent = true;
  return r;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
  Result r;
  if (!(b > a)) return r;
  double err = 0.0;
  double l1 = 0.0;
  // Boost 1.74 compares the unscaled local error against a scaled tolerance,
  // so short intervals always recurse to max_depth. Integrate over [0, 1].
  const double h = b - a;
  auto unit = [&](double x) { return h * f(a + h * x); };
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(unit, 0.0, 1.0, opt.max_depth,
                                                                          opt.rel_tol, &err, &l1);
  r.error = err;
  if (!std::isfinite(r.value)) return divergent_result();
  r.converged = err <= std::max(opt.abs_tol, opt.rel_tol * l1) || err <= 1e-300;
  return r;
}

Result integrate_pieces(const Integrand& f, double a, double b, std::span<const double> cuts,
                        const Options& opt) {
  Result total;
  double lo = a;
  auto accumulate = [&](double x, double y) {
    const Result piece = integrate(f, x, y, opt);
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    total.divergent = total.divergent || piece.divergent;
  };
  for (double c : cuts) {
    if (!(c > lo)) continue;
    if (!(c < b)) break;
    accumulate(lo, c);
    lo = c;
  }
  accumulate(lo, b);
  if (total.divergent) return divergent_result();
  return total;
}

Result integrate_from_zero(const Integrand& f, double b, const Options& opt) {
  Result total;
  if (!(b > 0.0)) return total;
  double hi = b;
  double prev = 0.0;
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  unsigned zero_run = 0;
  for (unsigned k = 0; k < opt.max_pieces; ++k) {
    const double lo = 0.5 * hi;
    const Result piece = integrate(f, lo, hi, opt);
    if (piece.divergent) return divergent_result();
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    if (!std::isfinite(total.value)) return divergent_result();
    hi = lo;

    if (piece.value == 0.0) {
      if (++zero_run >= 4) return total;
      prev = 0.0;
      continue;
    }
    zero_run = 0;
    if (prev > 0.0) {
      const double ratio = piece.value / prev;
      const bool stable = std::isfinite(prev_ratio) &&
                          std::abs(ratio - prev_ratio) <= 1e-7 * std::abs(ratio);
      if (k >= 4 && stable && ratio >= 1.0 - 1e-9) return divergent_result();
      if (ratio < 1.0) {
        const double remainder = piece.value * ratio / (1.0 - ratio);
        if (remainder <= opt.rel_tol * std::abs(total.value) ||
            (stable && std::abs(ratio - prev_ratio) * remainder <= opt.rel_tol * std::abs(total.value))) {
          total.value += remainder;
          total.error += std::abs(ratio - prev_ratio) * remainder;
          return total;
        }
      }
      prev_ratio = ratio;
    }
    prev = piece.value;
    if (hi < std::numeric_limits<double>::min()) break;
  }
  // Ran out of pieces: either genuinely divergent or very slowly convergent.
  if (prev > 0.0 && std::isfinite(prev_ratio) && prev_ratio >= 1.0 - 1e-9) return divergent_result();
  total.converged = false;
  return total;
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opt) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_to_infinity: lower limit must be positive");
  auto g = [&f](double u) {
    const double s = 1.0 / u;
    return f(s) * s * s;
  };
  return integrate_from_zero(g, 1.0 / a, opt);
}

}  // namespace lorentzk::quad
