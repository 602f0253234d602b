#include "lorentzk/lorentz_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lorentzk/quad.hpp"

namespace lorentzk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool small_integer(double p) { return p >= 1.0 && p <= 16.0 && p == std::floor(p); }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  bool exact = true;

  void add(double x) { value += x; }
  void add(const quad::Result& r) {
    value += r.value;
    error += r.error;
    exact = false;
  }
};

quad::Options quad_options(const NormOptions& opt) {
  quad::Options q;
  q.rel_tol = std::min(opt.rel_tol, 1e-10);
  return q;
}

// integral over [lo, hi] of (v + c/s)^p w(s) ds with lo > 0.
void gamma_cell(Accumulator& acc, const Weight& w, double p, double v, double c, double lo, double hi,
                const NormOptions& opt) {
  if (c == 0.0) {
    acc.add(std::pow(v, p) * w.moment(0.0, lo, hi));
    return;
  }
  if (v == 0.0) {
    acc.add(std::pow(c, p) * w.moment(-p, lo, hi));
    return;
  }
  if (small_integer(p)) {
    const int n = static_cast<int>(p);
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += binomial(n, k) * std::pow(v, n - k) * std::pow(c, k) * w.moment(-k, lo, hi);
    acc.add(s);
    if (!w.closed_form()) acc.exact = false;
    return;
  }
  auto f = [&](double s) { return std::pow(v + c / s, p) * w(s); };
  const auto cuts = w.breakpoints();
  if (std::isinf(hi)) {
    acc.add(quad::integrate_pieces(f, lo, std::max(lo, cuts.empty() ? lo : cuts.back()), cuts, quad_options(opt)));
    acc.add(quad::integrate_to_infinity(f, std::max(lo, cuts.empty() ? lo : cuts.back()), quad_options(opt)));
  } else {
    acc.add(quad::integrate_pieces(f, lo, hi, cuts, quad_options(opt)));
  }
}

NormValue finish(const Accumulator& acc, bool closed) {
  NormValue out;
  out.value = acc.value;
  out.exact = acc.exact && closed;
  out.error_estimate = acc.error;
  out.divergent = std::isinf(acc.value);
  return out;
}

NormValue sup_norm(const LorentzSpace& space, const StepFunction& fstar, const NormOptions& opt) {
  const MaximalFunction mf(fstar);
  const auto& x = fstar.breakpoints();
  const auto& v = fstar.values();
  const auto& c = mf.oscillation_coefficients();
  const std::size_t n = x.size();
  double best = 0.0;
  auto scan = [&](double lo, double hi, double vi, double ci) {
    const std::size_t m = std::max<std::size_t>(opt.sup_samples, 2);
    for (std::size_t k = 0; k < m; ++k) {
      const double t = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(m - 1));
      double g = 0.0;
      switch (space.flavor) {
        case Flavor::lambda: g = vi; break;
        case Flavor::s: g = ci / t; break;
        case Flavor::gamma: g = vi + ci / t; break;
      }
      if (g > 0.0) best = std::max(best, g * space.w(t));
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? x[0] * 1e-6 : x[i - 1];
    scan(lo, x[i], v[i], c[i]);
  }
  if (space.flavor != Flavor::lambda) scan(x[n - 1], x[n - 1] * 1e6, 0.0, c[n]);
  NormValue out;
  out.value = best;
  out.exact = false;
  out.divergent = std::isinf(best);
  return out;
}

}  // namespace

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::lambda: return "lambda";
    case Flavor::gamma: return "gamma";
    case Flavor::s: return "s";
  }
  return "?";
}

Flavor parse_flavor(const std::string& s) {
  if (s == "lambda" || s == "Lambda") return Flavor::lambda;
  if (s == "gamma" || s == "Gamma") return Flavor::gamma;
  if (s == "s" || s == "S") return Flavor::s;
  throw std::invalid_argument("unknown flavor '" + s + "' (expected lambda, gamma or s)");
}

NormValue power_integral(const LorentzSpace& space, const StepFunction& fstar, double a, double b,
                         const NormOptions& opt) {
  if (!fstar.is_non_increasing()) throw std::invalid_argument("power_integral: f* must be non-increasing");
  if (!(space.p > 0.0) || std::isinf(space.p)) throw std::invalid_argument("power_integral: need 0 < p < inf");
  // Windows away from zero stay finite for weights like s^-1.
  if (space.flavor != Flavor::s && a <= 0.0 && !space.w.locally_integrable())
    throw std::domain_error("weight " + space.w.describe() + " is not locally integrable");
  Accumulator acc;
  if (fstar.is_zero() || !(b > a)) return finish(acc, true);

  const double p = space.p;
  const Weight& w = space.w;
  const MaximalFunction mf(fstar);
  const auto& x = fstar.breakpoints();
  const auto& v = fstar.values();
  const auto& c = mf.oscillation_coefficients();
  const std::size_t n = x.size();

  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = std::max(a, i == 0 ? 0.0 : x[i - 1]);
    const double hi = std::min(b, i < n ? x[i] : kInf);
    if (!(hi > lo)) continue;
    const double vi = i < n ? v[i] : 0.0;
    switch (space.flavor) {
      case Flavor::lambda:
        if (vi > 0.0) acc.add(std::pow(vi, p) * w.moment(0.0, lo, hi));
        break;
      case Flavor::s:
        if (c[i] > 0.0) acc.add(std::pow(c[i], p) * w.moment(-p, lo, hi));
        break;
      case Flavor::gamma:
        gamma_cell(acc, w, p, vi, c[i], lo, hi, opt);
        break;
    }
    if (std::isinf(acc.value)) break;
  }
  return finish(acc, w.closed_form());
}

NormValue norm(const LorentzSpace& space, const StepFunction& f, const NormOptions& opt) {
  if (!(space.p > 0.0)) throw std::invalid_argument("norm: p must be positive");
  const StepFunction fstar = rearrange(f);
  if (fstar.is_zero()) return {};
  if (std::isinf(space.p)) return sup_norm(space, fstar, opt);
  NormValue r = power_integral(space, fstar, 0.0, kInf, opt);
  if (!r.divergent) {
    const double root = std::pow(r.value, 1.0 / space.p);
    r.error_estimate = r.value > 0.0 ? root * r.error_estimate / (space.p * r.value) : 0.0;
    r.value = root;
  }
  return r;
}

NormValue truncated_norm(const TruncatedNorm& tn, const StepFunction& fstar, const NormOptions& opt) {
  if (!(tn.t > 0.0)) throw std::invalid_argument("truncated_norm: t must be positive");
  if (std::isinf(tn.space.p)) throw std::invalid_argument("truncated_norm: p = inf is not supported");
  NormValue r = tn.window == Window::head ? power_integral(tn.space, fstar, 0.0, tn.t, opt)
                                          : power_integral(tn.space, fstar, tn.t, kInf, opt);
  if (!r.divergent) r.value = std::pow(r.value, 1.0 / tn.space.p);
  return r;
}

SidePair s_lambda_identity_check(const StepFunction& f, double p, const Weight& w, double t, Window window,
                                 const NormOptions& opt) {
  if (!(t > 0.0)) throw std::invalid_argument("s_lambda_identity_check: t must be positive");
  const StepFunction fstar = rearrange(f);
  SidePair out;
  if (fstar.is_zero()) return out;

  const LorentzSpace s_space{Flavor::s, p, w};
  const NormValue left = window == Window::head ? power_integral(s_space, fstar, 0.0, t, opt)
                                                : power_integral(s_space, fstar, t, kInf, opt);
  out.lhs = std::pow(left.value, 1.0 / p);

  // Right side: quadrature of (T f*)^p w~ over the mirrored window, evaluated
  // pointwise and split at the jumps of T f*.
  const TImage img(fstar);
  const Weight wt = tilde(w, p);
  double lo = window == Window::head ? (std::isinf(t) ? 0.0 : 1.0 / t) : 0.0;
  double hi = window == Window::head ? kInf : 1.0 / t;
  hi = std::min(hi, img.jump_points().back());  // T f* vanishes beyond 1/x_1
  std::vector<double> cuts = img.jump_points();
  const auto wcuts = wt.breakpoints();
  cuts.insert(cuts.end(), wcuts.begin(), wcuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double u) {
    const double g = img(u);
    return g == 0.0 ? 0.0 : std::pow(g, p) * wt(u);
  };
  quad::Options qo = quad_options(opt);
  double total = 0.0;
  if (hi > lo) {
    if (lo == 0.0) {
      const double first = std::min(hi, cuts.front());
      total += quad::integrate_from_zero(integrand, first, qo).value;
      if (hi > first) total += quad::integrate_pieces(integrand, first, hi, cuts, qo).value;
    } else {
      total += quad::integrate_pieces(integrand, lo, hi, cuts, qo).value;
    }
  }
  out.rhs = std::pow(total, 1.0 / p);
  return out;
}

SidePair gamma_equals_s_check(const StepFunction& f, double p, const Weight& w, bool enforce,
                              const NormOptions& opt) {
  if (enforce) {
    const auto v = check_RBp(w, p);
    if (!v.holds)
      throw std::domain_error("hypothesis RB_p fails for " + w.describe() + " (" + v.reason + ")");
  }
  const StepFunction fstar = rearrange(f);
  SidePair out;
  out.lhs = power_integral({Flavor::gamma, p, w}, fstar, 0.0, kInf, opt).value;
  out.rhs = power_integral({Flavor::s, p, w}, fstar, 0.0, kInf, opt).value;
  return out;
}

}  // namespace lorentzk
