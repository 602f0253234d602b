#include "lorentzk/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lorentzk/quad.hpp"

namespace lorentzk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// integral_a^b s^{k-1} ds for 0 <= a < b <= inf.
double power_moment(double k, double a, double b) {
  if (!(b > a)) return 0.0;
  if (k == 0.0) {
    if (a == 0.0 || std::isinf(b)) return kInf;
    return std::log(b / a);
  }
  if (k > 0.0) {
    if (std::isinf(b)) return kInf;
    // Integer exponents are common (s^0, s^1) and sit in hot loops.
    if (k == 1.0) return b - a;
    if (k == 2.0) return 0.5 * (b - a) * (b + a);
    if (a == 0.0) return std::pow(b, k) / k;
    return std::pow(b, k) * -std::expm1(k * std::log(a / b)) / k;
  }
  if (a == 0.0) return kInf;
  if (std::isinf(b)) return std::pow(a, k) / -k;
  return std::pow(a, k) * std::expm1(k * std::log(b / a)) / k;
}

// Sum of v_i * integral over [lo_i, hi_i) cap [a, b] of s^{k-1} ds.
double piecewise_power_moment(const std::vector<double>& lo, const std::vector<double>& hi,
                              const std::vector<double>& v, double k, double a, double b) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double x = std::max(lo[i], a);
    const double y = std::min(hi[i], b);
    if (!(y > x)) continue;
    total += v[i] * power_moment(k, x, y);
  }
  return total;
}

bool powerlog_converges_at_zero(double k, double gamma) { return k > 0.0 || (k == 0.0 && gamma < -1.0); }
bool powerlog_converges_at_inf(double k, double gamma) { return k < 0.0 || (k == 0.0 && gamma < -1.0); }

double powerlog_moment(const PowerLog& w, double q, double a, double b) {
  if (!(b > a)) return 0.0;
  const double k = q + w.beta + 1.0;
  if (a == 0.0 && !powerlog_converges_at_zero(k, w.gamma)) return kInf;
  if (std::isinf(b) && !powerlog_converges_at_inf(k, w.gamma)) return kInf;
  auto f = [e = q + w.beta, g = w.gamma](double s) { return std::pow(s, e) * std::pow(1.0 + std::abs(std::log(s)), g); };
  quad::Options opt;
  opt.rel_tol = 1e-11;
  double total = 0.0;
  // Split at s = 1 where |log s| has its kink.
  if (a < 1.0) {
    const double top = std::min(b, 1.0);
    total += (a == 0.0 ? quad::integrate_from_zero(f, top, opt) : quad::integrate(f, a, top, opt)).value;
  }
  if (b > 1.0) {
    const double bottom = std::max(a, 1.0);
    total += (std::isinf(b) ? quad::integrate_to_infinity(f, bottom, opt) : quad::integrate(f, bottom, b, opt)).value;
  }
  return total;
}

struct Cells {
  std::vector<double> lo, hi, v;
};

Cells tabulated_cells(const StepFunction& s) {
  Cells c;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    c.lo.push_back(s.cell_start(i));
    c.hi.push_back(s.breakpoints()[i]);
    c.v.push_back(s.values()[i]);
  }
  return c;
}

// w(s) = s^{p-2} v(1/s): v_i on [1/x_i, 1/x_{i-1}), zero below 1/x_n.
Cells reciprocal_cells(const StepFunction& s) {
  Cells c;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    c.lo.push_back(1.0 / s.breakpoints()[i]);
    c.hi.push_back(i == 0 ? kInf : 1.0 / s.cell_start(i));
    c.v.push_back(s.values()[i]);
  }
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Weight::Weight(Family family) : family_(std::move(family)) {
  std::visit(overloaded{
                 [](const Power& w) {
                   if (!std::isfinite(w.beta)) throw std::invalid_argument("power weight: beta must be finite");
                 },
                 [](const PowerLog& w) {
                   if (!std::isfinite(w.beta) || !std::isfinite(w.gamma))
                     throw std::invalid_argument("power-log weight: parameters must be finite");
                 },
                 [](const Tabulated&) {},
                 [](const ReciprocalTabulated& w) {
                   if (!(w.p > 0.0) || !std::isfinite(w.p))
                     throw std::invalid_argument("reciprocal tabulated weight: p must be positive");
                 },
             },
             family_);
}

std::string Weight::describe() const {
  return std::visit(overloaded{
                        [](const Power& w) { return "power:" + fmt(w.beta); },
                        [](const PowerLog& w) { return "powerlog:" + fmt(w.beta) + ":" + fmt(w.gamma); },
                        [](const Tabulated& w) { return "tabulated(" + std::to_string(w.steps.cells()) + " cells)"; },
                        [](const ReciprocalTabulated& w) {
                          return "reciprocal-tabulated(" + std::to_string(w.steps.cells()) + " cells, p=" + fmt(w.p) + ")";
                        },
                    },
                    family_);
}

double Weight::operator()(double s) const {
  return std::visit(overloaded{
                        [s](const Power& w) { return std::pow(s, w.beta); },
                        [s](const PowerLog& w) {
                          return std::pow(s, w.beta) * std::pow(1.0 + std::abs(std::log(s)), w.gamma);
                        },
                        [s](const Tabulated& w) { return w.steps(s); },
                        [s](const ReciprocalTabulated& w) {
                          const double v = w.steps(1.0 / s);
                          return v == 0.0 ? 0.0 : std::pow(s, w.p - 2.0) * v;
                        },
                    },
                    family_);
}

double Weight::moment(double q, double a, double b) const {
  if (!(a >= 0.0) || std::isnan(b)) throw std::invalid_argument("moment: need 0 <= a");
  if (!(b > a)) return 0.0;
  return std::visit(overloaded{
                        [&](const Power& w) { return power_moment(q + w.beta + 1.0, a, b); },
                        [&](const PowerLog& w) { return powerlog_moment(w, q, a, b); },
                        [&](const Tabulated& w) {
                          const Cells c = tabulated_cells(w.steps);
                          return piecewise_power_moment(c.lo, c.hi, c.v, q + 1.0, a, b);
                        },
                        [&](const ReciprocalTabulated& w) {
                          const Cells c = reciprocal_cells(w.steps);
                          return piecewise_power_moment(c.lo, c.hi, c.v, q + w.p - 1.0, a, b);
                        },
                    },
                    family_);
}

double Weight::tail_moment(double p, double t) const { return moment(-p, t, kInf); }

bool Weight::locally_integrable() const {
  return std::visit(overloaded{
                        [](const Power& w) { return w.beta > -1.0; },
                        [](const PowerLog& w) { return powerlog_converges_at_zero(w.beta + 1.0, w.gamma); },
                        [](const Tabulated&) { return true; },
                        [](const ReciprocalTabulated&) { return true; },
                    },
                    family_);
}

std::vector<double> Weight::breakpoints() const {
  return std::visit(overloaded{
                        [](const Power&) { return std::vector<double>{}; },
                        [](const PowerLog&) { return std::vector<double>{1.0}; },
                        [](const Tabulated& w) { return w.steps.breakpoints(); },
                        [](const ReciprocalTabulated& w) {
                          std::vector<double> out;
                          for (auto it = w.steps.breakpoints().rbegin(); it != w.steps.breakpoints().rend(); ++it)
                            out.push_back(1.0 / *it);
                          return out;
                        },
                    },
                    family_);
}

bool Weight::closed_form() const { return !std::holds_alternative<PowerLog>(family_); }

bool operator==(const Weight& a, const Weight& b) {
  if (a.family_.index() != b.family_.index()) return false;
  return std::visit(overloaded{
                        [&](const Power& w) { return w.beta == std::get<Power>(b.family_).beta; },
                        [&](const PowerLog& w) {
                          const auto& o = std::get<PowerLog>(b.family_);
                          return w.beta == o.beta && w.gamma == o.gamma;
                        },
                        [&](const Tabulated& w) { return w.steps == std::get<Tabulated>(b.family_).steps; },
                        [&](const ReciprocalTabulated& w) {
                          const auto& o = std::get<ReciprocalTabulated>(b.family_);
                          return w.steps == o.steps && w.p == o.p;
                        },
                    },
                    a.family_);
}

Weight tilde(const Weight& w, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("tilde: p must be positive");
  return std::visit(overloaded{
                        [p](const Power& f) { return Weight(Power{p - 2.0 - f.beta}); },
                        [p](const PowerLog& f) { return Weight(PowerLog{p - 2.0 - f.beta, f.gamma}); },
                        [p](const Tabulated& f) { return Weight(ReciprocalTabulated{f.steps, p}); },
                        [p](const ReciprocalTabulated& f) {
                          if (f.p != p)
                            throw std::invalid_argument("tilde: reciprocal tabulated weight built for a different p");
                          return Weight(Tabulated{f.steps});
                        },
                    },
                    w.family());
}

CoupleConfig corollary_couple(double p, double alpha) {
  return CoupleConfig{p, Weight::power(0.0), p, Weight::power(-alpha)};
}

CoupleConfig tilde_couple(const CoupleConfig& cfg) {
  return CoupleConfig{cfg.p0, tilde(cfg.w0, cfg.p0), cfg.p1, tilde(cfg.w1, cfg.p1)};
}

// ---------------------------------------------------------------------------
// Grid scans. Primitives are recomputed by quadrature so that grid verdicts do
// not share code with the closed forms they are compared against.

namespace {

quad::Options scan_quad() {
  quad::Options o;
  o.rel_tol = 1e-11;
  return o;
}

std::vector<double> sorted_cuts(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

double head_integral(const quad::Integrand& f, double b, const std::vector<double>& cuts) {
  const auto opt = scan_quad();
  auto first = std::upper_bound(cuts.begin(), cuts.end(), 0.0);
  const double c0 = (first != cuts.end() && *first < b) ? *first : b;
  const auto head = quad::integrate_from_zero(f, c0, opt);
  if (head.divergent) return kInf;
  if (c0 >= b) return head.value;
  return head.value + quad::integrate_pieces(f, c0, b, cuts, opt).value;
}

double tail_integral(const quad::Integrand& f, double a, const std::vector<double>& cuts) {
  const auto opt = scan_quad();
  const double cmax = cuts.empty() ? a : std::max(a, cuts.back());
  double mid = 0.0;
  if (cmax > a) mid = quad::integrate_pieces(f, a, cmax, cuts, opt).value;
  const auto tail = quad::integrate_to_infinity(f, cmax, opt);
  if (tail.divergent) return kInf;
  return mid + tail.value;
}

std::vector<double> cumulative_head(const quad::Integrand& f, std::span<const double> t,
                                    const std::vector<double>& cuts) {
  std::vector<double> out(t.size());
  if (t.empty()) return out;
  out[0] = head_integral(f, t[0], cuts);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + quad::integrate_pieces(f, t[k - 1], t[k], cuts, scan_quad()).value;
  return out;
}

std::vector<double> cumulative_tail(const quad::Integrand& f, std::span<const double> t,
                                    const std::vector<double>& cuts) {
  std::vector<double> out(t.size());
  if (t.empty()) return out;
  const std::size_t n = t.size();
  out[n - 1] = tail_integral(f, t[n - 1], cuts);
  for (std::size_t k = n - 1; k-- > 0;)
    out[k] = out[k + 1] + quad::integrate_pieces(f, t[k], t[k + 1], cuts, scan_quad()).value;
  return out;
}

ConditionVerdict sup_verdict(std::span<const double> t, const std::vector<double>& ratio, double max_constant,
                             const std::string& what) {
  ConditionVerdict v;
  v.method = Method::grid;
  v.witness_constant = 0.0;
  v.witness_t = t.empty() ? 0.0 : t[0];
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::isnan(ratio[k])) continue;
    if (ratio[k] > v.witness_constant) {
      v.witness_constant = ratio[k];
      v.witness_t = t[k];
    }
  }
  v.holds = std::isfinite(v.witness_constant) && v.witness_constant <= max_constant;
  if (!std::isfinite(v.witness_constant))
    v.reason = what + " is infinite at t = " + fmt(v.witness_t);
  else if (!v.holds)
    v.reason = what + " exceeds " + fmt(max_constant);
  else
    v.reason = "sup of " + what + " over the grid";
  return v;
}

void require_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be a positive real");
}

void require_local_integrability(const Weight& w) {
  if (!w.locally_integrable())
    throw std::domain_error("invalid weight " + w.describe() + ": W diverges at 0 (not locally integrable)");
}

bool use_closed(const Weight& w, Strategy s) {
  const bool closed = std::holds_alternative<Power>(w.family());
  if (s == Strategy::closed_form && !closed)
    throw std::invalid_argument("closed form only available for power weights");
  return s == Strategy::closed_form || (s == Strategy::automatic && closed);
}

ConditionVerdict balance_grid(const Weight& w, double p, bool reverse, const ScanOptions& opt) {
  const Grid grid = Grid::log_spaced(opt.lo, opt.hi, opt.points);
  const auto t = grid.points();
  const auto cuts = w.breakpoints();
  auto wf = [&w](double s) { return w(s); };
  auto tailf = [&w, p](double s) { return std::pow(s, -p) * w(s); };
  const auto W = cumulative_head(wf, t, cuts);
  if (!std::isfinite(W[0])) throw std::domain_error("invalid weight " + w.describe() + ": W diverges at 0");
  const auto Psi = cumulative_tail(tailf, t, cuts);
  std::vector<double> ratio(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double lhs = std::pow(t[k], p) * Psi[k];
    const double num = reverse ? W[k] : lhs;
    const double den = reverse ? lhs : W[k];
    if (!std::isfinite(lhs)) ratio[k] = kInf;
    else if (den == 0.0) ratio[k] = num == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
    else ratio[k] = num / den;
  }
  return sup_verdict(t, ratio, opt.max_constant, reverse ? "W(t) / (t^p Psi(t))" : "t^p Psi(t) / W(t)");
}

}  // namespace

ConditionVerdict check_Bp(const Weight& w, double p, Strategy s, const ScanOptions& opt) {
  require_p(p);
  require_local_integrability(w);
  if (!use_closed(w, s)) return balance_grid(w, p, false, opt);
  const double beta = std::get<Power>(w.family()).beta;
  ConditionVerdict v;
  v.method = Method::closed_form;
  v.witness_t = 1.0;
  if (beta < p - 1.0) {
    v.holds = true;
    v.witness_constant = (beta + 1.0) / (p - 1.0 - beta);
    v.reason = "t^p Psi(t) / W(t) is constant";
  } else {
    v.witness_constant = kInf;
    v.reason = "tail integral diverges (beta >= p - 1)";
  }
  return v;
}

ConditionVerdict check_RBp(const Weight& w, double p, Strategy s, const ScanOptions& opt) {
  require_p(p);
  require_local_integrability(w);
  if (!use_closed(w, s)) return balance_grid(w, p, true, opt);
  const double beta = std::get<Power>(w.family()).beta;
  ConditionVerdict v;
  v.method = Method::closed_form;
  v.witness_t = 1.0;
  if (beta < p - 1.0) {
    v.holds = true;
    v.witness_constant = (p - 1.0 - beta) / (beta + 1.0);
    v.reason = "W(t) / (t^p Psi(t)) is constant";
  } else {
    v.witness_constant = kInf;
    v.reason = "tail integral diverges (beta >= p - 1)";
  }
  return v;
}

ConditionVerdict check_delta2(const Weight& w, Strategy s, const ScanOptions& opt) {
  require_local_integrability(w);
  if (use_closed(w, s)) {
    const double beta = std::get<Power>(w.family()).beta;
    ConditionVerdict v;
    v.method = Method::closed_form;
    v.holds = true;
    v.witness_constant = std::pow(2.0, beta + 1.0);
    v.witness_t = 1.0;
    v.reason = "W(2t) / W(t) is constant";
    return v;
  }
  const Grid grid = Grid::log_spaced(opt.lo, opt.hi, opt.points);
  const auto t = grid.points();
  const auto cuts = w.breakpoints();
  auto wf = [&w](double x) { return w(x); };
  const auto W = cumulative_head(wf, t, cuts);
  std::vector<double> ratio(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double inc = quad::integrate_pieces(wf, t[k], 2.0 * t[k], cuts, scan_quad()).value;
    if (W[k] == 0.0) ratio[k] = inc == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
    else ratio[k] = 1.0 + inc / W[k];
  }
  return sup_verdict(t, ratio, opt.max_constant, "W(2t) / W(t)");
}

EvaluableFunction psi(const Weight& w, double p) {
  require_p(p);
  if (!std::isfinite(w.tail_moment(p, 1.0))) {
    std::string why = "tail moment of " + w.describe() + " diverges for p = " + fmt(p);
    if (std::holds_alternative<Power>(w.family())) why += " (power weights need beta < p - 1)";
    throw std::domain_error(why);
  }
  if (const auto* pw = std::get_if<Power>(&w.family())) {
    const double beta = pw->beta;
    return EvaluableFunction(
        [beta, p](double t) { return std::pow(std::pow(t, beta + 1.0 - p) / (p - 1.0 - beta), 1.0 / p); },
        Shape::non_increasing, {}, "psi");
  }
  return EvaluableFunction([w, p](double t) { return std::pow(w.tail_moment(p, t), 1.0 / p); },
                           Shape::non_increasing, {}, "psi");
}

EvaluableFunction fundamental(const Weight& w, double p) {
  require_p(p);
  require_local_integrability(w);
  return EvaluableFunction([w, p](double t) { return std::pow(w.primitive(t), 1.0 / p); },
                           Shape::non_decreasing, {}, "phi");
}

bool psi_infinite_at_zero(const Weight& w, double p) {
  require_p(p);
  return std::isinf(w.moment(-p, 0.0, 1.0));
}

EvaluableFunction theta(const CoupleConfig& cfg) {
  auto a = psi(cfg.w0, cfg.p0);
  auto b = psi(cfg.w1, cfg.p1);
  return EvaluableFunction([a, b](double t) { return a(t) / b(t); }, Shape::general, {}, "theta");
}

EvaluableFunction sigma(const CoupleConfig& cfg) {
  auto a = fundamental(cfg.w0, cfg.p0);
  auto b = fundamental(cfg.w1, cfg.p1);
  return EvaluableFunction([a, b](double t) { return a(t) / b(t); }, Shape::general, {}, "sigma");
}

ConditionVerdict check_cond1(const CoupleConfig& cfg, Strategy s, const ScanOptions& opt) {
  const auto* a = std::get_if<Power>(&cfg.w0.family());
  const auto* b = std::get_if<Power>(&cfg.w1.family());
  const bool closed = a && b;
  if (s == Strategy::closed_form && !closed) throw std::invalid_argument("closed form only available for power couples");
  const auto psi0 = psi(cfg.w0, cfg.p0);
  const auto psi1 = psi(cfg.w1, cfg.p1);
  if (closed && s != Strategy::grid) {
    ConditionVerdict v;
    v.method = Method::closed_form;
    v.holds = true;
    v.witness_constant = std::max(std::pow(2.0, (cfg.p0 - 1.0 - a->beta) / cfg.p0),
                                  std::pow(2.0, (cfg.p1 - 1.0 - b->beta) / cfg.p1));
    v.witness_t = 1.0;
    v.reason = "psi_i(t) / psi_i(2t) is constant";
    return v;
  }
  const Grid grid = Grid::log_spaced(opt.lo, opt.hi, opt.points);
  const auto t = grid.points();
  std::vector<double> ratio(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double r0 = psi0(t[k]) / psi0(2.0 * t[k]);
    const double r1 = psi1(t[k]) / psi1(2.0 * t[k]);
    ratio[k] = std::max(r0, r1);
  }
  return sup_verdict(t, ratio, opt.max_constant, "psi_i(t) / psi_i(2t)");
}

std::optional<double> cond3_eps_limit(const CoupleConfig& cfg) {
  const auto* a = std::get_if<Power>(&cfg.w0.family());
  const auto* b = std::get_if<Power>(&cfg.w1.family());
  if (!a || !b) return std::nullopt;
  const double a0 = (a->beta + 1.0 - cfg.p0) / cfg.p0;
  const double a1 = (b->beta + 1.0 - cfg.p1) / cfg.p1;
  if (!(a0 < 0.0)) return std::nullopt;
  return a1 / a0 - 1.0;
}

ConditionVerdict quasi_monotone(const EvaluableFunction& g, const Grid& grid, double threshold) {
  ConditionVerdict v;
  v.method = Method::grid;
  v.witness_constant = 1.0;
  const auto t = grid.points();
  v.witness_t = t.empty() ? 0.0 : t[0];
  double running = 0.0;
  for (double x : t) {
    const double gx = g(x);
    running = std::max(running, gx);
    const double c = gx > 0.0 ? running / gx : (running > 0.0 ? kInf : 1.0);
    if (c > v.witness_constant) {
      v.witness_constant = c;
      v.witness_t = x;
    }
  }
  v.holds = std::isfinite(v.witness_constant) && v.witness_constant <= threshold;
  v.reason = v.holds ? "g(s) <= C g(t) for grid s <= t" : "C_qm exceeds threshold " + fmt(threshold);
  return v;
}

ConditionVerdict check_cond3(const CoupleConfig& cfg, double eps, Strategy s, const ScanOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("cond3: eps must be positive");
  const auto limit = cond3_eps_limit(cfg);
  if (s == Strategy::closed_form && !limit) throw std::invalid_argument("closed form only available for power couples");
  const auto psi0 = psi(cfg.w0, cfg.p0);
  const auto th = theta(cfg);
  if (limit && s != Strategy::grid) {
    ConditionVerdict v;
    v.method = Method::closed_form;
    v.witness_t = 1.0;
    // theta * psi_0^eps is a pure power; its exponent is >= 0 iff eps <= limit.
    v.holds = eps <= *limit * (1.0 + 1e-12);
    v.witness_constant = v.holds ? 1.0 : kInf;
    v.reason = v.holds ? "theta psi_0^eps is a non-decreasing power" : "theta psi_0^eps is a decreasing power";
    return v;
  }
  EvaluableFunction g([th, psi0, eps](double t) { return th(t) * std::pow(psi0(t), eps); }, Shape::general);
  return quasi_monotone(g, Grid::log_spaced(opt.lo, opt.hi, opt.points), opt.qm_threshold);
}

ConditionVerdict check_ratio_monotone(const EvaluableFunction& phi0, const EvaluableFunction& phi1,
                                      double eps, const Grid& grid, double qm_threshold) {
  if (!(eps > 0.0)) throw std::invalid_argument("ratio_monotone: eps must be positive");
  EvaluableFunction g([phi0, phi1, eps](double t) {
    const double b = phi1(t);
    return phi0(t) / b / std::pow(b, eps);
  }, Shape::general);
  return quasi_monotone(g, grid, qm_threshold);
}

SufCondReport check_sufconds(const CoupleConfig& cfg, const Grid& grid, double max_constant) {
  require_p(cfg.p0);
  require_p(cfg.p1);
  const auto phi0 = fundamental(cfg.w0, cfg.p0);
  const auto phi1 = fundamental(cfg.w1, cfg.p1);
  const auto t = grid.points();
  const auto cuts = sorted_cuts(cfg.w0.breakpoints(), cfg.w1.breakpoints());

  auto first_integrand = [&](double s) {
    const double b = phi1(s);
    const double w = cfg.w0(s);
    return w == 0.0 ? 0.0 : w / std::pow(b, cfg.p0);
  };
  auto second_integrand = [&](double s) {
    const double a = phi0(s);
    const double w = cfg.w1(s);
    return w == 0.0 ? 0.0 : w / std::pow(a, cfg.p1);
  };
  const auto I1 = cumulative_head(first_integrand, t, cuts);
  const auto I2 = cumulative_tail(second_integrand, t, cuts);

  std::vector<double> r1(t.size()), r2(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double sg = phi0(t[k]) / phi1(t[k]);
    r1[k] = std::isfinite(I1[k]) ? I1[k] / std::pow(sg, cfg.p0) : kInf;
    r2[k] = std::isfinite(I2[k]) ? sg * std::pow(I2[k], 1.0 / cfg.p1) : kInf;
  }
  SufCondReport out;
  out.first = sup_verdict(t, r1, max_constant, "integral_0^t phi_1^{-p0} w0 / sigma^p0");
  out.second = sup_verdict(t, r2, max_constant, "sigma (integral_t^inf phi_0^{-p1} w1)^{1/p1}");
  // Small eps makes any bounded-grid ratio look quasi-monotone; stop at 1/4.
  for (double eps : {1.0, 0.5, 0.25}) {
    out.eps = eps;
    out.ratio_monotone = check_ratio_monotone(phi0, phi1, eps, grid);
    if (out.ratio_monotone.holds) break;
  }
  return out;
}

SufCondReport check_sufconds(const CoupleConfig& cfg, const ScanOptions& opt) {
  return check_sufconds(cfg, Grid::log_spaced(opt.lo, opt.hi, opt.points), opt.max_constant);
}

}  // namespace lorentzk
