#include "lorentzk/kfunctional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lorentzk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_non_increasing(const StepFunction& f, const char* what) {
  if (!f.is_non_increasing()) throw std::invalid_argument(std::string(what) + " must be non-increasing");
}

// Value of a non-increasing step function just to the right of t.
double right_limit(const StepFunction& f, double t) {
  const auto& x = f.breakpoints();
  const auto i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
  return i < x.size() ? f.values()[i] : 0.0;
}

// Moves breakpoints within a relative 1e-12 of a reference breakpoint onto it.
StepFunction snap_to(const StepFunction& f, const std::vector<double>& ref) {
  std::vector<double> x = f.breakpoints();
  for (double& b : x) {
    auto it = std::lower_bound(ref.begin(), ref.end(), b * (1.0 - 1e-12));
    if (it != ref.end() && std::abs(*it - b) <= 1e-12 * b) b = *it;
  }
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return f;
  return StepFunction(std::move(x), f.values());
}

double root(double s, double p) { return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p); }

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::truncation: return "truncation";
    case Provenance::decomposition_lemma: return "decomposition-lemma";
    case Provenance::optimizer: return "optimizer";
    case Provenance::manual: return "manual";
  }
  return "?";
}

double k_objective(const KQuery& q, const Decomposition& d) {
  const double a = norm(q.x0, d.f0).value;
  if (d.f1.is_zero()) return a;
  return a + q.t * norm(q.x1, d.f1).value;
}

ExplicitGeneral k_explicit_general(const StepFunction& fstar, double t, const CoupleConfig& cfg, ExplicitForm form) {
  require_non_increasing(fstar, "k_explicit_general: f*");
  if (!(t > 0.0)) throw std::invalid_argument("k_explicit_general: t must be positive");
  ExplicitGeneral out;
  out.sigma = sigma(cfg)(t);
  const LorentzSpace a0{Flavor::lambda, cfg.p0, cfg.w0};
  const LorentzSpace a1{Flavor::lambda, cfg.p1, cfg.w1};
  const NormValue head = truncated_norm({a0, Window::head, t}, fstar);
  NormValue tail;
  if (form == ExplicitForm::integral) {
    tail = truncated_norm({a1, Window::tail, t}, fstar);
  } else {
    // (chi_(t,inf) f*)* (s) = f*(s + t).
    std::vector<double> x, v;
    for (std::size_t i = 0; i < fstar.cells(); ++i) {
      if (fstar.breakpoints()[i] <= t) continue;
      x.push_back(fstar.breakpoints()[i] - t);
      v.push_back(fstar.values()[i]);
    }
    tail = norm(a1, StepFunction(std::move(x), std::move(v)));
  }
  out.head = head.value;
  out.tail = tail.value;
  out.divergent = head.divergent || tail.divergent;
  out.value = out.divergent ? kInf : out.head + out.sigma * out.tail;
  return out;
}

bool SHypotheses::all_hold() const {
  return cond1.holds && rb0.holds && cond3.holds && psi0_infinite && psi1_infinite;
}

std::vector<std::string> SHypotheses::warnings() const {
  std::vector<std::string> w;
  if (!cond1.holds) w.push_back("cond1 (psi_i(t) <= C psi_i(2t)) fails: " + cond1.reason);
  if (!rb0.holds) w.push_back("RB_p0 for w0 fails: " + rb0.reason);
  if (!cond3.holds) w.push_back("cond3 (theta psi_0^eps quasi-monotone) fails: " + cond3.reason);
  if (!psi0_infinite) w.push_back("psi_0(0+) is finite");
  if (!psi1_infinite) w.push_back("psi_1(0+) is finite");
  return w;
}

SHypotheses check_s_hypotheses(const CoupleConfig& cfg, const ScanOptions& opt) {
  SHypotheses h;
  auto guarded = [](auto&& fn, ConditionVerdict& out) {
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = ConditionVerdict{};
      out.witness_constant = kInf;
      out.reason = e.what();
    }
  };
  guarded([&] { return check_cond1(cfg, Strategy::automatic, opt); }, h.cond1);
  guarded([&] { return check_RBp(cfg.w0, cfg.p0, Strategy::automatic, opt); }, h.rb0);
  try {
    h.psi0_infinite = psi_infinite_at_zero(cfg.w0, cfg.p0);
    h.psi1_infinite = psi_infinite_at_zero(cfg.w1, cfg.p1);
  } catch (const std::exception&) {
    h.psi0_infinite = h.psi1_infinite = false;
  }
  const auto limit = cond3_eps_limit(cfg);
  if (limit && *limit > 0.0) {
    h.eps = 0.5 * *limit;
    guarded([&] { return check_cond3(cfg, h.eps, Strategy::automatic, opt); }, h.cond3);
  } else {
    for (double eps : {1.0, 0.5, 0.25}) {
      h.eps = eps;
      guarded([&] { return check_cond3(cfg, eps, Strategy::grid, opt); }, h.cond3);
      if (h.cond3.holds) break;
    }
  }
  return h;
}

ExplicitS k_explicit_s(const StepFunction& f, double t, const CoupleConfig& cfg, const SHypotheses* hyp) {
  if (!(t > 0.0)) throw std::invalid_argument("k_explicit_s: t must be positive");
  ExplicitS out;
  SHypotheses local;
  if (!hyp) {
    local = check_s_hypotheses(cfg);
    hyp = &local;
  }
  out.warnings = hyp->warnings();
  out.theta = theta(cfg)(t);
  const StepFunction fstar = rearrange(f);
  const NormValue head = power_integral({Flavor::s, cfg.p0, cfg.w0}, fstar, 0.0, t);
  const NormValue tail = power_integral({Flavor::s, cfg.p1, cfg.w1}, fstar, t, kInf);
  out.divergent = head.divergent || tail.divergent;
  out.head = root(head.value, cfg.p0);
  out.tail = root(tail.value, cfg.p1);
  out.value = out.divergent ? kInf : out.head + out.theta * out.tail;
  return out;
}

ExplicitS corollary_1(const StepFunction& f, double t, double p, double alpha) {
  return k_explicit_s(f, t, corollary_couple(p, alpha));
}

Decomposition truncation_decomposition(const StepFunction& fstar, double t) {
  require_non_increasing(fstar, "truncation_decomposition: f*");
  if (!(t > 0.0)) throw std::invalid_argument("truncation_decomposition: t must be positive");
  const double level = right_limit(fstar, t);
  auto [a, b] = split_monotone(fstar.values(), std::vector<double>(fstar.cells(), level));
  return Decomposition{StepFunction(fstar.breakpoints(), std::move(a)),
                       StepFunction(fstar.breakpoints(), std::move(b)), Provenance::truncation};
}

Decomposition decomposition_lemma(const StepFunction& f, const StepFunction& g, const StepFunction& h) {
  require_non_increasing(f, "decomposition_lemma: f");
  require_non_increasing(g, "decomposition_lemma: g");
  require_non_increasing(h, "decomposition_lemma: h");
  std::vector<double> x;
  {
    const auto xfg = merged_breakpoints(f, g);
    const auto& xh = h.breakpoints();
    std::merge(xfg.begin(), xfg.end(), xh.begin(), xh.end(), std::back_inserter(x));
    x.erase(std::unique(x.begin(), x.end()), x.end());
  }
  const auto fv = sample_cells(f, x);
  const auto gv = sample_cells(g, x);
  const auto hv = sample_cells(h, x);
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k)
    if (fv[k] > gv[k] + hv[k] + 1e-12 * std::max(1.0, fv[k]))
      throw std::domain_error("decomposition_lemma: f > g + h on the cell ending at " + std::to_string(x[k]));

  std::vector<double> want(n);
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    running = std::max(running, std::max(0.0, fv[k] - gv[k]));
    want[k] = running;
  }
  auto [f0, f1] = split_monotone(fv, want);
  for (std::size_t k = 0; k < n; ++k) {
    const double tol = 1e-12 * std::max(1.0, fv[k]);
    if (f0[k] > gv[k] + tol || f1[k] > hv[k] + tol)
      throw std::logic_error("decomposition_lemma: majorant postcondition violated");
    if (k + 1 < n && (f0[k + 1] > f0[k] + tol || f1[k + 1] > f1[k] + tol))
      throw std::logic_error("decomposition_lemma: monotonicity postcondition violated");
  }
  return Decomposition{StepFunction(x, std::move(f0)), StepFunction(x, std::move(f1)),
                       Provenance::decomposition_lemma};
}

SCoupleOracle k_oracle_s_couple(const KQuery& q, const OracleOptions& opt) {
  if (q.x0.flavor != Flavor::s || q.x1.flavor != Flavor::s)
    throw std::invalid_argument("k_oracle_s_couple: both spaces must be of type S");
  SCoupleOracle out;
  const StepFunction fstar = rearrange(q.f);
  if (fstar.is_zero()) return out;

  KQuery direct = q;
  direct.f = fstar;
  out.direct_result = k_oracle(direct, Grid({1.0}), true, opt);
  out.direct = out.direct_result.value;

  const StepFunction g = TImage(fstar).as_step();
  const KQuery mapped{g, q.t, {Flavor::lambda, q.x0.p, tilde(q.x0.w, q.x0.p)},
                      {Flavor::lambda, q.x1.p, tilde(q.x1.w, q.x1.p)}};
  const Grid grid = default_oracle_grid(g, opt.cells);
  out.mapped_result = k_oracle(mapped, grid, false, opt);
  out.mapped = out.mapped_result.value;
  out.mapped_monotone = k_oracle(mapped, grid, true, opt).value;
  out.approximate = out.direct_result.approximate || out.mapped_result.approximate;
  return out;
}

NearOptimal near_optimal_s_decomposition(const StepFunction& f, double t, const CoupleConfig& cfg,
                                         const Decomposition& seed) {
  NearOptimal out;
  out.decomposition.provenance = Provenance::decomposition_lemma;
  const StepFunction fstar = rearrange(f);
  if (fstar.is_zero()) return out;
  require_non_increasing(seed.f0, "near_optimal_s_decomposition: seed f0");
  require_non_increasing(seed.f1, "near_optimal_s_decomposition: seed f1");

  const StepFunction g = TImage(fstar).as_step();
  // G(u) = (2/u) f0**(1/u) = 2 * integral_0^{1/u} f0, sampled at right cell ends
  // where the non-increasing G is smallest on each cell of g.
  std::vector<double> gmaj(g.cells());
  for (std::size_t k = 0; k < g.cells(); ++k) gmaj[k] = 2.0 * seed.f0.integral_to(1.0 / g.breakpoints()[k]);
  const StepFunction big_g(g.breakpoints(), gmaj);
  const Decomposition split = decomposition_lemma(g, big_g, g);

  // H(u) = T f1*(u/2).
  const StepFunction th = TImage(seed.f1).as_step();
  std::vector<double> hx = th.breakpoints();
  for (double& b : hx) b *= 2.0;
  const StepFunction big_h(std::move(hx), th.values());
  const auto xs = merged_breakpoints(split.f1, big_h);
  const auto g1v = sample_cells(split.f1, xs);
  const auto hv = sample_cells(big_h, xs);
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (g1v[k] > hv[k] * (1.0 + 1e-9) + 1e-300) out.g1_below_h = false;

  // f* = T g0 + T g1; keep the sum exact by deriving f0 from f1.
  const StepFunction f1 = snap_to(TImage(split.f1).as_step(), fstar.breakpoints());
  const auto x = merged_breakpoints(fstar, f1);
  const auto fv = sample_cells(fstar, x);
  const auto f1v = sample_cells(f1, x);
  std::vector<double> a(x.size()), b(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto [u, r] = split_exact(fv[k], std::min(fv[k], f1v[k]));
    b[k] = u;
    a[k] = r;
  }
  out.decomposition.f0 = StepFunction(x, std::move(a));
  out.decomposition.f1 = StepFunction(x, std::move(b));
  const KQuery q{fstar, t, {Flavor::s, cfg.p0, cfg.w0}, {Flavor::s, cfg.p1, cfg.w1}};
  out.value = k_objective(q, out.decomposition);
  return out;
}

NearOptimal near_optimal_s_decomposition(const StepFunction& f, double t, const CoupleConfig& cfg,
                                         const OracleOptions& opt) {
  const KQuery q{rearrange(f), t, {Flavor::s, cfg.p0, cfg.w0}, {Flavor::s, cfg.p1, cfg.w1}};
  if (q.f.is_zero()) return near_optimal_s_decomposition(f, t, cfg, Decomposition{});
  const OracleResult seed = k_oracle(q, Grid({1.0}), true, opt);
  return near_optimal_s_decomposition(f, t, cfg, seed.best);
}

}  // namespace lorentzk
