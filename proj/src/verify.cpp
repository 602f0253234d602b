#include "lorentzk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "lorentzk/lorentz_norms.hpp"
#include "lorentzk/quad.hpp"
#include "lorentzk/serialize.hpp"

namespace lorentzk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Uniform {
  std::mt19937_64 rng;
  explicit Uniform(std::uint64_t seed) : rng(seed) {}
  double operator()() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
};

// Cells from lengths, values as given.
StepFunction from_lengths(const std::vector<double>& len, std::vector<double> v) {
  std::vector<double> x(len.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < len.size(); ++i) x[i] = acc += len[i];
  return StepFunction(std::move(x), std::move(v));
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

double safe_ratio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  return a / b;
}

bool usable(double r) { return std::isfinite(r) && r > 0.0; }

Band band_of(const std::vector<RatioRecord>& recs, bool fine) {
  std::vector<double> r;
  for (const auto& x : recs) {
    const double v = fine ? x.ratio_fine : x.ratio;
    if (usable(v)) r.push_back(v);
  }
  return make_band(std::move(r));
}

Band extra_band(const std::vector<RatioRecord>& recs, const std::string& num, const std::string& den) {
  std::vector<double> r;
  for (const auto& x : recs) {
    const double v = safe_ratio(x.extra(num), x.extra(den));
    if (usable(v)) r.push_back(v);
  }
  return make_band(std::move(r));
}

void finish(EquivalenceReport& rep, std::size_t m, bool refine) {
  rep.band = band_of(rep.records, false);
  rep.hypotheses_hold = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(),
                                    [](const HypothesisRecord& h) { return h.verdict.holds; });
  if (refine) {
    Refinement& r = rep.refinement;
    r.available = true;
    r.m = m;
    r.m_fine = 2 * m;
    r.constant = rep.band.constant;
    r.constant_fine = band_of(rep.records, true).constant;
    r.drift = r.constant > 0.0 ? std::abs(r.constant_fine - r.constant) / r.constant : 0.0;
  }
}

ConditionVerdict flag_verdict(bool holds, const std::string& reason) {
  ConditionVerdict v;
  v.holds = holds;
  v.method = Method::closed_form;
  v.witness_constant = holds ? 1.0 : kInf;
  v.reason = reason;
  return v;
}

template <class Fn>
ConditionVerdict guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    ConditionVerdict v;
    v.witness_constant = kInf;
    v.reason = e.what();
    return v;
  }
}

std::string describe_couple(const CoupleConfig& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "p0=%g;p1=%g", c.p0, c.p1);
  return std::string(buf) + ";w0=" + c.w0.describe() + ";w1=" + c.w1.describe();
}

// Points away from f*'s breakpoints (where T o T and f* may differ by convention).
std::vector<double> continuity_points(const StepFunction& fstar, std::size_t count) {
  const auto& x = fstar.breakpoints();
  const Grid g = Grid::log_spaced(x.front() * 1e-2, x.back() * 1e2, count);
  std::vector<double> out;
  out.reserve(count);
  for (double t : g.points()) {
    const auto it = std::lower_bound(x.begin(), x.end(), t * (1.0 - 1e-9));
    if (it != x.end() && std::abs(*it - t) <= 1e-9 * t) t *= 1.0 + 1e-7;
    out.push_back(t);
  }
  return out;
}

RatioRecord identity_record(const std::string& tag, const std::string& id, double t, double lhs, double rhs) {
  RatioRecord r;
  r.theorem = tag;
  r.f_id = id;
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.ratio_fine = kNaN;
  r.extras = {{"abs_error", std::abs(lhs - rhs)},
              {"rel_error", rhs == 0.0 ? std::abs(lhs) : std::abs(lhs - rhs) / std::abs(rhs)}};
  return r;
}

std::vector<RatioRecord> identities_for(const CorpusEntry& e, const CorpusEntry& partner, const IdentityOptions& opt) {
  std::vector<RatioRecord> out;
  const StepFunction fstar = rearrange(e.f);
  if (fstar.is_zero()) return out;
  const TImage img(fstar);
  const TImage twice(img.as_step());
  const MaximalFunction mf(fstar);
  const auto pts = continuity_points(fstar, opt.sample_points);

  // T(T f*) = f*: keep the worst point.
  {
    double worst = -1.0, wt = 0.0;
    for (double t : pts) {
      const double err = std::abs(twice(t) - fstar(t));
      if (err > worst) worst = err, wt = t;
    }
    out.push_back(identity_record("T-idempotent", e.id, wt, twice(wt), fstar(wt)));
  }
  // T f*(t) = (1/t)(f**(1/t) - f*(1/t)), with u = 1/t a continuity point.
  {
    double worst = -1.0, wu = 0.0;
    for (double u : pts) {
      const double err = std::abs(img(1.0 / u) - u * (mf(u) - fstar(u)));
      if (err > worst) worst = err, wu = u;
    }
    out.push_back(identity_record("T-star", e.id, 1.0 / wu, img(1.0 / wu), wu * (mf(wu) - fstar(wu))));
  }

  NormOptions no;
  no.rel_tol = opt.rel_tol;
  const auto& x = fstar.breakpoints();
  const double windows[] = {0.5 * x.front(), std::sqrt(x.front() * x.back()), 2.0 * x.back()};
  for (const Weight& w : opt.weights) {
    const std::string wflag = "w=" + w.describe();
    auto push = [&](const std::string& tag, double t, const SidePair& sp) {
      out.push_back(identity_record(tag, e.id, t, sp.lhs, sp.rhs));
      out.back().flags.push_back(wflag);
    };
    push("S-Lambda", kInf, s_lambda_identity_check(fstar, opt.p, w, kInf, Window::head, no));
    for (double t : windows) {
      push("S-Lambda-head", t, s_lambda_identity_check(fstar, opt.p, w, t, Window::head, no));
      push("S-Lambda-tail", t, s_lambda_identity_check(fstar, opt.p, w, t, Window::tail, no));
    }
  }

  // f**(t) = integral_t^inf (f** - f*)(s) / s ds, the right side by quadrature.
  quad::Options qo;
  qo.rel_tol = opt.rel_tol * 1e-2;
  for (double t : Grid::log_spaced(0.1 * x.front(), 10.0 * x.back(), 15)) {
    auto integrand = [&](double s) { return mf.oscillation(s) / s; };
    double rhs = 0.0;
    const double end = std::max(t, x.back());
    if (end > t) rhs += quad::integrate_pieces(integrand, t, end, x, qo).value;
    rhs += quad::integrate_to_infinity(integrand, end, qo).value;
    out.push_back(identity_record("reconstruction", e.id, t, mf(t), rhs));
  }

  // integral T f* g* = integral T g* f*.
  {
    const StepFunction gstar = rearrange(partner.f);
    const TImage gimg(gstar);
    auto pairing = [&](const TImage& a, const StepFunction& b) {
      std::vector<double> cuts = a.jump_points();
      cuts.insert(cuts.end(), b.breakpoints().begin(), b.breakpoints().end());
      std::sort(cuts.begin(), cuts.end());
      return quad::integrate_pieces([&](double s) { return a(s) * b(s); }, 0.0, b.support_end(), cuts, qo).value;
    };
    RatioRecord r = identity_record("self-adjoint", e.id, 0.0, pairing(img, gstar), pairing(gimg, fstar));
    r.flags.push_back("partner=" + partner.id);
    out.push_back(std::move(r));
  }
  return out;
}

RatioRecord make_record(const std::string& tag, const std::string& id, double t) {
  RatioRecord r;
  r.theorem = tag;
  r.f_id = id;
  r.t = t;
  r.ratio = kNaN;
  r.ratio_fine = kNaN;
  return r;
}

void mark_error(RatioRecord& r, const std::exception& e) {
  r.lhs = r.rhs = r.ratio = r.ratio_fine = kNaN;
  r.flags.push_back(std::string("error: ") + e.what());
}

// One S-couple study at K-parameter theta(t): explicit, direct, mapped and the
// near-optimal decomposition. T1.1, T2 and Cor1 read different ratios of it.
RatioRecord s_study(Theorem tag, const CorpusEntry& e, double t, const CoupleConfig& cfg, const SHypotheses& hyp,
                    const SuiteOptions& opt) {
  RatioRecord r = make_record(to_string(tag), e.id, t);
  try {
    const ExplicitS ex = k_explicit_s(e.f, t, cfg, &hyp);
    const double tau = ex.theta;
    const KQuery q{e.f, tau, {Flavor::s, cfg.p0, cfg.w0}, {Flavor::s, cfg.p1, cfg.w1}};
    const SCoupleOracle sc = k_oracle_s_couple(q, opt.oracle);
    SCoupleOracle fine;
    if (opt.refine) {
      OracleOptions o2 = opt.oracle;
      o2.cells = 2 * opt.oracle.cells;
      fine = k_oracle_s_couple(q, o2);
    }
    const NearOptimal near = near_optimal_s_decomposition(e.f, tau, cfg, sc.direct_result.best);

    r.extras = {{"theta", tau},
                {"explicit", ex.value},
                {"direct", sc.direct},
                {"mapped", sc.mapped},
                {"mapped_monotone", sc.mapped_monotone},
                {"near_optimal", near.value}};
    if (opt.refine)
      r.extras.insert(r.extras.end(), {{"direct_fine", fine.direct},
                                       {"mapped_fine", fine.mapped},
                                       {"mapped_monotone_fine", fine.mapped_monotone}});
    if (tag == Theorem::t11) {
      r.lhs = sc.direct;
      r.rhs = sc.mapped;
      if (opt.refine) r.ratio_fine = safe_ratio(fine.direct, fine.mapped);
    } else {
      r.lhs = ex.value;
      r.rhs = sc.direct;
      if (opt.refine) r.ratio_fine = safe_ratio(ex.value, fine.direct);
    }
    r.ratio = safe_ratio(r.lhs, r.rhs);
    if (sc.approximate || (opt.refine && fine.approximate)) r.flags.push_back("approximate");
    if (ex.divergent) r.flags.push_back("divergent");
    if (!near.g1_below_h) r.flags.push_back("g1-above-h");
    if (!hyp.all_hold()) r.flags.push_back("hypothesis-violating");
  } catch (const std::exception& ex) {
    mark_error(r, ex);
  }
  return r;
}

RatioRecord general_study(const CorpusEntry& e, double t, const CoupleConfig& cfg, bool hyp_ok,
                          const SuiteOptions& opt) {
  RatioRecord r = make_record(to_string(Theorem::general_k), e.id, t);
  try {
    const StepFunction fstar = rearrange(e.f);
    const ExplicitGeneral ex = k_explicit_general(fstar, t, cfg, ExplicitForm::integral);
    const ExplicitGeneral exn = k_explicit_general(fstar, t, cfg, ExplicitForm::norm);
    const KQuery q{fstar, ex.sigma, {Flavor::lambda, cfg.p0, cfg.w0}, {Flavor::lambda, cfg.p1, cfg.w1}};
    const OracleResult o = k_oracle(q, default_oracle_grid(fstar, opt.oracle.cells), false, opt.oracle);
    r.lhs = ex.value;
    r.rhs = o.value;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.extras = {{"sigma", ex.sigma}, {"explicit", ex.value}, {"explicit_norm_form", exn.value}, {"oracle", o.value}};
    bool approx = o.approximate;
    if (opt.refine) {
      OracleOptions o2 = opt.oracle;
      o2.cells = 2 * opt.oracle.cells;
      const OracleResult f2 = k_oracle(q, default_oracle_grid(fstar, o2.cells), false, o2);
      r.ratio_fine = safe_ratio(ex.value, f2.value);
      r.extras.emplace_back("oracle_fine", f2.value);
      approx = approx || f2.approximate;
    }
    if (approx) r.flags.push_back("approximate");
    if (ex.divergent) r.flags.push_back("divergent");
    if (!hyp_ok) r.flags.push_back("hypothesis-violating");
  } catch (const std::exception& ex) {
    mark_error(r, ex);
  }
  return r;
}

RatioRecord gamma_study(const CorpusEntry& e, double p, const Weight& w, bool hyp_ok) {
  RatioRecord r = make_record(to_string(Theorem::gamma_eq_s), e.id, p);
  try {
    const NormValue g = norm({Flavor::gamma, p, w}, e.f);
    const NormValue s = norm({Flavor::s, p, w}, e.f);
    r.lhs = g.value;
    r.rhs = s.value;
    r.ratio = safe_ratio(g.value, s.value);
    r.extras = {{"p", p}};
    if (g.divergent || s.divergent) r.flags.push_back("divergent");
    if (!hyp_ok) r.flags.push_back("hypothesis-violating");
  } catch (const std::exception& ex) {
    mark_error(r, ex);
  }
  return r;
}

Json band_json(const Band& b) {
  return Json{{"count", b.count},
              {"min", number(b.min)},
              {"max", number(b.max)},
              {"median", number(b.median)},
              {"constant", number(b.constant)}};
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Corpus make_corpus(std::uint64_t seed, std::size_t size) {
  Corpus c;
  c.seed = seed;
  Uniform u(seed);
  static const char* kinds[] = {"indicator", "geometric", "arithmetic", "monotone", "sum"};
  for (std::size_t i = 0; i < size; ++i) {
    StepFunction f;
    switch (i % 5) {
      case 0:
        f = StepFunction::indicator(0.0, std::exp(u(std::log(0.25), std::log(8.0))), u(0.5, 3.0));
        break;
      case 1: {
        const std::size_t k = 2 + u.below(5);
        const double r = u(0.3, 0.8), h = u(1.0, 4.0);
        std::vector<double> len(k), v(k);
        for (std::size_t j = 0; j < k; ++j) len[j] = u(0.2, 2.0), v[j] = h * std::pow(r, double(j));
        f = from_lengths(len, v);
        break;
      }
      case 2: {
        const std::size_t k = 2 + u.below(5);
        const double h = u(0.5, 2.0);
        std::vector<double> len(k), v(k);
        for (std::size_t j = 0; j < k; ++j) len[j] = u(0.2, 2.0), v[j] = h * double(k - j);
        f = from_lengths(len, v);
        break;
      }
      case 3: {
        const std::size_t k = 2 + u.below(7);
        std::vector<double> len(k), v(k);
        for (std::size_t j = 0; j < k; ++j) len[j] = u(0.05, 3.0), v[j] = u(0.1, 5.0);
        std::sort(v.begin(), v.end(), std::greater<>());
        f = from_lengths(len, v);
        break;
      }
      default: {
        const std::size_t k = 2 + u.below(3);
        for (std::size_t j = 0; j < k; ++j) {
          const double a = u(0.0, 4.0), b = a + u(0.2, 3.0);
          f = add(f, StepFunction::indicator(a, b, u(0.5, 2.0)));
        }
        break;
      }
    }
    c.functions.push_back({std::string(kinds[i % 5]) + "-" + std::to_string(i), std::move(f)});
  }
  return c;
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::identities: return "identities";
    case Theorem::t11: return "T1.1";
    case Theorem::general_k: return "GeneralK";
    case Theorem::t2: return "T2";
    case Theorem::cor1: return "Cor1";
    case Theorem::gamma_eq_s: return "GammaEqS";
  }
  return "?";
}

Theorem parse_theorem(const std::string& s) {
  std::string k;
  for (char c : s)
    if (c != '.' && c != '-' && c != '_') k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "identities" || k == "identity") return Theorem::identities;
  if (k == "t11") return Theorem::t11;
  if (k == "generalk") return Theorem::general_k;
  if (k == "t2") return Theorem::t2;
  if (k == "cor1") return Theorem::cor1;
  if (k == "gammaeqs") return Theorem::gamma_eq_s;
  throw std::invalid_argument("unknown suite \"" + s + "\" (identities, T1.1, GeneralK, T2, Cor1, GammaEqS)");
}

double RatioRecord::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return kNaN;
}

Band make_band(std::vector<double> ratios) {
  Band b;
  b.count = ratios.size();
  if (ratios.empty()) return b;
  std::sort(ratios.begin(), ratios.end());
  b.min = ratios.front();
  b.max = ratios.back();
  const std::size_t n = ratios.size();
  b.median = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  b.constant = std::max(b.max, 1.0 / b.min);
  return b;
}

std::size_t thread_count() {
  if (const char* env = std::getenv("LORENTZK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EquivalenceReport run_identity_suite(const Corpus& corpus, const IdentityOptions& opt) {
  EquivalenceReport rep;
  rep.theorem = to_string(Theorem::identities);
  rep.seed = corpus.seed;
  Json weights = Json::array();
  for (const auto& w : opt.weights) weights.push_back(to_json(w));
  rep.config = Json{{"p", opt.p}, {"weights", weights}, {"sample_points", opt.sample_points},
                    {"rel_tol", opt.rel_tol}, {"corpus_size", corpus.functions.size()}}
                   .dump();
  rep.notes.push_back("identities hold for every non-increasing step function; no weight hypotheses apply");

  const std::size_t n = corpus.functions.size();
  std::vector<std::vector<RatioRecord>> parts(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      parts[i] = identities_for(corpus.functions[i], corpus.functions[(i + 1) % n], opt);
    } catch (const std::exception& e) {
      RatioRecord r = make_record("identities", corpus.functions[i].id, 0.0);
      mark_error(r, e);
      parts[i] = {r};
    }
  });
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(rep.records));
  finish(rep, 0, false);
  for (const char* tag : {"T-idempotent", "T-star", "S-Lambda", "S-Lambda-head", "S-Lambda-tail", "reconstruction",
                          "self-adjoint"}) {
    std::vector<double> r;
    for (const auto& x : rep.records)
      if (x.theorem == tag && usable(x.ratio)) r.push_back(x.ratio);
    rep.extra_bands.emplace_back(tag, make_band(std::move(r)));
  }
  return rep;
}

CoupleConfig default_couple(Theorem t, double p, double alpha) {
  if (t == Theorem::general_k) return CoupleConfig{p, Weight::power(alpha), p, Weight::power(0.0)};
  return corollary_couple(p, alpha);
}

EquivalenceReport run_theorem_suite(Theorem tag, const Corpus& corpus, const SuiteOptions& opt) {
  if (tag == Theorem::identities) return run_identity_suite(corpus);
  EquivalenceReport rep;
  rep.theorem = to_string(tag);
  rep.seed = corpus.seed;
  const CoupleConfig& cfg = opt.cfg;
  Json config{{"couple", to_json(cfg)},
              {"tgrid", to_json(opt.tgrid)},
              {"cells", opt.oracle.cells},
              {"oracle_seed", opt.oracle.seed},
              {"refine", opt.refine},
              {"corpus_size", corpus.functions.size()}};
  if (tag == Theorem::gamma_eq_s) config["exponents"] = opt.gamma_exponents;
  rep.config = config.dump();

  const auto& fs = corpus.functions;
  if (tag == Theorem::gamma_eq_s) {
    const auto& ps = opt.gamma_exponents;
    std::vector<bool> ok;
    for (double p : ps) {
      char name[32];
      std::snprintf(name, sizeof name, "RB_p(w0), p=%g", p);
      rep.hypotheses.push_back({name, guarded([&] { return check_RBp(cfg.w0, p); })});
      ok.push_back(rep.hypotheses.back().verdict.holds);
    }
    rep.records.resize(fs.size() * ps.size());
    parallel_for(rep.records.size(), [&](std::size_t k) {
      const std::size_t i = k / ps.size(), j = k % ps.size();
      rep.records[k] = gamma_study(fs[i], ps[j], cfg.w0, ok[j]);
    });
    rep.notes.push_back("the t column holds the exponent p; Gamma >= S holds pointwise, so every ratio is >= 1");
    finish(rep, 0, false);
    return rep;
  }

  const auto ts = opt.tgrid.points();
  rep.records.resize(fs.size() * ts.size());
  if (tag == Theorem::general_k) {
    const SufCondReport sc = check_sufconds(cfg);
    rep.hypotheses = {{"first", sc.first}, {"second", sc.second}, {"ratio_monotone", sc.ratio_monotone}};
    const bool ok = sc.first.holds && sc.second.holds && sc.ratio_monotone.holds;
    parallel_for(rep.records.size(), [&](std::size_t k) {
      rep.records[k] = general_study(fs[k / ts.size()], ts[k % ts.size()], cfg, ok, opt);
    });
    finish(rep, opt.oracle.cells, opt.refine);
    rep.extra_bands.emplace_back("explicit_norm_form/explicit", extra_band(rep.records, "explicit_norm_form", "explicit"));
    rep.notes.push_back("K-parameter sigma(t); lhs explicit formula, rhs non-monotone oracle on the Lambda couple");
    return rep;
  }

  const SHypotheses hyp = check_s_hypotheses(cfg);
  rep.hypotheses = {{"cond1", hyp.cond1},
                    {"RB_p0(w0)", hyp.rb0},
                    {"cond3", hyp.cond3},
                    {"psi0(0+)=inf", flag_verdict(hyp.psi0_infinite, "integral_0^1 s^-p0 w0 diverges")},
                    {"psi1(0+)=inf", flag_verdict(hyp.psi1_infinite, "integral_0^1 s^-p1 w1 diverges")}};
  parallel_for(rep.records.size(), [&](std::size_t k) {
    rep.records[k] = s_study(tag, fs[k / ts.size()], ts[k % ts.size()], cfg, hyp, opt);
  });
  finish(rep, opt.oracle.cells, opt.refine);
  if (tag == Theorem::t11) {
    rep.notes.push_back("K-parameter theta(t); lhs K^d on the S couple, rhs K on the tilde Lambda couple for T f*");
  } else {
    rep.notes.push_back("K-parameter theta(t); lhs explicit formula at t, rhs K^d on the S couple");
    rep.extra_bands.emplace_back("explicit/mapped", extra_band(rep.records, "explicit", "mapped"));
    rep.extra_bands.emplace_back("direct/mapped", extra_band(rep.records, "direct", "mapped"));
  }
  rep.extra_bands.emplace_back("near_optimal/direct", extra_band(rep.records, "near_optimal", "direct"));
  rep.extra_bands.emplace_back("mapped_monotone/mapped", extra_band(rep.records, "mapped_monotone", "mapped"));
  rep.notes.push_back("couple " + describe_couple(cfg));
  return rep;
}

StepFunction log_profile(double length) {
  // Dyadic cells (L 2^{-k-1}, L 2^{-k}] down to 2^-12, value log(L / left end).
  const int depth = static_cast<int>(std::ceil(std::log2(length))) + 12;
  std::vector<double> x, v;
  for (int k = depth; k >= 0; --k) {
    x.push_back(std::ldexp(length, -k));
    v.push_back(double(k + 1) * std::log(2.0));
  }
  return StepFunction(std::move(x), std::move(v));
}

EquivalenceReport run_negative_control(const Weight& w, double p, const std::vector<double>& supports) {
  EquivalenceReport rep;
  rep.theorem = to_string(Theorem::gamma_eq_s) + "-negative";
  Json sj = Json::array();
  for (double s : supports) sj.push_back(s);
  rep.config = Json{{"weight", to_json(w)}, {"p", p}, {"supports", sj}}.dump();
  rep.hypotheses.push_back({"RB_p(w)", guarded([&] { return check_RBp(w, p); })});
  const bool ok = rep.hypotheses.back().verdict.holds;
  for (double s : supports) {
    char id[32];
    std::snprintf(id, sizeof id, "log-profile-%g", s);
    RatioRecord r = gamma_study({id, log_profile(s)}, p, w, ok);
    r.t = s;
    r.flags.push_back("negative-control");
    rep.records.push_back(std::move(r));
  }
  rep.notes.push_back("the t column holds the support length; ratios should grow with it when RB_p fails");
  finish(rep, 0, false);
  return rep;
}

std::string report_json(const EquivalenceReport& r, int indent) {
  Json hyps = Json::array();
  for (const auto& h : r.hypotheses) {
    Json v = to_json(h.verdict);
    v["name"] = h.name;
    hyps.push_back(std::move(v));
  }
  Json recs = Json::array();
  for (const auto& x : r.records) {
    Json extras = Json::object();
    for (const auto& [k, v] : x.extras) extras[k] = number(v);
    recs.push_back(Json{{"theorem", x.theorem},
                        {"f_id", x.f_id},
                        {"t", number(x.t)},
                        {"lhs", number(x.lhs)},
                        {"rhs", number(x.rhs)},
                        {"ratio", number(x.ratio)},
                        {"ratio_fine", number(x.ratio_fine)},
                        {"flags", x.flags},
                        {"extras", std::move(extras)}});
  }
  Json extra = Json::object();
  for (const auto& [k, b] : r.extra_bands) extra[k] = band_json(b);
  Json refinement = nullptr;
  if (r.refinement.available)
    refinement = Json{{"m", r.refinement.m},
                      {"m_fine", r.refinement.m_fine},
                      {"constant", number(r.refinement.constant)},
                      {"constant_fine", number(r.refinement.constant_fine)},
                      {"drift", number(r.refinement.drift)}};
  Json j{{"theorem", r.theorem},
         {"seed", r.seed},
         {"config", Json::parse(r.config.empty() ? "{}" : r.config)},
         {"hypotheses", std::move(hyps)},
         {"hypotheses_hold", r.hypotheses_hold},
         {"band", band_json(r.band)},
         {"refinement", std::move(refinement)},
         {"extra_bands", std::move(extra)},
         {"notes", r.notes},
         {"records", std::move(recs)}};
  return j.dump(indent);
}

void write_csv(std::ostream& os, const EquivalenceReport& r, bool header) {
  if (header) os << "theorem,f_id,t,lhs,rhs,ratio,flags\n";
  for (const auto& x : r.records) {
    std::string flags;
    for (const auto& f : x.flags) flags += (flags.empty() ? "" : ";") + f;
    os << csv_field(x.theorem) << ',' << csv_field(x.f_id) << ',' << fmt17(x.t) << ',' << fmt17(x.lhs) << ','
       << fmt17(x.rhs) << ',' << fmt17(x.ratio) << ',' << csv_field(flags) << '\n';
  }
}

}  // namespace lorentzk
