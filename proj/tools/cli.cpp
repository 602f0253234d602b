#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "lorentzk/kfunctional.hpp"
#include "lorentzk/lorentz_norms.hpp"
#include "lorentzk/serialize.hpp"
#include "lorentzk/verify.hpp"

namespace lorentzk::cli {

namespace {

struct Global {
  std::string format = "text";
  bool strict = false;
};

// A config-file key bound to a flag; the file only fills flags not given on the command line.
struct Bind {
  std::string key;
  CLI::Option* opt;
  std::function<void(const Json&)> set;
};

void apply_config(const std::string& path, const std::vector<Bind>& binds, const std::string& where) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config " + path + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(binds.begin(), binds.end(), [&](const Bind& b) { return b.key == key; });
    if (it == binds.end()) throw std::invalid_argument("unknown field \"" + key + "\" in " + where + " config");
    if (it->opt->count() == 0) it->set(value);
  }
}

template <class T>
Bind bind_key(CLI::Option* opt, const std::string& key, T& target) {
  return {key, opt, [&target, key](const Json& j) {
            if constexpr (std::is_same_v<T, double>)
              target = to_double(j);
            else
              target = j.get<T>();
          }};
}

Json load_weight_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read weight file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed weight file " + path + ": " + e.what());
  }
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("invalid number \"" + s + "\" in " + what);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void require_p(double p, const std::string& what) {
  if (!(p >= 1.0)) throw std::invalid_argument(what + " must be >= 1");
}

Json verdict_json(const std::string& name, const ConditionVerdict& v) {
  Json j = to_json(v);
  j["name"] = name;
  return j;
}

std::string verdict_text(const std::string& name, const ConditionVerdict& v) {
  std::string s = name + ": " + (v.holds ? "holds" : "fails") + ", C = " + format_number(v.witness_constant) +
                  " (" + to_string(v.method) + ")";
  if (!v.reason.empty()) s += ", " + v.reason;
  return s;
}

struct NormArgs {
  std::string flavor = "s";
  double p = 2.0;
  std::string weight = "power:0";
  std::string fn;
  std::string window;
  double t = 0.0;
  std::string config;
};

int cmd_norm(const NormArgs& a, const Global& g, std::ostream& out) {
  const LorentzSpace space{parse_flavor(a.flavor), a.p, parse_weight(a.weight)};
  if (!std::isinf(space.p)) require_p(space.p, "--p");
  const StepFunction f = load_step_function(a.fn);
  NormValue v;
  if (a.window.empty()) {
    v = norm(space, f);
  } else {
    if (!(a.t > 0.0)) throw std::invalid_argument("--window needs --t > 0");
    if (a.window != "head" && a.window != "tail") throw std::invalid_argument("--window must be head or tail");
    v = truncated_norm({space, a.window == "head" ? Window::head : Window::tail, a.t}, rearrange(f));
  }
  bool hyp_ok = true;
  ConditionVerdict d2;
  if (space.flavor == Flavor::lambda) {
    d2 = check_delta2(space.w);
    hyp_ok = d2.holds;
  }
  if (g.format == "json") {
    Json j{{"flavor", to_string(space.flavor)}, {"p", number(space.p)}, {"weight", to_json(space.w)},
           {"norm", to_json(v)}};
    if (!a.window.empty()) j["window"] = Json{{"side", a.window}, {"t", a.t}};
    if (space.flavor == Flavor::lambda) j["delta2"] = to_json(d2);
    out << j.dump(2) << '\n';
  } else {
    out << format_number(v.value) << '\n';
  }
  return g.strict && !hyp_ok ? hypothesis_violation : ok;
}

struct WeightArgs {
  double p = 2.0;
  std::string weight = "power:0";
  std::string strategy = "auto";
  std::string config;
};

Strategy parse_strategy(const std::string& s) {
  if (s == "auto") return Strategy::automatic;
  if (s == "closed") return Strategy::closed_form;
  if (s == "grid") return Strategy::grid;
  throw std::invalid_argument("--strategy must be auto, closed or grid");
}

int cmd_check_weights(const WeightArgs& a, const Global& g, std::ostream& out) {
  require_p(a.p, "--p");
  const Weight w = parse_weight(a.weight);
  const Strategy s = parse_strategy(a.strategy);
  const ConditionVerdict bp = check_Bp(w, a.p, s);
  const ConditionVerdict rbp = check_RBp(w, a.p, s);
  const ConditionVerdict d2 = check_delta2(w, s);
  const bool psi_inf = psi_infinite_at_zero(w, a.p);
  const Weight wt = tilde(w, a.p);
  if (g.format == "json") {
    Json j{{"weight", to_json(w)},
           {"p", a.p},
           {"conditions", Json::array({verdict_json("B_p", bp), verdict_json("RB_p", rbp), verdict_json("delta2", d2)})},
           {"tilde", to_json(wt)},
           {"psi_infinite_at_zero", psi_inf}};
    out << j.dump(2) << '\n';
  } else {
    const std::string p = format_number(a.p);
    out << "weight " << w.describe() << ", p = " << p << '\n';
    out << verdict_text("B_" + p, bp) << '\n';
    out << verdict_text("RB_" + p, rbp) << '\n';
    out << verdict_text("Delta2", d2) << '\n';
    out << "tilde weight: " << wt.describe() << '\n';
    out << "psi(0+) = " << (psi_inf ? "inf" : "finite") << '\n';
  }
  return g.strict && !(bp.holds && rbp.holds) ? hypothesis_violation : ok;
}

struct CoupleArgs {
  double p0 = 2.0, p1 = 2.0;
  std::string w0, w1;
};

CoupleConfig couple_of(const CoupleArgs& c, const CoupleConfig& fallback) {
  CoupleConfig cfg = fallback;
  cfg.p0 = c.p0;
  cfg.p1 = c.p1;
  if (!c.w0.empty()) cfg.w0 = parse_weight(c.w0);
  if (!c.w1.empty()) cfg.w1 = parse_weight(c.w1);
  require_p(cfg.p0, "--p0");
  require_p(cfg.p1, "--p1");
  return cfg;
}

struct KArgs {
  std::string fn;
  double t = 1.0;
  std::string couple = "s";
  CoupleArgs c;
  std::string method = "both";
  std::size_t cells = 64;
  std::uint64_t seed = 7;
  std::string config;
};

int cmd_k(const KArgs& a, const Global& g, std::ostream& out) {
  if (!(a.t > 0.0)) throw std::invalid_argument("--t must be positive");
  if (a.method != "both" && a.method != "explicit" && a.method != "oracle")
    throw std::invalid_argument("--method must be explicit, oracle or both");
  if (a.couple != "s" && a.couple != "lambda") throw std::invalid_argument("--couple must be s or lambda");
  const StepFunction f = load_step_function(a.fn);
  const bool want_explicit = a.method != "oracle", want_oracle = a.method != "explicit";
  OracleOptions opt;
  opt.cells = a.cells;
  opt.seed = a.seed;
  Json j{{"t", a.t}};
  std::ostringstream text;
  bool hyp_ok = true;

  if (a.couple == "s") {
    const CoupleConfig cfg = couple_of(a.c, default_couple(Theorem::cor1));
    const SHypotheses hyp = check_s_hypotheses(cfg);
    hyp_ok = hyp.all_hold();
    const double tau = theta(cfg)(a.t);
    j["couple"] = to_json(cfg);
    j["hypotheses"] = to_json(hyp);
    j["k_parameter"] = tau;
    text << "K-parameter theta(t) = " << format_number(tau) << '\n';
    if (want_explicit) {
      const ExplicitS ex = k_explicit_s(f, a.t, cfg, &hyp);
      j["explicit"] = Json{{"value", number(ex.value)}, {"head", number(ex.head)}, {"tail", number(ex.tail)},
                           {"divergent", ex.divergent}, {"warnings", ex.warnings}};
      text << "explicit: " << format_number(ex.value) << '\n';
      for (const auto& w : ex.warnings) text << "warning: " << w << '\n';
    }
    if (want_oracle) {
      const KQuery q{f, tau, {Flavor::s, cfg.p0, cfg.w0}, {Flavor::s, cfg.p1, cfg.w1}};
      const SCoupleOracle sc = k_oracle_s_couple(q, opt);
      j["oracle"] = Json{{"direct", number(sc.direct)},
                         {"mapped", number(sc.mapped)},
                         {"mapped_monotone", number(sc.mapped_monotone)},
                         {"approximate", sc.approximate},
                         {"direct_result", to_json(sc.direct_result)},
                         {"mapped_result", to_json(sc.mapped_result)}};
      text << "oracle K^d (S couple): " << format_number(sc.direct) << '\n'
           << "oracle K (tilde Lambda couple, T f*): " << format_number(sc.mapped) << '\n';
    }
  } else {
    const CoupleConfig cfg = couple_of(a.c, default_couple(Theorem::general_k));
    const SufCondReport sc = check_sufconds(cfg);
    hyp_ok = sc.first.holds && sc.second.holds && sc.ratio_monotone.holds;
    const StepFunction fstar = rearrange(f);
    const double s = sigma(cfg)(a.t);
    j["couple"] = to_json(cfg);
    j["hypotheses"] = to_json(sc);
    j["k_parameter"] = s;
    text << "K-parameter sigma(t) = " << format_number(s) << '\n';
    if (want_explicit) {
      const ExplicitGeneral ex = k_explicit_general(fstar, a.t, cfg);
      j["explicit"] = Json{{"value", number(ex.value)}, {"head", number(ex.head)}, {"tail", number(ex.tail)},
                           {"divergent", ex.divergent}, {"decomposition", to_json(truncation_decomposition(fstar, a.t))}};
      text << "explicit: " << format_number(ex.value) << '\n';
    }
    if (want_oracle) {
      const KQuery q{fstar, s, {Flavor::lambda, cfg.p0, cfg.w0}, {Flavor::lambda, cfg.p1, cfg.w1}};
      const OracleResult r = k_oracle(q, default_oracle_grid(fstar, a.cells), false, opt);
      j["oracle"] = to_json(r);
      text << "oracle K: " << format_number(r.value) << '\n';
    }
    if (!hyp_ok) text << "warning: sufficient conditions fail for this couple\n";
  }
  if (g.format == "json")
    out << j.dump(2) << '\n';
  else
    out << text.str();
  return g.strict && !hyp_ok ? hypothesis_violation : ok;
}

struct VerifyArgs {
  std::string suite = "cor1";
  double p = 2.0;
  double alpha = 1.0;
  CoupleArgs c;
  std::uint64_t seed = 7;
  std::size_t size = 20;
  std::size_t cells = 64;
  std::size_t t_count = 15;
  double t_min = 1e-2, t_max = 1e2;
  bool no_refine = false;
  std::string out, csv;
  std::string config;
};

int cmd_verify(const VerifyArgs& a, const Global& g, std::ostream& out) {
  const Theorem tag = parse_theorem(a.suite);
  const Corpus corpus = make_corpus(a.seed, a.size);
  EquivalenceReport rep;
  if (tag == Theorem::identities) {
    IdentityOptions io;
    io.p = a.p;
    require_p(io.p, "--p");
    rep = run_identity_suite(corpus, io);
  } else {
    require_p(a.p, "--p");
    if (!(a.t_min > 0.0 && a.t_max > a.t_min) || a.t_count < 2)
      throw std::invalid_argument("t-grid needs 0 < t-min < t-max and t-count >= 2");
    SuiteOptions so;
    CoupleArgs c = a.c;
    c.p0 = c.p1 = a.p;
    if (a.c.w0.empty() && a.c.w1.empty())
      so.cfg = default_couple(tag, a.p, a.alpha);
    else
      so.cfg = couple_of(c, default_couple(tag, a.p, a.alpha));
    so.tgrid = Grid::log_spaced(a.t_min, a.t_max, a.t_count);
    so.oracle.cells = a.cells;
    so.oracle.seed = a.seed;
    so.refine = !a.no_refine;
    rep = run_theorem_suite(tag, corpus, so);
  }
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << report_json(rep) << '\n';
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw std::runtime_error("cannot write " + a.csv);
    write_csv(f, rep);
  }
  if (g.format == "json") {
    if (a.out.empty()) out << report_json(rep) << '\n';
  } else {
    out << rep.theorem << ": " << rep.records.size() << " records, band [" << format_number(rep.band.min) << ", "
        << format_number(rep.band.max) << "], median " << format_number(rep.band.median) << ", C = "
        << format_number(rep.band.constant) << '\n';
    if (rep.refinement.available)
      out << "refinement m = " << rep.refinement.m << " -> " << rep.refinement.m_fine
          << ": drift " << format_number(rep.refinement.drift) << '\n';
    for (const auto& h : rep.hypotheses) out << verdict_text(h.name, h.verdict) << '\n';
    for (const auto& [name, b] : rep.extra_bands)
      out << name << ": [" << format_number(b.min) << ", " << format_number(b.max) << "]\n";
  }
  return g.strict && !rep.hypotheses_hold ? hypothesis_violation : ok;
}

}  // namespace

Weight parse_weight(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "file") {
    if (rest.empty()) throw std::invalid_argument("weight file: needs a path");
    const Json j = load_weight_json(rest);
    if (j.is_object() && j.contains("family")) return weight_from_json(j);
    return Weight::tabulated(step_from_json(j));
  }
  const auto parts = split(rest, ':');
  if (kind == "power" && parts.size() == 1) return Weight::power(parse_double(parts[0], "weight " + spec));
  if (kind == "powerlog" && parts.size() == 2)
    return Weight::power_log(parse_double(parts[0], "weight " + spec), parse_double(parts[1], "weight " + spec));
  throw std::invalid_argument("invalid weight \"" + spec + "\" (power:<beta>, powerlog:<beta>:<gamma>, file:<path>)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lorentz-space norms, weight conditions and K-functionals of step functions", "lorentz-k"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--strict", g.strict, "Exit 2 when a hypothesis check fails");

  NormArgs na;
  auto* norm_cmd = app.add_subcommand("norm", "Lorentz norm of a step function");
  std::vector<Bind> norm_binds{
      bind_key(norm_cmd->add_option("--flavor", na.flavor, "lambda, gamma or s"), "flavor", na.flavor),
      bind_key(norm_cmd->add_option("--p", na.p, "Exponent (inf allowed)"), "p", na.p),
      bind_key(norm_cmd->add_option("--weight", na.weight, "power:<b>, powerlog:<b>:<g> or file:<path>"), "weight",
           na.weight),
      bind_key(norm_cmd->add_option("--fn", na.fn, "Step function JSON"), "fn", na.fn),
      bind_key(norm_cmd->add_option("--window", na.window, "head or tail truncation at --t"), "window", na.window),
      bind_key(norm_cmd->add_option("--t", na.t, "Truncation point"), "t", na.t),
  };
  norm_cmd->add_option("--config", na.config, "JSON config file");

  WeightArgs wa;
  auto* weights_cmd = app.add_subcommand("check-weights", "B_p, RB_p and Delta2 verdicts for a weight");
  std::vector<Bind> weight_binds{
      bind_key(weights_cmd->add_option("--p", wa.p, "Exponent"), "p", wa.p),
      bind_key(weights_cmd->add_option("--weight", wa.weight, "Weight spec"), "weight", wa.weight),
      bind_key(weights_cmd->add_option("--strategy", wa.strategy, "auto, closed or grid"), "strategy", wa.strategy),
  };
  weights_cmd->add_option("--config", wa.config, "JSON config file");

  KArgs ka;
  auto* k_cmd = app.add_subcommand("k", "Explicit formula and brute-force oracle for the K-functional");
  std::vector<Bind> k_binds{
      bind_key(k_cmd->add_option("--fn", ka.fn, "Step function JSON"), "fn", ka.fn),
      bind_key(k_cmd->add_option("--t", ka.t, "Parameter of the explicit formula"), "t", ka.t),
      bind_key(k_cmd->add_option("--couple", ka.couple, "s or lambda"), "couple", ka.couple),
      bind_key(k_cmd->add_option("--p0", ka.c.p0), "p0", ka.c.p0),
      bind_key(k_cmd->add_option("--w0", ka.c.w0, "Weight spec"), "w0", ka.c.w0),
      bind_key(k_cmd->add_option("--p1", ka.c.p1), "p1", ka.c.p1),
      bind_key(k_cmd->add_option("--w1", ka.c.w1, "Weight spec"), "w1", ka.c.w1),
      bind_key(k_cmd->add_option("--method", ka.method, "explicit, oracle or both"), "method", ka.method),
      bind_key(k_cmd->add_option("--cells", ka.cells, "Oracle grid size"), "cells", ka.cells),
      bind_key(k_cmd->add_option("--seed", ka.seed, "Oracle seed"), "seed", ka.seed),
  };
  k_cmd->add_option("--config", ka.config, "JSON config file");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite over the generated corpus");
  std::vector<Bind> verify_binds{
      bind_key(verify_cmd->add_option("--suite", va.suite, "identities, T1.1, GeneralK, T2, Cor1, GammaEqS"), "suite",
           va.suite),
      bind_key(verify_cmd->add_option("--p", va.p, "Exponent of the couple"), "p", va.p),
      bind_key(verify_cmd->add_option("--alpha", va.alpha, "Weight exponent of the default couple"), "alpha", va.alpha),
      bind_key(verify_cmd->add_option("--w0", va.c.w0, "Override w0"), "w0", va.c.w0),
      bind_key(verify_cmd->add_option("--w1", va.c.w1, "Override w1"), "w1", va.c.w1),
      bind_key(verify_cmd->add_option("--seed", va.seed, "Corpus and oracle seed"), "seed", va.seed),
      bind_key(verify_cmd->add_option("--size", va.size, "Corpus size"), "size", va.size),
      bind_key(verify_cmd->add_option("--cells", va.cells, "Oracle grid size m"), "cells", va.cells),
      bind_key(verify_cmd->add_option("--t-count", va.t_count, "Points of the t-grid"), "t_count", va.t_count),
      bind_key(verify_cmd->add_option("--t-min", va.t_min), "t_min", va.t_min),
      bind_key(verify_cmd->add_option("--t-max", va.t_max), "t_max", va.t_max),
      bind_key(verify_cmd->add_flag("--no-refine", va.no_refine, "Skip the doubled-grid rerun"), "no_refine",
           va.no_refine),
      bind_key(verify_cmd->add_option("--out", va.out, "Report JSON path"), "out", va.out),
      bind_key(verify_cmd->add_option("--csv", va.csv, "Ratio table CSV path"), "csv", va.csv),
  };
  verify_cmd->add_option("--config", va.config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : error;
  }

  try {
    if (*norm_cmd) {
      apply_config(na.config, norm_binds, "norm");
      if (na.fn.empty()) throw std::invalid_argument("norm needs --fn");
      return cmd_norm(na, g, out);
    }
    if (*weights_cmd) {
      apply_config(wa.config, weight_binds, "check-weights");
      return cmd_check_weights(wa, g, out);
    }
    if (*k_cmd) {
      apply_config(ka.config, k_binds, "k");
      if (ka.fn.empty()) throw std::invalid_argument("k needs --fn");
      return cmd_k(ka, g, out);
    }
    apply_config(va.config, verify_binds, "verify");
    return cmd_verify(va, g, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }
}

}  // namespace lorentzk::cli
