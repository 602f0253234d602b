// One line per acceptance criterion; exit status is non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lorentzk/kfunctional.hpp"
#include "lorentzk/serialize.hpp"
#include "lorentzk/verify.hpp"

using namespace lorentzk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_extra(const EquivalenceReport& r, const std::string& tag, const std::string& key) {
  double m = 0.0;
  for (const auto& x : r.records)
    if (x.theorem == tag) m = std::max(m, std::isnan(x.extra(key)) ? INFINITY : x.extra(key));
  return m;
}

bool any_flag_prefix(const EquivalenceReport& r, const std::string& prefix) {
  for (const auto& x : r.records)
    for (const auto& f : x.flags)
      if (f.rfind(prefix, 0) == 0) return true;
  return false;
}

// The 50 Power cases: five exponents, ten betas straddling -1 and p - 1.
std::vector<std::pair<double, double>> power_cases() {
  std::vector<std::pair<double, double>> out;
  for (double p : {1.5, 2.0, 3.0, 4.0, 6.0}) {
    const double top = p - 1.0;
    for (double beta : {-1.5, -1.0, -0.95, -0.5, 0.0, 0.5 * top, top - 0.05, top, top + 0.05, top + 1.0})
      out.emplace_back(p, beta);
  }
  return out;
}

// Verdict with invalid weights mapped to a third state.
struct Verdict {
  int state = 0;  // 1 holds, 0 fails, -1 invalid weight
  double constant = 0.0;
};

Verdict verdict_of(const std::function<ConditionVerdict()>& fn) {
  try {
    const auto v = fn();
    return {v.holds ? 1 : 0, v.witness_constant};
  } catch (const std::domain_error&) {
    return {-1, INFINITY};
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lorentz-k");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != cli::ok) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

// Tiny lattice instance: at most 6 cells, values in {1, ..., 16}.
StepFunction tiny(std::mt19937_64& rng) {
  auto below = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::size_t n = 1 + below(6);
  std::vector<double> x(n), v(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 0.25 * double(1 + below(8));
    x[i] = acc;
    v[i] = double(1 + below(16));
  }
  return StepFunction(std::move(x), std::move(v));
}

}  // namespace

int main() {
  const Corpus corpus = make_corpus(7, 20);
  std::printf("acceptance: corpus seed 7, %zu functions, %zu worker thread(s)\n", corpus.functions.size(),
              thread_count());

  Stopwatch id_clock;
  const EquivalenceReport ids = run_identity_suite(corpus);
  const double id_seconds = id_clock.seconds();
  const bool id_errors = any_flag_prefix(ids, "error");

  report(1, "T idempotence and T-star, 1e3 points, abs 1e-9, < 5 s", [&] {
    const double a = max_extra(ids, "T-idempotent", "abs_error");
    const double b = max_extra(ids, "T-star", "abs_error");
    return Outcome{!id_errors && a <= 1e-9 && b <= 1e-9 && id_seconds < 5.0,
                   fmt("max abs error %.3g / %.3g, suite %.2f s", a, b, id_seconds)};
  });

  report(2, "S / Lambda identities, rel 1e-6, < 30 s", [&] {
    double worst = 0.0;
    for (const char* tag : {"S-Lambda", "S-Lambda-head", "S-Lambda-tail"})
      worst = std::max(worst, max_extra(ids, tag, "rel_error"));
    return Outcome{!id_errors && worst <= 1e-6 && id_seconds < 30.0,
                   fmt("max rel error %.3g, suite %.2f s", worst, id_seconds)};
  });

  report(3, "reconstruction of f* from T f*, rel 1e-6", [&] {
    const double worst = max_extra(ids, "reconstruction", "rel_error");
    return Outcome{!id_errors && worst <= 1e-6, fmt("max rel error %.3g", worst)};
  });

  const auto cases = power_cases();

  report(4, "closed-form vs grid weight checkers, 50 Power cases", [&] {
    int verdict_mismatch = 0;
    double worst = 0.0;
    for (auto [p, beta] : cases) {
      const Weight w = Weight::power(beta);
      for (int rev = 0; rev < 2; ++rev) {
        const auto c = verdict_of([&] { return rev ? check_RBp(w, p, Strategy::closed_form) : check_Bp(w, p, Strategy::closed_form); });
        const auto g = verdict_of([&] { return rev ? check_RBp(w, p, Strategy::grid) : check_Bp(w, p, Strategy::grid); });
        if (c.state != g.state) {
          ++verdict_mismatch;
          std::fprintf(stderr, "  verdict mismatch: %s p=%g beta=%g closed=%d grid=%d\n", rev ? "RB" : "B", p, beta,
                       c.state, g.state);
        }
        if (c.state == 1 && g.state == 1)
          worst = std::max(worst, std::abs(g.constant - c.constant) / c.constant);
      }
    }
    return Outcome{verdict_mismatch == 0 && worst <= 1e-3,
                   fmt("%zu cases x {B_p, RB_p}: %d verdict mismatches, max rel constant gap %.3g (tol 1e-3)",
                       cases.size(), verdict_mismatch, worst)};
  });

  report(5, "RB_p(w) iff B_p(tilde w), 50 Power cases", [&] {
    int mismatch = 0;
    for (auto [p, beta] : cases) {
      const Weight w = Weight::power(beta);
      const bool rb = verdict_of([&] { return check_RBp(w, p); }).state == 1;
      const bool b = verdict_of([&] { return check_Bp(tilde(w, p), p); }).state == 1;
      if (rb != b) {
        ++mismatch;
        std::fprintf(stderr, "  duality mismatch: p=%g beta=%g RB=%d B~=%d\n", p, beta, rb, b);
      }
    }
    return Outcome{mismatch == 0, fmt("%d mismatches over %zu cases", mismatch, cases.size())};
  });

  report(6, "oracle vs exhaustive lattice search, 30 tiny instances, abs 1e-6, < 60 s", [&] {
    Stopwatch clock;
    std::mt19937_64 rng(2024);
    const LorentzSpace a{Flavor::lambda, 2.0, Weight::power(0.5)};
    const LorentzSpace b{Flavor::lambda, 1.0, Weight::power(0.0)};
    const auto cfg = corollary_couple(2.0, 1.0);
    const LorentzSpace s0{Flavor::s, 2.0, cfg.w0}, s1{Flavor::s, 2.0, cfg.w1};
    double worst = 0.0;
    std::size_t queries = 0;
    for (int k = 0; k < 30; ++k) {
      const StepFunction f = tiny(rng);
      const double t = std::ldexp(1.0, static_cast<int>(rng() % 7) - 3);
      OracleOptions lat;
      lat.lattice_step = 1.0;
      OracleOptions ex = lat;
      ex.exhaustive = true;
      const Grid grid({f.support_end()});
      // Lambda couple: K and K^d; S couple: K^d (its T1.1 side).
      for (bool mono : {false, true}) {
        const KQuery q{f, t, a, b};
        worst = std::max(worst, std::abs(k_oracle(q, grid, mono, lat).value - k_oracle(q, grid, mono, ex).value));
        ++queries;
      }
      const KQuery qs{f, t, s0, s1};
      worst = std::max(worst, std::abs(k_oracle(qs, grid, true, lat).value - k_oracle(qs, grid, true, ex).value));
      ++queries;
    }
    const double secs = clock.seconds();
    return Outcome{worst <= 1e-6 && secs < 60.0,
                   fmt("%zu queries, max |descent - exhaustive| %.3g, %.2f s", queries, worst, secs)};
  });

  report(7, "K(f, t; L1, L1) = min(1, t) ||f||_1, 10 f x 10 t, rel 1e-6", [&] {
    const Corpus c10 = make_corpus(7, 10);
    const LorentzSpace l1{Flavor::lambda, 1.0, Weight::power(0.0)};
    const Grid ts = Grid::log_spaced(1e-2, 1e2, 10);
    double worst = 0.0;
    for (const auto& e : c10.functions) {
      const StepFunction fs = rearrange(e.f);
      const double n1 = fs.integral();
      for (double t : ts) {
        const double k = k_oracle({e.f, t, l1, l1}, default_oracle_grid(fs, 64), false).value;
        worst = std::max(worst, std::abs(k - std::min(1.0, t) * n1) / (std::min(1.0, t) * n1));
      }
    }
    return Outcome{worst <= 1e-6, fmt("max rel error %.3g", worst)};
  });

  report(8, "K^d on S couple vs K on tilde Lambda couple, C <= 100, drift <= 10%, < 10 min", [&] {
    Stopwatch clock;
    SuiteOptions opt;
    opt.cfg = default_couple(Theorem::t11);
    const auto r = run_theorem_suite(Theorem::t11, corpus, opt);
    const double secs = clock.seconds();
    const bool complete = r.band.count == corpus.functions.size() * opt.tgrid.size();
    return Outcome{complete && r.hypotheses_hold && r.band.constant <= 100.0 && r.refinement.drift <= 0.1 &&
                       secs < 600.0,
                   fmt("%zu ratios in [%.6g, %.6g], C = %.6g, C(m=128) = %.6g, drift %.3g, %.1f s", r.band.count,
                       r.band.min, r.band.max, r.band.constant, r.refinement.constant_fine, r.refinement.drift, secs)};
  });

  // Criteria 9, 11 and 12 share two CLI runs of the Cor1 suite.
  const auto dir = std::filesystem::temp_directory_path() / "lorentzk-acceptance";
  std::filesystem::create_directories(dir);
  const auto csv1 = dir / "cor1-a.csv", csv2 = dir / "cor1-b.csv", json1 = dir / "cor1-a.json";
  Stopwatch cor1_clock;
  const int rc1 = run_cli({"verify", "--suite", "cor1", "--p", "2", "--alpha", "1", "--seed", "7", "--csv",
                           csv1.string(), "--out", json1.string()});
  const double cor1_seconds = cor1_clock.seconds();

  report(9, "explicit S formula vs oracle (Cor1 couple), C <= 100, drift <= 10%", [&] {
    if (rc1 != cli::ok) return Outcome{false, fmt("verify exited with %d", rc1)};
    const Json j = Json::parse(slurp(json1));
    const auto& band = j.at("band");
    const auto& ref = j.at("refinement");
    const double c = to_double(band.at("constant"));
    const double drift = to_double(ref.at("drift"));
    const std::size_t n = band.at("count").get<std::size_t>();
    return Outcome{n == 300 && j.at("hypotheses_hold").get<bool>() && c <= 100.0 && drift <= 0.1,
                   fmt("%zu ratios in [%.6g, %.6g], C = %.6g, C(m=128) = %.6g, drift %.3g, %.1f s", n,
                       to_double(band.at("min")), to_double(band.at("max")), c, to_double(ref.at("constant_fine")),
                       drift, cor1_seconds)};
  });

  report(10, "Gamma >= S with bounded ratio under RB_p; growing ratio without it", [&] {
    SuiteOptions opt;
    opt.cfg = CoupleConfig{2.0, Weight::power(0.0), 2.0, Weight::power(0.0)};
    opt.gamma_exponents = {1.5, 2.0, 3.0};
    const auto g = run_theorem_suite(Theorem::gamma_eq_s, corpus, opt);
    bool lower = true;
    for (const auto& x : g.records) lower = lower && x.lhs >= x.rhs && std::isfinite(x.ratio);
    const auto neg = run_negative_control(Weight::tabulated(StepFunction::indicator(0, 1)), 2.0, {4.0, 16.0, 64.0});
    const auto& nr = neg.records;
    const bool grows = nr.size() == 3 && nr[0].ratio < nr[1].ratio && nr[1].ratio < nr[2].ratio;
    const auto pow15 = run_negative_control(Weight::power(1.5), 2.0, {4.0, 16.0, 64.0});
    const bool pow15_divergent = std::all_of(pow15.records.begin(), pow15.records.end(), [](const RatioRecord& x) {
      return std::find(x.flags.begin(), x.flags.end(), "divergent") != x.flags.end();
    });
    return Outcome{g.hypotheses_hold && lower && std::isfinite(g.band.max) && !neg.hypotheses_hold && grows,
                   fmt("RB holds for p in {1.5,2,3}; %zu ratios in [%.6g, %.6g]; control chi_(0,1] (RB_2 fails): "
                       "%.4g, %.4g, %.4g at L = 4, 16, 64; Power{1.5}: %s",
                       g.band.count, g.band.min, g.band.max, nr[0].ratio, nr[1].ratio, nr[2].ratio,
                       pow15_divergent ? "both norms infinite, ratio undefined" : "finite")};
  });

  report(11, "K <= K^d on every query, same grid", [&] {
    if (rc1 != cli::ok) return Outcome{false, "no Cor1 report"};
    const Json j = Json::parse(slurp(json1));
    std::size_t n = 0, bad = 0;
    for (const auto& rec : j.at("records")) {
      const auto& e = rec.at("extras");
      for (auto [k, kd] : {std::pair{"mapped", "mapped_monotone"}, std::pair{"mapped_fine", "mapped_monotone_fine"}}) {
        ++n;
        // A record without values (query error) counts against the criterion.
        if (!e.contains(k) || !e.contains(kd) || !(to_double(e.at(k)) <= to_double(e.at(kd)))) ++bad;
      }
    }
    // Plus direct Lambda-couple queries on the corpus.
    const LorentzSpace a{Flavor::lambda, 2.0, Weight::power(1.0)};
    const LorentzSpace b{Flavor::lambda, 1.5, Weight::power(-0.5)};
    for (const auto& e : corpus.functions)
      for (double t : {0.1, 1.0, 10.0}) {
        const Grid grid = default_oracle_grid(rearrange(e.f), 32);
        ++n;
        if (!(k_oracle({e.f, t, a, b}, grid, false).value <= k_oracle({e.f, t, a, b}, grid, true).value)) ++bad;
      }
    return Outcome{bad == 0, fmt("%zu comparisons, %zu violations", n, bad)};
  });

  report(12, "two runs of verify --suite cor1 --seed 7 give identical CSV", [&] {
    const int rc2 = run_cli({"verify", "--suite", "cor1", "--seed", "7", "--csv", csv2.string()});
    const std::string a = slurp(csv1), b = slurp(csv2);
    const auto rows = std::count(a.begin(), a.end(), '\n');
    return Outcome{rc1 == cli::ok && rc2 == cli::ok && !a.empty() && a == b,
                   fmt("%ld lines each, %s", static_cast<long>(rows), a == b ? "byte-identical" : "different")};
  });

  std::printf("acceptance: %d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
