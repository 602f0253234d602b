#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lorentzk/kfunctional.hpp"
#include "lorentzk/stepfn.hpp"
#include "lorentzk/weights.hpp"

namespace lorentzk {

struct CorpusEntry {
  std::string id;
  StepFunction f;
};

struct Corpus {
  std::vector<CorpusEntry> functions;
  std::uint64_t seed = 7;
};

/// Indicators, geometric and arithmetic staircases, random monotone steps and
/// sums of indicators, cycled in that order. Deterministic given the seed.
Corpus make_corpus(std::uint64_t seed = 7, std::size_t size = 20);

enum class Theorem { identities, t11, general_k, t2, cor1, gamma_eq_s };

[[nodiscard]] std::string to_string(Theorem t);
[[nodiscard]] Theorem parse_theorem(const std::string& s);

struct RatioRecord {
  std::string theorem;
  std::string f_id;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 1.0;
  // Ratio at the doubled oracle grid; NaN when not computed.
  double ratio_fine = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> flags;
  std::vector<std::pair<std::string, double>> extras;

  [[nodiscard]] double extra(const std::string& key) const;
};

struct Band {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  // max(max, 1/min): the smallest C with every ratio in [1/C, C].
  double constant = 0.0;
};

Band make_band(std::vector<double> ratios);

struct Refinement {
  bool available = false;
  std::size_t m = 0;
  std::size_t m_fine = 0;
  double constant = 0.0;
  double constant_fine = 0.0;
  double drift = 0.0;
};

struct HypothesisRecord {
  std::string name;
  ConditionVerdict verdict;
};

struct EquivalenceReport {
  std::string theorem;
  std::uint64_t seed = 0;
  std::string config;  // JSON text of the run configuration
  std::vector<HypothesisRecord> hypotheses;
  bool hypotheses_hold = true;
  std::vector<RatioRecord> records;
  Band band;
  Refinement refinement;
  std::vector<std::pair<std::string, Band>> extra_bands;
  std::vector<std::string> notes;
};

struct IdentityOptions {
  double p = 2.0;
  std::vector<Weight> weights{Weight::power(0.0), Weight::power(-1.0)};
  std::size_t sample_points = 1000;
  double rel_tol = 1e-8;
};

EquivalenceReport run_identity_suite(const Corpus& corpus, const IdentityOptions& opt = {});

struct SuiteOptions {
  CoupleConfig cfg = corollary_couple(2.0, 1.0);
  Grid tgrid = Grid::log_spaced(1e-2, 1e2, 15);
  OracleOptions oracle;
  bool refine = true;
  // Exponents for the Gamma = S suite; its weight is cfg.w0.
  std::vector<double> gamma_exponents{1.5, 2.0, 3.0};
};

/// Default couple per theorem: the Corollary couple for S-type theorems and its
/// Lambda counterpart (p, s^1) / (p, s^0) for GeneralK.
CoupleConfig default_couple(Theorem t, double p = 2.0, double alpha = 1.0);

EquivalenceReport run_theorem_suite(Theorem tag, const Corpus& corpus, const SuiteOptions& opt);

/// Gamma/S ratios for staircases of growing support under a weight that fails RB_p.
EquivalenceReport run_negative_control(const Weight& w, double p, const std::vector<double>& supports);

/// Staircase with dyadic cells on (0, length] whose values fall like log(length / s).
StepFunction log_profile(double length);

std::string report_json(const EquivalenceReport& r, int indent = 2);
void write_csv(std::ostream& os, const EquivalenceReport& r, bool header = true);

/// Worker count: LORENTZK_THREADS if set, else hardware concurrency.
std::size_t thread_count();

}  // namespace lorentzk
