#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lorentzk/lorentz_norms.hpp"
#include "lorentzk/stepfn.hpp"
#include "lorentzk/weights.hpp"

namespace lorentzk {

enum class Provenance { truncation, decomposition_lemma, optimizer, manual };

[[nodiscard]] std::string to_string(Provenance p);

struct Decomposition {
  StepFunction f0;
  StepFunction f1;
  Provenance provenance = Provenance::manual;
};

/// Arguments of K(f, t; X0, X1).
struct KQuery {
  StepFunction f;
  double t = 1.0;
  LorentzSpace x0;
  LorentzSpace x1;
};

/// ||f0||_{X0} + t ||f1||_{X1} evaluated with the norm module.
[[nodiscard]] double k_objective(const KQuery& q, const Decomposition& d);

// ---------------------------------------------------------------------------
// Explicit formulas

enum class ExplicitForm { integral, norm };

struct ExplicitGeneral {
  double value = 0.0;
  double sigma = 0.0;
  double head = 0.0;
  double tail = 0.0;
  bool divergent = false;
};

/// ||chi_(0,t) f*||_{Lambda^p0(w0)} + sigma(t) ||chi_(t,inf) f*||_{Lambda^p1(w1)}.
/// The integral form reads the tail as (integral_t^inf f*^p1 w1)^{1/p1}; the
/// norm form rearranges chi_(t,inf) f* first, i.e. uses s -> f*(s + t).
ExplicitGeneral k_explicit_general(const StepFunction& fstar, double t, const CoupleConfig& cfg,
                                   ExplicitForm form = ExplicitForm::integral);

/// Hypotheses of the explicit S-couple formula, checked through the weights module.
struct SHypotheses {
  ConditionVerdict cond1;
  ConditionVerdict rb0;
  ConditionVerdict cond3;
  double eps = 0.0;
  bool psi0_infinite = false;
  bool psi1_infinite = false;

  [[nodiscard]] bool all_hold() const;
  [[nodiscard]] std::vector<std::string> warnings() const;
};

SHypotheses check_s_hypotheses(const CoupleConfig& cfg, const ScanOptions& opt = {});

struct ExplicitS {
  double value = 0.0;
  double theta = 0.0;
  double head = 0.0;
  double tail = 0.0;
  bool divergent = false;
  std::vector<std::string> warnings;
};

/// (integral_0^t (f** - f*)^p0 w0)^{1/p0} + theta(t) (integral_t^inf (f** - f*)^p1 w1)^{1/p1}.
/// Pass precomputed hypotheses to skip re-checking them per call.
ExplicitS k_explicit_s(const StepFunction& f, double t, const CoupleConfig& cfg,
                       const SHypotheses* hyp = nullptr);

ExplicitS corollary_1(const StepFunction& f, double t, double p, double alpha);

// ---------------------------------------------------------------------------
// Constructive decompositions

/// f0 = (f* - f*(t+))^+, f1 = min(f*, f*(t+)), with f*(t+) the right limit.
Decomposition truncation_decomposition(const StepFunction& fstar, double t);

/// Given non-increasing f <= g + h, returns f1 = sup_{s >= t} (f - g)^+ and f0 = f - f1.
Decomposition decomposition_lemma(const StepFunction& f, const StepFunction& g, const StepFunction& h);

// ---------------------------------------------------------------------------
// Oracles

struct OracleOptions {
  std::size_t cells = 64;
  std::uint64_t seed = 7;
  std::size_t max_sweeps = 10000;
  double tolerance = 1e-8;
  // Non-zero: decision values restricted to multiples of this step.
  double lattice_step = 0.0;
  // With a lattice: enumerate every lattice decomposition instead of searching.
  bool exhaustive = false;
};

struct OracleResult {
  double value = 0.0;
  Decomposition best;
  bool approximate = false;
  std::string best_start;
  std::size_t sweeps = 0;
  std::uint64_t seed = 0;
  double truncation_value = 0.0;
};

/// Log-spaced grid over the support of f* with one decade of padding each side.
Grid default_oracle_grid(const StepFunction& fstar, std::size_t m);

/// Brute-force K (or K^d when monotone_only) over decompositions constant on
/// the cells of grid merged with the breakpoints of f*.
OracleResult k_oracle(const KQuery& q, const Grid& grid, bool monotone_only, const OracleOptions& opt = {});

struct SCoupleOracle {
  double direct = 0.0;           // K^d on the S couple, monotone decompositions
  double mapped = 0.0;           // K on the tilde Lambda couple for T f*
  double mapped_monotone = 0.0;  // K^d on the tilde Lambda couple
  OracleResult direct_result;
  OracleResult mapped_result;
  bool approximate = false;
};

/// Both evaluations of the S-couple K-functional; q.x0 and q.x1 must be S spaces.
SCoupleOracle k_oracle_s_couple(const KQuery& q, const OracleOptions& opt = {});

struct NearOptimal {
  Decomposition decomposition;
  double value = 0.0;
  bool g1_below_h = true;
};

/// Decomposition built from the majorants (2/t) f0**(1/t) and T f1*(t/2) of T f*,
/// starting from the split (f0, f1) of `seed`, then mapped back through T.
NearOptimal near_optimal_s_decomposition(const StepFunction& f, double t, const CoupleConfig& cfg,
                                         const Decomposition& seed);
NearOptimal near_optimal_s_decomposition(const StepFunction& f, double t, const CoupleConfig& cfg,
                                         const OracleOptions& opt = {});

}  // namespace lorentzk
