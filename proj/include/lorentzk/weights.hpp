#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lorentzk/stepfn.hpp"

namespace lorentzk {

/// w(s) = s^beta
struct Power {
  double beta = 0.0;
};

/// w(s) = s^beta (1 + |log s|)^gamma
struct PowerLog {
  double beta = 0.0;
  double gamma = 0.0;
};

/// w piecewise constant, given by a step function.
struct Tabulated {
  StepFunction steps;
};

/// w(s) = s^{p-2} steps(1/s): the tilde transform of a tabulated weight.
struct ReciprocalTabulated {
  StepFunction steps;
  double p = 2.0;
};

class Weight {
public:
  using Family = std::variant<Power, PowerLog, Tabulated, ReciprocalTabulated>;

  Weight() : family_(Power{0.0}) {}
  Weight(Family family);  // NOLINT: implicit from a family is convenient

  static Weight power(double beta) { return Weight(Power{beta}); }
  static Weight power_log(double beta, double gamma) { return Weight(PowerLog{beta, gamma}); }
  static Weight tabulated(StepFunction steps) { return Weight(Tabulated{std::move(steps)}); }

  [[nodiscard]] const Family& family() const noexcept { return family_; }
  [[nodiscard]] std::string describe() const;

  double operator()(double s) const;

  /// integral_a^b s^q w(s) ds; b may be +inf. Returns +inf on divergence.
  [[nodiscard]] double moment(double q, double a, double b) const;

  /// W(t) = integral_0^t w.
  [[nodiscard]] double primitive(double t) const { return moment(0.0, 0.0, t); }

  /// Psi_p(t) = integral_t^inf s^{-p} w(s) ds.
  [[nodiscard]] double tail_moment(double p, double t) const;

  /// W(t) < inf for finite t.
  [[nodiscard]] bool locally_integrable() const;

  /// Points where w or its derivative jumps (for quadrature splitting).
  [[nodiscard]] std::vector<double> breakpoints() const;

  /// True when closed forms are available for every primitive.
  [[nodiscard]] bool closed_form() const;

  friend bool operator==(const Weight& a, const Weight& b);

private:
  Family family_;
};

[[nodiscard]] Weight tilde(const Weight& w, double p);

struct CoupleConfig {
  double p0 = 2.0;
  Weight w0;
  double p1 = 2.0;
  Weight w1;
};

/// w0 = s^0, w1 = s^{-alpha}, p0 = p1 = p.
[[nodiscard]] CoupleConfig corollary_couple(double p, double alpha);

/// The couple (p0, tilde w0, p1, tilde w1) underlying the Lambda side of an S couple.
[[nodiscard]] CoupleConfig tilde_couple(const CoupleConfig& cfg);

enum class Method { closed_form, grid };

struct ConditionVerdict {
  bool holds = false;
  double witness_constant = 0.0;
  double witness_t = 0.0;
  Method method = Method::grid;
  std::string reason;
};

/// Scan window for grid checks.
struct ScanOptions {
  double lo = 1e-6;
  double hi = 1e6;
  std::size_t points = 400;
  // Grid verdicts fail once the sampled sup exceeds this bound.
  double max_constant = 1e8;
  // Threshold on C_qm for the quasi-monotonicity checks.
  double qm_threshold = 10.0;
};

enum class Strategy { automatic, closed_form, grid };

ConditionVerdict check_Bp(const Weight& w, double p, Strategy s = Strategy::automatic,
                          const ScanOptions& opt = {});
ConditionVerdict check_RBp(const Weight& w, double p, Strategy s = Strategy::automatic,
                           const ScanOptions& opt = {});
ConditionVerdict check_delta2(const Weight& w, Strategy s = Strategy::automatic,
                              const ScanOptions& opt = {});

/// psi(t) = Psi_p(t)^{1/p}; throws std::domain_error when the tail diverges.
EvaluableFunction psi(const Weight& w, double p);

/// phi(t) = W(t)^{1/p}.
EvaluableFunction fundamental(const Weight& w, double p);

/// psi(0+) = inf, decided from the moment integral_0^1 s^{-p} w.
bool psi_infinite_at_zero(const Weight& w, double p);

/// theta = psi_0 / psi_1.
EvaluableFunction theta(const CoupleConfig& cfg);

/// sigma = phi_0 / phi_1.
EvaluableFunction sigma(const CoupleConfig& cfg);

ConditionVerdict check_cond1(const CoupleConfig& cfg, Strategy s = Strategy::automatic,
                             const ScanOptions& opt = {});
ConditionVerdict check_cond3(const CoupleConfig& cfg, double eps, Strategy s = Strategy::automatic,
                             const ScanOptions& opt = {});

/// Largest eps for which theta * psi_0^eps is non-decreasing (Power couples only).
std::optional<double> cond3_eps_limit(const CoupleConfig& cfg);

/// Quasi-monotonicity of sigma / phi_1^eps with sigma = phi0 / phi1.
ConditionVerdict check_ratio_monotone(const EvaluableFunction& phi0, const EvaluableFunction& phi1,
                                      double eps, const Grid& grid, double qm_threshold = 10.0);

/// C_qm = max over s <= t of g(s) / g(t) on the grid.
ConditionVerdict quasi_monotone(const EvaluableFunction& g, const Grid& grid, double threshold);

struct SufCondReport {
  ConditionVerdict first;
  ConditionVerdict second;
  ConditionVerdict ratio_monotone;
  double eps = 0.0;
};

SufCondReport check_sufconds(const CoupleConfig& cfg, const Grid& grid, double max_constant = 1e8);
SufCondReport check_sufconds(const CoupleConfig& cfg, const ScanOptions& opt = {});

}  // namespace lorentzk
