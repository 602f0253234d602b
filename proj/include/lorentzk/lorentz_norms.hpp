#pragma once

#include <string>
#include <utility>

#include "lorentzk/stepfn.hpp"
#include "lorentzk/weights.hpp"

namespace lorentzk {

enum class Flavor { lambda, gamma, s };

[[nodiscard]] std::string to_string(Flavor f);
[[nodiscard]] Flavor parse_flavor(const std::string& s);

/// Lambda^p(w), Gamma^p(w) or S^p(w); p may be +inf.
struct LorentzSpace {
  Flavor flavor = Flavor::lambda;
  double p = 2.0;
  Weight w;
};

struct NormValue {
  double value = 0.0;
  bool divergent = false;
  bool exact = true;
  double error_estimate = 0.0;
};

struct NormOptions {
  double rel_tol = 1e-8;
  // Samples per cell for the p = inf suprema.
  std::size_t sup_samples = 32;
};

enum class Window { head, tail };

/// ||chi_(0,t) f*|| (head) or ||chi_(t,inf) f*|| (tail) read off the integral form.
struct TruncatedNorm {
  LorentzSpace space;
  Window window = Window::head;
  double t = 1.0;
};

NormValue norm(const LorentzSpace& space, const StepFunction& f, const NormOptions& opt = {});

/// The p-th power integral of the flavor integrand over (a, b) for non-increasing f*.
NormValue power_integral(const LorentzSpace& space, const StepFunction& fstar, double a, double b,
                         const NormOptions& opt = {});

NormValue truncated_norm(const TruncatedNorm& tn, const StepFunction& fstar, const NormOptions& opt = {});

/// Both sides of the S / Lambda identity on the window (0, t) of the S side,
/// i.e. (0 .. t) against (1/t .. inf) under T. Pass t = inf for the full norms.
struct SidePair {
  double lhs = 0.0;
  double rhs = 0.0;
};

SidePair s_lambda_identity_check(const StepFunction& f, double p, const Weight& w, double t,
                                 Window window = Window::head, const NormOptions& opt = {});

/// (Gamma-norm^p, S-norm^p). Throws when w fails RB_p unless `enforce` is false.
SidePair gamma_equals_s_check(const StepFunction& f, double p, const Weight& w, bool enforce = true,
                              const NormOptions& opt = {});

}  // namespace lorentzk
