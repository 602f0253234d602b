#pragma once

// Adaptive quadrature helpers: finite intervals via Boost's Gauss-Kronrod,
// plus dyadic splitting for integrable endpoint singularities at 0 and for
// improper tails.

#include <functional>
#include <span>

namespace lorentzk::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  unsigned max_depth = 18;
  // Dyadic pieces tried before a head or tail integral is declared divergent.
  unsigned max_pieces = 600;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;
};

using Integrand = std::function<double(double)>;

Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral over [a, b] split at the given interior points.
Result integrate_pieces(const Integrand& f, double a, double b, std::span<const double> cuts,
                        const Options& opt = {});

/// Integral over (0, b], for integrands that may blow up like a power at 0.
Result integrate_from_zero(const Integrand& f, double b, const Options& opt = {});

/// Integral over [a, inf) via u = 1/s and integrate_from_zero on (0, 1/a].
Result integrate_to_infinity(const Integrand& f, double a, const Options& opt = {});

}  // namespace lorentzk::quad
