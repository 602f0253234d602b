#pragma once

// Seeded generators for the property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lorentzk/stepfn.hpp"

namespace gen {

struct Source {
  std::mt19937_64 rng;
  explicit Source(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
};

// Arbitrary (not necessarily monotone) step function with up to max_cells cells.
inline lorentzk::StepFunction step(Source& s, std::size_t max_cells = 8, bool allow_zero_cells = true) {
  const std::size_t n = 1 + s.below(max_cells);
  std::vector<double> x(n), v(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += s.uniform(0.05, 2.0);
    x[i] = acc;
    v[i] = (allow_zero_cells && s.below(5) == 0) ? 0.0 : s.uniform(0.1, 5.0);
  }
  v.back() = s.uniform(0.1, 5.0);
  return lorentzk::StepFunction(std::move(x), std::move(v));
}

inline lorentzk::StepFunction monotone(Source& s, std::size_t max_cells = 8) {
  return lorentzk::rearrange(step(s, max_cells, false));
}

// Non-increasing step function with values on the integer lattice {1..levels}.
inline lorentzk::StepFunction quantized(Source& s, std::size_t max_cells, int levels) {
  const std::size_t n = 1 + s.below(max_cells);
  std::vector<double> x(n), v(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += s.uniform(0.1, 2.0);
    x[i] = acc;
    v[i] = 1.0 + static_cast<double>(s.below(static_cast<std::size_t>(levels)));
  }
  return lorentzk::StepFunction(std::move(x), std::move(v));
}

// Relative closeness that treats equal infinities as equal.
inline bool close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// sup (f - g)^+ relative to sup g, for majorant checks up to rounding.
inline double excess(const lorentzk::StepFunction& f, const lorentzk::StepFunction& g) {
  const auto d = lorentzk::sub_clamped(f, g);
  return d.is_zero() ? 0.0 : d.sup() / std::max(1.0, g.sup());
}

}  // namespace gen
