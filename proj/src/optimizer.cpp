// Brute-force K and K^d oracles.
//
// Monotone mode: a split of a non-increasing step f* into two non-increasing
// parts that are constant wherever f* is amounts to splitting every downward
// jump d_i of f* as a_i + (d_i - a_i). The feasible set is the box
// prod [0, d_i], independent of any grid refinement, and the parts are
// u_i = sum_{j >= i} a_j and f*_i - u_i.
//
// General mode: u_i in [0, f*_i] on every cell of the refined partition, with
// norms taken of the rearranged parts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lorentzk/kfunctional.hpp"

namespace lorentzk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One space of the couple, evaluated on a fixed partition x_1 < ... < x_N.
class Side {
public:
  Side(const LorentzSpace& space, const std::vector<double>& x) : space_(space), x_(x) {
    if (!(space.p > 0.0) || std::isinf(space.p)) throw std::invalid_argument("oracle: need 0 < p < inf");
    const std::size_t n = x.size();
    if (space.flavor == Flavor::lambda) {
      dw_.resize(n);
      for (std::size_t i = 0; i < n; ++i) dw_[i] = space.w.moment(0.0, i == 0 ? 0.0 : x[i - 1], x[i]);
    } else if (space.flavor == Flavor::s) {
      m_.resize(n + 1);
      for (std::size_t i = 1; i < n; ++i) m_[i] = space.w.moment(-space.p, x[i - 1], x[i]);
      m_[n] = n == 0 ? 0.0 : space.w.moment(-space.p, x[n - 1], kInf);
    }
  }

  [[nodiscard]] Flavor flavor() const { return space_.flavor; }
  [[nodiscard]] double p() const { return space_.p; }
  [[nodiscard]] const Weight& weight() const { return space_.w; }

  // p-th power functional of a non-increasing vector on the partition.
  [[nodiscard]] double monotone_sum(const std::vector<double>& u) const {
    const double p = space_.p;
    const std::size_t n = x_.size();
    double s = 0.0;
    switch (space_.flavor) {
      case Flavor::lambda:
        for (std::size_t i = 0; i < n; ++i)
          if (u[i] > 0.0) s += pw(u[i], p) * dw_[i];
        return s;
      case Flavor::s: {
        double c = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
          const double next = i < n ? u[i] : 0.0;
          c += (u[i - 1] - next) * x_[i - 1];
          if (c > 0.0) s += pw(c, p) * m_[i];
        }
        return s;
      }
      case Flavor::gamma:
        return general_sum(u);
    }
    return s;
  }

  // p-th power functional of an arbitrary vector on the partition.
  [[nodiscard]] double general_sum(const std::vector<double>& u) const {
    std::vector<std::size_t> idx(u.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
    std::vector<double> bx, bv;
    double pos = 0.0;
    for (std::size_t k : idx) {
      if (!(u[k] > 0.0)) break;
      pos += x_[k] - (k == 0 ? 0.0 : x_[k - 1]);
      bx.push_back(pos);
      bv.push_back(u[k]);
    }
    if (bx.empty()) return 0.0;
    if (space_.flavor == Flavor::lambda) {
      double s = 0.0;
      for (std::size_t k = 0; k < bx.size(); ++k)
        s += pw(bv[k], space_.p) * space_.w.moment(0.0, k == 0 ? 0.0 : bx[k - 1], bx[k]);
      return s;
    }
    // Collapse exact ties so breakpoints stay strictly increasing.
    std::vector<double> cx, cv;
    for (std::size_t k = 0; k < bx.size(); ++k) {
      if (!cx.empty() && cv.back() == bv[k]) cx.back() = bx[k];
      else if (cx.empty() || bx[k] > cx.back()) {
        cx.push_back(bx[k]);
        cv.push_back(bv[k]);
      }
    }
    return power_integral(space_, StepFunction(std::move(cx), std::move(cv)), 0.0, kInf).value;
  }

  [[nodiscard]] double root(double s) const { return s == 0.0 ? 0.0 : std::pow(s, 1.0 / space_.p); }

  static double pw(double v, double p) {
    if (p == 2.0) return v * v;
    if (p == 1.0) return v;
    return std::pow(v, p);
  }

private:
  LorentzSpace space_;
  const std::vector<double>& x_;
  std::vector<double> dw_;
  std::vector<double> m_;
};

// Lambda functional of {others} plus one free cell of length ell and value x,
// in O(log n) per query after an O(n log n) build.
class LambdaLine {
public:
  void build(const Side& side, const std::vector<double>& vals, const std::vector<double>& len,
             std::size_t skip) {
    p_ = side.p();
    w_ = &side.weight();
    ell_ = len[skip];
    order_.clear();
    for (std::size_t j = 0; j < vals.size(); ++j)
      if (j != skip && vals[j] > 0.0) order_.push_back(j);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t k = order_.size();
    v_.resize(k);
    cum_.assign(k + 1, 0.0);
    pre_.assign(k + 1, 0.0);
    suf_.assign(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      v_[i] = vals[order_[i]];
      cum_[i + 1] = cum_[i] + len[order_[i]];
      pre_[i + 1] = pre_[i] + Side::pw(v_[i], p_) * w_->moment(0.0, cum_[i], cum_[i + 1]);
    }
    for (std::size_t i = k; i-- > 0;)
      suf_[i] = suf_[i + 1] + Side::pw(v_[i], p_) * w_->moment(0.0, cum_[i] + ell_, cum_[i + 1] + ell_);
  }

  [[nodiscard]] double sum(double x) const {
    if (!(x > 0.0)) return pre_.back();
    const std::size_t pos = static_cast<std::size_t>(
        std::partition_point(v_.begin(), v_.end(), [x](double v) { return v > x; }) - v_.begin());
    return pre_[pos] + Side::pw(x, p_) * w_->moment(0.0, cum_[pos], cum_[pos] + ell_) + suf_[pos];
  }

  [[nodiscard]] const std::vector<double>& values() const { return v_; }

private:
  double p_ = 2.0;
  const Weight* w_ = nullptr;
  double ell_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<double> v_, cum_, pre_, suf_;
};

struct Scored {
  double x;
  double value;
};

// Minimizes phi on [lo, hi]: coarse scan, then golden section around the best
// sample. Never returns a point worse than `current`.
template <class Phi>
Scored minimize_1d(const Phi& phi, double lo, double hi, Scored current) {
  if (!(hi > lo)) return current;
  constexpr int kScan = 16;
  double xs[kScan + 1];
  double fs[kScan + 1];
  int best = 0;
  for (int k = 0; k <= kScan; ++k) {
    xs[k] = k == kScan ? hi : lo + (hi - lo) * k / kScan;
    fs[k] = phi(xs[k]);
    if (fs[k] < fs[best]) best = k;
  }
  Scored out = fs[best] < current.value ? Scored{xs[best], fs[best]} : current;
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, kScan)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = phi(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = phi(d);
    }
  }
  if (fc < out.value) out = {c, fc};
  if (fd < out.value) out = {d, fd};
  return out;
}

// Golden section on [a, b] for a function convex there.
template <class Phi>
Scored golden(const Phi& phi, double a, double b, Scored best) {
  if (!(b > a)) return best;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = phi(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = phi(d);
    }
  }
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

class Problem {
public:
  Problem(const KQuery& q, std::vector<double> x, std::vector<double> g)
      : x_(std::move(x)), g_(std::move(g)), s0_(q.x0, x_), s1_(q.x1, x_), t_(q.t) {
    len_.resize(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) len_[i] = x_[i] - (i == 0 ? 0.0 : x_[i - 1]);
  }

  [[nodiscard]] std::size_t size() const { return x_.size(); }
  [[nodiscard]] const std::vector<double>& cap() const { return g_; }
  [[nodiscard]] const std::vector<double>& partition() const { return x_; }

  [[nodiscard]] double monotone_value(const std::vector<double>& u, const std::vector<double>& r) const {
    return combine(s0_.monotone_sum(u), s1_.monotone_sum(r));
  }

  [[nodiscard]] double general_value(const std::vector<double>& u) const {
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::max(0.0, g_[i] - u[i]);
    return combine(s0_.general_sum(u), s1_.general_sum(r));
  }

  [[nodiscard]] double combine(double a, double b) const {
    const double lhs = s0_.root(a);
    const double rhs = s1_.root(b);
    if (std::isinf(lhs) || std::isinf(rhs)) return kInf;
    return lhs + t_ * rhs;
  }

  [[nodiscard]] bool lambda_couple() const {
    return s0_.flavor() == Flavor::lambda && s1_.flavor() == Flavor::lambda;
  }

  const Side& side0() const { return s0_; }
  const Side& side1() const { return s1_; }
  const std::vector<double>& lengths() const { return len_; }
  double t() const { return t_; }

private:
  std::vector<double> x_;
  std::vector<double> g_;
  std::vector<double> len_;
  Side s0_;
  Side s1_;
  double t_;
};

struct Candidate {
  std::vector<double> u;
  double value = kInf;
  std::string start;
  std::size_t sweeps = 0;
  bool approximate = false;
};

// ---- monotone (jump-split) mode --------------------------------------------

class JumpProblem {
public:
  explicit JumpProblem(const Problem& pr) : pr_(pr) {
    const auto& g = pr.cap();
    d_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d_[i] = g[i] - (i + 1 < g.size() ? g[i + 1] : 0.0);
  }

  [[nodiscard]] const std::vector<double>& jumps() const { return d_; }

  void parts(const std::vector<double>& a, std::vector<double>& u, std::vector<double>& r) const {
    const std::size_t n = a.size();
    u.resize(n);
    r.resize(n);
    double su = 0.0, sr = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      su += a[i];
      sr += d_[i] - a[i];
      u[i] = su;
      r[i] = sr;
    }
  }

  [[nodiscard]] double value(const std::vector<double>& a) const {
    parts(a, u_, r_);
    return pr_.monotone_value(u_, r_);
  }

private:
  const Problem& pr_;
  std::vector<double> d_;
  mutable std::vector<double> u_, r_;
};

std::vector<double> jumps_of(const std::vector<double>& u) {
  std::vector<double> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = u[i] - (i + 1 < u.size() ? u[i + 1] : 0.0);
  return a;
}

std::vector<double> cell_values(const JumpProblem& jp, const std::vector<double>& a) {
  std::vector<double> u, r;
  jp.parts(a, u, r);
  return u;
}

// Two-level truncation family u = clamp(g - lo, 0, hi - lo) over all level pairs.
Candidate truncation_family(const Problem& pr) {
  const auto& g = pr.cap();
  std::vector<double> levels(g.begin(), g.end());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Candidate best;
  best.start = "truncation";
  std::vector<double> u(g.size()), r(g.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i; j < levels.size(); ++j) {
      const double lo = levels[i], hi = levels[j];
      for (std::size_t k = 0; k < g.size(); ++k) {
        u[k] = std::clamp(g[k] - lo, 0.0, hi - lo);
        r[k] = g[k] - u[k];
      }
      const double v = pr.monotone_value(u, r);
      if (v < best.value) {
        best.value = v;
        best.u = u;
      }
    }
  }
  return best;
}

bool on_lattice(double v, double step) {
  const double k = std::round(v / step);
  return std::abs(v - k * step) <= 1e-9 * std::max(1.0, std::abs(v));
}

double lattice_floor(double v, double step) { return std::floor(v / step + 1e-9) * step; }

// Coordinate descent on the jump box, continuous or on a lattice.
Candidate jump_descent(const JumpProblem& jp, std::vector<double> a, const OracleOptions& opt,
                       const std::string& label) {
  const auto& d = jp.jumps();
  const std::size_t n = d.size();
  const double step = opt.lattice_step;
  Candidate out;
  out.start = label;
  double value = jp.value(a);
  for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double before = value;
    for (std::size_t j = 0; j < n; ++j) {
      const double keep = a[j];
      auto phi = [&](double x) {
        a[j] = x;
        return jp.value(a);
      };
      Scored best{keep, value};
      if (step > 0.0) {
        for (double x = 0.0; x <= d[j] + 0.5 * step; x += step) {
          const double xv = std::min(x, d[j]);
          const double f = phi(xv);
          if (f < best.value) best = {xv, f};
        }
      } else {
        best = minimize_1d(phi, 0.0, d[j], best);
      }
      a[j] = best.x;
      value = best.value;
    }
    if (step > 0.0) {
      // Pair moves escape the coordinate-wise traps of the discrete problem.
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const double kj = a[j], kk = a[k];
          double bj = kj, bk = kk;
          for (double x = 0.0; x <= d[j] + 0.5 * step; x += step)
            for (double y = 0.0; y <= d[k] + 0.5 * step; y += step) {
              a[j] = std::min(x, d[j]);
              a[k] = std::min(y, d[k]);
              const double f = jp.value(a);
              if (f < value) {
                value = f;
                bj = a[j];
                bk = a[k];
              }
            }
          a[j] = bj;
          a[k] = bk;
        }
    }
    out.sweeps = sweep + 1;
    const double gain = before - value;
    if (!(gain > 1e-13 * std::max(1e-300, std::abs(value)))) break;
    if (sweep + 1 == opt.max_sweeps && gain > opt.tolerance * std::abs(value)) out.approximate = true;
  }
  out.value = value;
  out.u = cell_values(jp, a);
  return out;
}

Candidate jump_exhaustive(const JumpProblem& jp, const OracleOptions& opt) {
  const auto& d = jp.jumps();
  const double step = opt.lattice_step;
  const std::size_t n = d.size();
  std::vector<std::size_t> counts(n), idx(n, 0);
  for (std::size_t j = 0; j < n; ++j) counts[j] = static_cast<std::size_t>(std::llround(d[j] / step)) + 1;
  std::vector<double> a(n, 0.0);
  Candidate best;
  best.start = "exhaustive";
  while (true) {
    for (std::size_t j = 0; j < n; ++j) a[j] = std::min(static_cast<double>(idx[j]) * step, d[j]);
    const double v = jp.value(a);
    if (v < best.value) {
      best.value = v;
      best.u = cell_values(jp, a);
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == n) break;
  }
  return best;
}

// ---- general (non-monotone) mode -------------------------------------------

Candidate cell_descent(const Problem& pr, std::vector<double> u, const OracleOptions& opt,
                       const std::string& label) {
  const auto& g = pr.cap();
  const std::size_t n = g.size();
  const double step = opt.lattice_step;
  const bool fast = pr.lambda_couple() && step == 0.0;
  Candidate out;
  out.start = label;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = g[i] - u[i];
  double value = pr.general_value(u);
  LambdaLine l0, l1;
  std::vector<double> cand;

  for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double before = value;
    for (std::size_t i = 0; i < n; ++i) {
      Scored best{u[i], value};
      if (fast) {
        l0.build(pr.side0(), u, pr.lengths(), i);
        l1.build(pr.side1(), r, pr.lengths(), i);
        const double gi = g[i];
        auto phi = [&](double x) { return pr.combine(l0.sum(x), l1.sum(gi - x)); };
        best.value = phi(u[i]);
        // Piece boundaries: where the free cell changes rank on either side.
        cand.assign({0.0, gi});
        for (double v : l0.values())
          if (v > 0.0 && v < gi) cand.push_back(v);
        for (double v : l1.values())
          if (v > 0.0 && v < gi) cand.push_back(gi - v);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::size_t bi = 0;
        double bv = kInf;
        for (std::size_t k = 0; k < cand.size(); ++k) {
          const double f = phi(cand[k]);
          if (f < bv) {
            bv = f;
            bi = k;
          }
        }
        if (bv < best.value) best = {cand[bi], bv};
        if (bi > 0) best = golden(phi, cand[bi - 1], cand[bi], best);
        if (bi + 1 < cand.size()) best = golden(phi, cand[bi], cand[bi + 1], best);
        // Re-score through the full evaluator so accepted moves are genuine.
        if (best.x != u[i]) {
          const double keep = u[i];
          u[i] = best.x;
          const double full = pr.general_value(u);
          if (full < value) {
            value = full;
            r[i] = g[i] - u[i];
          } else {
            u[i] = keep;
          }
        }
        continue;
      }
      const double keep = u[i];
      auto phi = [&](double x) {
        u[i] = x;
        return pr.general_value(u);
      };
      if (step > 0.0) {
        for (double x = 0.0; x <= g[i] + 0.5 * step; x += step) {
          const double xv = std::min(x, g[i]);
          const double f = phi(xv);
          if (f < best.value) best = {xv, f};
        }
      } else {
        best = minimize_1d(phi, 0.0, g[i], best);
      }
      u[i] = best.value < value ? best.x : keep;
      value = std::min(value, best.value);
      r[i] = g[i] - u[i];
    }
    if (step > 0.0) {
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          double bj = u[j], bk = u[k];
          for (double x = 0.0; x <= g[j] + 0.5 * step; x += step)
            for (double y = 0.0; y <= g[k] + 0.5 * step; y += step) {
              u[j] = std::min(x, g[j]);
              u[k] = std::min(y, g[k]);
              const double f = pr.general_value(u);
              if (f < value) {
                value = f;
                bj = u[j];
                bk = u[k];
              }
            }
          u[j] = bj;
          u[k] = bk;
          r[j] = g[j] - u[j];
          r[k] = g[k] - u[k];
        }
    }
    out.sweeps = sweep + 1;
    const double gain = before - value;
    if (!(gain > 1e-13 * std::max(1e-300, std::abs(value)))) break;
    if (sweep + 1 == opt.max_sweeps && gain > opt.tolerance * std::abs(value)) out.approximate = true;
  }
  out.value = value;
  out.u = u;
  return out;
}

Candidate cell_exhaustive(const Problem& pr, const OracleOptions& opt) {
  const auto& g = pr.cap();
  const double step = opt.lattice_step;
  const std::size_t n = g.size();
  std::vector<std::size_t> counts(n), idx(n, 0);
  for (std::size_t j = 0; j < n; ++j) counts[j] = static_cast<std::size_t>(std::llround(g[j] / step)) + 1;
  std::vector<double> u(n, 0.0);
  Candidate best;
  best.start = "exhaustive";
  while (true) {
    for (std::size_t j = 0; j < n; ++j) u[j] = std::min(static_cast<double>(idx[j]) * step, g[j]);
    const double v = pr.general_value(u);
    if (v < best.value) {
      best.value = v;
      best.u = u;
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == n) break;
  }
  return best;
}

Decomposition to_decomposition(const std::vector<double>& x, const std::vector<double>& g,
                               const std::vector<double>& u) {
  // Monotone candidates keep both parts exactly non-increasing after rounding.
  if (std::is_sorted(g.rbegin(), g.rend()) && std::is_sorted(u.rbegin(), u.rend())) {
    std::vector<double> floor(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) floor[i] = g[i] - std::min(u[i], g[i]);
    auto [a, b] = split_monotone(g, floor);
    return Decomposition{StepFunction(x, std::move(a)), StepFunction(x, std::move(b)), Provenance::optimizer};
  }
  std::vector<double> a(x.size()), b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto [lo, hi] = split_exact(g[i], u[i]);
    a[i] = lo;
    b[i] = hi;
  }
  return Decomposition{StepFunction(x, std::move(a)), StepFunction(x, std::move(b)), Provenance::optimizer};
}

std::vector<double> refine_partition(const StepFunction& fstar, const Grid& grid) {
  std::vector<double> x = fstar.breakpoints();
  const double end = fstar.support_end();
  for (double p : grid.points())
    if (p < end) x.push_back(p);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace

Grid default_oracle_grid(const StepFunction& fstar, std::size_t m) {
  if (fstar.is_zero()) return Grid({1.0});
  const double lo = fstar.breakpoints().front() / 10.0;
  const double hi = fstar.support_end() * 10.0;
  return Grid::log_spaced(lo, hi, std::max<std::size_t>(m, 2));
}

OracleResult k_oracle(const KQuery& q, const Grid& grid, bool monotone_only, const OracleOptions& opt) {
  if (!(q.t > 0.0) || !std::isfinite(q.t)) throw std::invalid_argument("k_oracle: t must be positive and finite");
  const StepFunction fstar = rearrange(q.f);
  OracleResult res;
  res.seed = opt.seed;
  if (fstar.is_zero()) {
    res.best_start = "zero";
    res.best.provenance = Provenance::optimizer;
    return res;
  }
  const double step = opt.lattice_step;
  if (opt.exhaustive && !(step > 0.0)) throw std::invalid_argument("k_oracle: exhaustive mode needs a lattice step");
  if (step > 0.0)
    for (double v : fstar.values())
      if (!on_lattice(v, step)) throw std::invalid_argument("k_oracle: values of f* are not on the lattice");

  std::mt19937_64 rng(opt.seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // Monotone optimum on the coarse partition given by f* itself.
  const std::vector<double> xc = fstar.breakpoints();
  const Problem coarse(q, xc, fstar.values());
  const JumpProblem jp(coarse);
  const Candidate trunc = truncation_family(coarse);
  res.truncation_value = trunc.value;

  Candidate best_mono;
  if (opt.exhaustive && monotone_only) {
    best_mono = jump_exhaustive(jp, opt);
  } else {
    const auto& d = jp.jumps();
    std::vector<std::pair<std::string, std::vector<double>>> starts;
    starts.emplace_back("truncation", jumps_of(trunc.u));
    starts.emplace_back("all-f0", d);
    starts.emplace_back("all-f1", std::vector<double>(d.size(), 0.0));
    std::vector<double> half(d.size()), rnd(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      half[i] = step > 0.0 ? lattice_floor(0.5 * d[i], step) : 0.5 * d[i];
      rnd[i] = step > 0.0 ? lattice_floor(uniform() * (d[i] + step), step) : uniform() * d[i];
      rnd[i] = std::min(rnd[i], d[i]);
    }
    starts.emplace_back("proportional", half);
    starts.emplace_back("random", rnd);
    for (auto& [label, a0] : starts) {
      Candidate c = jump_descent(jp, a0, opt, label);
      res.sweeps += c.sweeps;
      res.approximate = res.approximate || c.approximate;
      if (c.value < best_mono.value) best_mono = std::move(c);
    }
  }

  if (monotone_only) {
    res.best = to_decomposition(xc, fstar.values(), best_mono.u);
    res.value = k_objective(q, res.best);
    res.best_start = best_mono.start;
    return res;
  }

  const std::vector<double> xf = refine_partition(fstar, grid);
  const std::vector<double> gf = sample_cells(fstar, xf);
  const Problem fine(q, xf, gf);
  const StepFunction mono_u(xc, best_mono.u);
  const std::vector<double> mono_fine = sample_cells(mono_u, xf);

  Candidate best;
  if (opt.exhaustive) {
    best = cell_exhaustive(fine, opt);
  } else {
    std::vector<std::pair<std::string, std::vector<double>>> starts;
    starts.emplace_back("monotone-optimum", mono_fine);
    starts.emplace_back("truncation", sample_cells(StepFunction(xc, trunc.u), xf));
    starts.emplace_back("all-f0", gf);
    starts.emplace_back("all-f1", std::vector<double>(gf.size(), 0.0));
    std::vector<double> half(gf.size()), rnd(gf.size());
    for (std::size_t i = 0; i < gf.size(); ++i) {
      half[i] = step > 0.0 ? lattice_floor(0.5 * gf[i], step) : 0.5 * gf[i];
      rnd[i] = step > 0.0 ? lattice_floor(uniform() * (gf[i] + step), step) : uniform() * gf[i];
      rnd[i] = std::min(rnd[i], gf[i]);
    }
    starts.emplace_back("proportional", half);
    starts.emplace_back("random", rnd);
    for (auto& [label, u0] : starts) {
      Candidate c = cell_descent(fine, u0, opt, label);
      res.sweeps += c.sweeps;
      res.approximate = res.approximate || c.approximate;
      if (c.value < best.value) best = std::move(c);
    }
  }

  // The monotone optimum is feasible here too; keep whichever scores lower
  // under the common norm evaluation.
  Decomposition general = to_decomposition(xf, gf, best.u);
  const double general_value = k_objective(q, general);
  Decomposition mono = to_decomposition(xc, fstar.values(), best_mono.u);
  const double mono_value = k_objective(q, mono);
  if (mono_value <= general_value) {
    res.best = std::move(mono);
    res.value = mono_value;
    res.best_start = "monotone-optimum";
  } else {
    res.best = std::move(general);
    res.value = general_value;
    res.best_start = best.start;
  }
  return res;
}

}  // namespace lorentzk
