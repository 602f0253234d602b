#include "lorentzk/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace lorentzk {

namespace {

bool strictly_increasing_positive(const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !(x[i] > 0.0)) return false;
    if (i > 0 && !(x[i] > x[i - 1])) return false;
  }
  return true;
}

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (!strictly_increasing_positive(points_))
    throw std::invalid_argument("grid points must be positive, finite and strictly increasing");
}

Grid Grid::log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || count == 0)
    throw std::invalid_argument("log_spaced: need 0 < lo <= hi and count > 0");
  if (count == 1 || lo == hi) return Grid({lo});
  std::vector<double> pts(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    pts[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  pts.front() = lo;
  pts.back() = hi;
  return Grid(std::move(pts));
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size())
    throw std::invalid_argument("step function: breakpoints and values differ in length");
  if (!strictly_increasing_positive(breakpoints))
    throw std::invalid_argument("step function: breakpoints must be positive and strictly increasing");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("step function: values must be finite and non-negative");

  x_.reserve(breakpoints.size());
  v_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!v_.empty() && v_.back() == values[i]) {
      x_.back() = breakpoints[i];
    } else {
      x_.push_back(breakpoints[i]);
      v_.push_back(values[i]);
    }
  }
  while (!v_.empty() && v_.back() == 0.0) {
    v_.pop_back();
    x_.pop_back();
  }
}

StepFunction StepFunction::indicator(double a, double b, double height) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("indicator: need 0 <= a < b");
  if (a == 0.0) return StepFunction({b}, {height});
  return StepFunction({a, b}, {0.0, height});
}

std::size_t StepFunction::cell_index(double t) const {
  return static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), t) - x_.begin());
}

double StepFunction::operator()(double t) const {
  const std::size_t i = cell_index(t);
  return i < v_.size() ? v_[i] : 0.0;
}

double StepFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) s += v_[i] * (x_[i] - cell_start(i));
  return s;
}

double StepFunction::integral_to(double t) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double a = cell_start(i);
    if (t <= a) break;
    s += v_[i] * (std::min(t, x_[i]) - a);
  }
  return s;
}

double StepFunction::power_integral(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i)
    if (v_[i] > 0.0) s += std::pow(v_[i], p) * (x_[i] - cell_start(i));
  return s;
}

double StepFunction::sup() const {
  return v_.empty() ? 0.0 : *std::max_element(v_.begin(), v_.end());
}

bool StepFunction::is_non_increasing() const noexcept {
  return std::is_sorted(v_.rbegin(), v_.rend());
}

StepFunction rearrange(const StepFunction& f) {
  if (f.is_non_increasing()) return f;
  // Total length per level, largest level first.
  std::map<double, double, std::greater<>> lengths;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const double v = f.values()[i];
    if (v > 0.0) lengths[v] += f.breakpoints()[i] - f.cell_start(i);
  }
  std::vector<double> x, v;
  double pos = 0.0;
  for (const auto& [level, len] : lengths) {
    pos += len;
    x.push_back(pos);
    v.push_back(level);
  }
  return StepFunction(std::move(x), std::move(v));
}

std::vector<double> merged_breakpoints(const StepFunction& f, const StepFunction& g) {
  std::vector<double> out;
  out.reserve(f.cells() + g.cells());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
             g.breakpoints().end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> sample_cells(const StepFunction& f, std::span<const double> partition) {
  std::vector<double> out(partition.size());
  std::size_t j = 0;
  const auto& x = f.breakpoints();
  for (std::size_t i = 0; i < partition.size(); ++i) {
    while (j < x.size() && x[j] < partition[i]) ++j;
    out[i] = j < x.size() ? f.values()[j] : 0.0;
  }
  return out;
}

namespace {

template <class Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
  auto x = merged_breakpoints(f, g);
  const auto fv = sample_cells(f, x);
  const auto gv = sample_cells(g, x);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = op(fv[i], gv[i]);
  return StepFunction(std::move(x), std::move(v));
}

}  // namespace

StepFunction add(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](double a, double b) { return a + b; });
}

StepFunction scale(const StepFunction& f, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale: factor must be finite and >= 0");
  if (c == 0.0) return {};
  auto v = f.values();
  for (double& e : v) e *= c;
  return StepFunction(f.breakpoints(), std::move(v));
}

StepFunction sub_clamped(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](double a, double b) { return a > b ? a - b : 0.0; });
}

StepFunction pointwise_min(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](double a, double b) { return std::min(a, b); });
}

bool equimeasurable(const StepFunction& f, const StepFunction& g) {
  return rearrange(f) == rearrange(g);
}

std::pair<double, double> split_exact(double v, double u) {
  u = std::clamp(u, 0.0, v);
  // Sterbenz: v - u is exact once u >= v/2; otherwise recover u from the
  // rounded remainder, which is then >= v/2.
  if (u >= 0.5 * v) return {u, v - u};
  const double r = v - u;
  return {v - r, r};
}

// v - r is rounded down (two-sum check), which keeps v - u exact by Sterbenz.
std::pair<std::vector<double>, std::vector<double>> split_monotone(const std::vector<double>& v,
                                                                   const std::vector<double>& r_floor) {
  const std::size_t n = v.size();
  std::vector<double> u(n), r(n);
  double r_next = 0.0, u_next = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double rk = std::min(v[k], std::max(r_floor[k], r_next));
    double d = v[k] - rk;
    // Two-sum error of the subtraction; positive d overshoot means rounding up.
    const double bv = d - v[k];
    const double err = (v[k] - (d - bv)) + (-rk - bv);
    if (err < 0.0) d = std::nextafter(d, 0.0);
    d = std::max(d, u_next);
    if (d > v[k]) d = v[k];
    u[k] = d;
    r[k] = v[k] - d;
    r_next = r[k];
    u_next = u[k];
  }
  return {std::move(u), std::move(r)};
}

EvaluableFunction::EvaluableFunction(std::function<double(double)> fn, Shape shape,
                                     std::vector<double> jumps, std::string label)
    : fn_(std::move(fn)), shape_(shape), jumps_(std::move(jumps)), label_(std::move(label)) {}

EvaluableFunction EvaluableFunction::of(const StepFunction& f) {
  return EvaluableFunction([f](double t) { return f(t); },
                           f.is_non_increasing() ? Shape::non_increasing : Shape::general,
                           f.breakpoints(), "step");
}

MaximalFunction::MaximalFunction(StepFunction fstar) : f_(std::move(fstar)) {
  if (!f_.is_non_increasing()) throw std::invalid_argument("maximal: argument must be non-increasing");
  const auto& x = f_.breakpoints();
  const auto& v = f_.values();
  const std::size_t n = x.size();
  prefix_.assign(n + 1, 0.0);
  c_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix_[i + 1] = prefix_[i] + v[i] * (x[i] - f_.cell_start(i));
    // c for the cell after i; beyond x_n this reads c = P_n.
    const double next = i + 1 < n ? v[i + 1] : 0.0;
    c_[i + 1] = c_[i] + (v[i] - next) * x[i];
  }
}

double MaximalFunction::operator()(double t) const {
  const auto& x = f_.breakpoints();
  const auto& v = f_.values();
  if (x.empty()) return 0.0;
  if (!(t > 0.0)) return v.front();
  const std::size_t i = f_.cell_index(t);
  if (i == x.size()) return prefix_.back() / t;
  return (prefix_[i] + v[i] * (t - f_.cell_start(i))) / t;
}

double MaximalFunction::oscillation(double t) const {
  if (f_.is_zero() || !(t > 0.0)) return 0.0;
  return c_[f_.cell_index(t)] / t;
}

EvaluableFunction MaximalFunction::evaluable() const {
  return EvaluableFunction([m = *this](double t) { return m(t); }, Shape::non_increasing,
                           {}, "maximal");
}

TImage::TImage(const StepFunction& fstar) : maximal_(fstar) {
  const auto& x = fstar.breakpoints();
  const auto& c = maximal_.oscillation_coefficients();
  const std::size_t n = x.size();
  std::vector<double> y(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Cell k of the image is (1/x_{n-k}, 1/x_{n-k-1}] in 1-based f* indexing.
    y[k] = 1.0 / x[n - 1 - k];
    w[k] = c[n - k];
  }
  jumps_ = y;
  step_ = StepFunction(std::move(y), std::move(w));
}

double TImage::operator()(double t) const {
  const auto& f = maximal_.base();
  if (f.is_zero()) return 0.0;
  if (!(t > 0.0)) return maximal_.prefix().back();
  return maximal_.oscillation_coefficients()[f.cell_index(1.0 / t)];
}

bool TImage::at_jump(double t) const {
  return std::binary_search(jumps_.begin(), jumps_.end(), t);
}

EvaluableFunction TImage::evaluable() const {
  return EvaluableFunction([img = *this](double t) { return img(t); }, Shape::non_increasing,
                           jumps_, "T");
}

MaximalFunction maximal(const StepFunction& fstar) { return MaximalFunction(fstar); }

TImage t_op(const StepFunction& fstar) { return TImage(fstar); }

StepFunction t_op_project(const EvaluableFunction& g, const Grid& grid, double tolerance) {
  std::vector<double> x(grid.points().begin(), grid.points().end());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = g(x[i]);
    if (!std::isfinite(v[i]) || v[i] < 0.0)
      throw std::domain_error("t_op_project: sampled value is negative or not finite");
    if (i > 0 && v[i] > v[i - 1] + tolerance * std::max(1.0, v[i - 1]))
      throw std::domain_error("t_op_project: sampled function increases at t = " + std::to_string(x[i]));
    if (i > 0 && v[i] > v[i - 1]) v[i] = v[i - 1];
  }
  return StepFunction(std::move(x), std::move(v));
}

}  // namespace lorentzk
