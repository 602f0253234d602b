#pragma once

// Non-negative, compactly supported step functions on (0, inf) and the
// exact operators built on them: rearrangement, f**, and T.
//
// Cells use the (x_{i-1}, x_i] convention with x_0 = 0.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lorentzk {

/// Strictly increasing list of positive sample points.
class Grid {
public:
  Grid() = default;
  explicit Grid(std::vector<double> points);

  static Grid log_spaced(double lo, double hi, std::size_t count);

  [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
  [[nodiscard]] auto end() const noexcept { return points_.end(); }

private:
  std::vector<double> points_;
};

class StepFunction {
public:
  StepFunction() = default;

  // Validates and canonicalizes: equal neighbours merge, trailing zeros drop.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// chi_(a, b] with 0 <= a < b, scaled by `height`.
  static StepFunction indicator(double a, double b, double height = 1.0);

  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return x_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return v_; }
  [[nodiscard]] std::size_t cells() const noexcept { return x_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return x_.empty(); }
  [[nodiscard]] double support_end() const noexcept { return x_.empty() ? 0.0 : x_.back(); }
  [[nodiscard]] double cell_start(std::size_t i) const noexcept { return i == 0 ? 0.0 : x_[i - 1]; }

  /// Value at t; t <= 0 returns the first value (right limit at zero).
  [[nodiscard]] double operator()(double t) const;

  /// Index of the cell containing t, or cells() when t lies beyond the support.
  [[nodiscard]] std::size_t cell_index(double t) const;

  [[nodiscard]] double integral() const;
  [[nodiscard]] double integral_to(double t) const;
  [[nodiscard]] double power_integral(double p) const;
  [[nodiscard]] double sup() const;
  [[nodiscard]] bool is_non_increasing() const noexcept;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

private:
  std::vector<double> x_;
  std::vector<double> v_;
};

[[nodiscard]] StepFunction rearrange(const StepFunction& f);
[[nodiscard]] StepFunction add(const StepFunction& f, const StepFunction& g);
[[nodiscard]] StepFunction scale(const StepFunction& f, double c);
[[nodiscard]] StepFunction sub_clamped(const StepFunction& f, const StepFunction& g);
[[nodiscard]] StepFunction pointwise_min(const StepFunction& f, const StepFunction& g);
[[nodiscard]] bool equimeasurable(const StepFunction& f, const StepFunction& g);

/// Union of the breakpoints of f and g.
[[nodiscard]] std::vector<double> merged_breakpoints(const StepFunction& f, const StepFunction& g);

/// Values of f on the cells of an arbitrary partition (which must refine f's support).
[[nodiscard]] std::vector<double> sample_cells(const StepFunction& f, std::span<const double> partition);

/// Splits v = u + r with 0 <= u <= v so that u + r == v holds exactly in
/// floating point. Returns the adjusted {u, r}.
[[nodiscard]] std::pair<double, double> split_exact(double v, double u);

/// Splits non-increasing v into u + r == v cellwise and exactly, with r >= r_floor
/// (up to rounding) and both parts non-increasing.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> split_monotone(const std::vector<double>& v,
                                                                                const std::vector<double>& r_floor);

enum class Shape { non_increasing, non_decreasing, general };

/// Type-erased pointwise evaluator with shape metadata and known jump points.
class EvaluableFunction {
public:
  EvaluableFunction(std::function<double(double)> fn, Shape shape,
                    std::vector<double> jumps = {}, std::string label = {});

  double operator()(double t) const { return fn_(t); }
  [[nodiscard]] Shape shape() const noexcept { return shape_; }
  [[nodiscard]] const std::vector<double>& jump_points() const noexcept { return jumps_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  static EvaluableFunction of(const StepFunction& f);

private:
  std::function<double(double)> fn_;
  Shape shape_;
  std::vector<double> jumps_;
  std::string label_;
};

/// f** of a non-increasing step function, kept in its exact piecewise form
/// (P_{i-1} + v_i (t - x_{i-1})) / t.
class MaximalFunction {
public:
  explicit MaximalFunction(StepFunction fstar);

  double operator()(double t) const;

  /// f**(t) - f*(t), computed as c_i / t without cancellation.
  [[nodiscard]] double oscillation(double t) const;

  [[nodiscard]] const StepFunction& base() const noexcept { return f_; }

  /// P_i = integral of f* over (0, x_i]; P_0 = 0.
  [[nodiscard]] const std::vector<double>& prefix() const noexcept { return prefix_; }

  /// c_i = sum_{j<i} (v_j - v_i) l_j, so f** - f* = c_i / t on cell i.
  [[nodiscard]] const std::vector<double>& oscillation_coefficients() const noexcept { return c_; }

  [[nodiscard]] EvaluableFunction evaluable() const;

private:
  StepFunction f_;
  std::vector<double> prefix_;
  std::vector<double> c_;
};

/// Tf* for a non-increasing step f*. The image is again a step function:
/// it equals P_n on (0, 1/x_n), c_i on [1/x_i, 1/x_{i-1}), and 0 on [1/x_1, inf).
class TImage {
public:
  explicit TImage(const StepFunction& fstar);

  /// Pointwise value; at a jump point 1/x_i the left-closed convention applies.
  double operator()(double t) const;

  /// The same function in canonical (x_{i-1}, x_i] form; differs only at jumps.
  [[nodiscard]] const StepFunction& as_step() const noexcept { return step_; }
  [[nodiscard]] const std::vector<double>& jump_points() const noexcept { return jumps_; }
  [[nodiscard]] bool at_jump(double t) const;

  [[nodiscard]] EvaluableFunction evaluable() const;

private:
  MaximalFunction maximal_;
  StepFunction step_;
  std::vector<double> jumps_;
};

[[nodiscard]] MaximalFunction maximal(const StepFunction& fstar);
[[nodiscard]] TImage t_op(const StepFunction& fstar);

/// Samples a non-increasing g at the grid points: value g(x_i) on (x_{i-1}, x_i].
[[nodiscard]] StepFunction t_op_project(const EvaluableFunction& g, const Grid& grid,
                                        double tolerance = 1e-9);

}  // namespace lorentzk
