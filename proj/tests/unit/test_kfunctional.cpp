#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gen.hpp"
#include "lorentzk/kfunctional.hpp"

using namespace lorentzk;

namespace {

StepFunction sf(std::vector<double> x, std::vector<double> v) { return StepFunction(std::move(x), std::move(v)); }

const LorentzSpace L1{Flavor::lambda, 1.0, Weight::power(0.0)};

bool exact_sum(const Decomposition& d, const StepFunction& f) { return add(d.f0, d.f1) == f; }

}  // namespace

TEST_CASE("truncation decomposition") {
  const auto a = truncation_decomposition(StepFunction::indicator(0, 2), 1.0);
  CHECK(a.f0.is_zero());
  CHECK(a.f1 == StepFunction::indicator(0, 2));

  const StepFunction two = sf({1.0, 2.0}, {2.0, 1.0});
  const auto b = truncation_decomposition(two, 1.0);
  CHECK(b.f0 == StepFunction::indicator(0, 1));
  CHECK(b.f1 == sf({2.0}, {1.0}));
  CHECK(b.provenance == Provenance::truncation);

  const auto c = truncation_decomposition(two, 5.0);
  CHECK(c.f0 == two);
  CHECK(c.f1.is_zero());

  gen::Source s(61);
  for (int k = 0; k < 200; ++k) {
    const StepFunction f = gen::monotone(s);
    const auto d = truncation_decomposition(f, s.uniform(0.01, 10.0));
    CHECK(exact_sum(d, f));
    CHECK(d.f0.is_non_increasing());
    CHECK(d.f1.is_non_increasing());
  }
}

TEST_CASE("decomposition lemma") {
  gen::Source s(67);
  const StepFunction f = sf({1.0, 3.0}, {3.0, 1.0});
  const auto trivial = decomposition_lemma(f, f, StepFunction());
  CHECK(trivial.f0 == f);
  CHECK(trivial.f1.is_zero());

  const auto ex = decomposition_lemma(sf({2.0}, {2.0}), sf({1.0}, {2.0}), sf({2.0}, {2.0}));
  CHECK(ex.f0.is_zero());
  CHECK(ex.f1 == sf({2.0}, {2.0}));

  CHECK_THROWS_AS(decomposition_lemma(sf({2.0}, {3.0}), sf({2.0}, {1.0}), sf({2.0}, {1.0})), std::domain_error);

  for (int k = 0; k < 200; ++k) {
    const StepFunction g = gen::monotone(s), h = gen::monotone(s);
    const StepFunction sum = add(g, h);
    // Any non-increasing f below g + h.
    const StepFunction f = rearrange(pointwise_min(sum, gen::monotone(s)));
    const StepFunction fm = pointwise_min(f, sum);
    const auto d = decomposition_lemma(fm, g, h);
    CHECK(exact_sum(d, fm));
    CHECK(d.f0.is_non_increasing());
    CHECK(d.f1.is_non_increasing());
    CHECK(gen::excess(d.f0, g) <= 1e-12);
    CHECK(gen::excess(d.f1, h) <= 1e-12);
  }
}

TEST_CASE("explicit S formula") {
  const auto r = corollary_1(StepFunction::indicator(0, 4), 4.0, 2.0, 1.0);
  CHECK(r.head == 0.0);
  CHECK(r.theta == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.warnings.empty());

  CHECK(corollary_1(StepFunction(), 3.0, 2.0, 1.0).value == 0.0);

  gen::Source s(71);
  const auto cfg = corollary_couple(2.0, 1.0);
  const auto hyp = check_s_hypotheses(cfg);
  CHECK(hyp.all_hold());
  for (int k = 0; k < 20; ++k) {
    const StepFunction f = gen::step(s);
    double head = 0.0, tail = INFINITY;
    for (double t : Grid::log_spaced(0.01, 100.0, 20)) {
      const auto e = k_explicit_s(f, t, cfg, &hyp);
      CHECK(e.head >= head * (1 - 1e-12));
      CHECK(e.tail <= tail * (1 + 1e-12));
      head = e.head;
      tail = e.tail;
    }
  }

  // Hypothesis failures travel with the result.
  const auto bad = k_explicit_s(StepFunction::indicator(0, 1), 1.0, CoupleConfig{2.0, Weight::power(0.0), 2.0, Weight::power(0.0)});
  CHECK_FALSE(bad.warnings.empty());
}

TEST_CASE("explicit general formula") {
  const CoupleConfig eq{2.0, Weight::power(0.0), 2.0, Weight::power(0.0)};
  gen::Source s(73);
  for (int k = 0; k < 20; ++k) {
    const StepFunction f = gen::monotone(s);
    const double full = norm({Flavor::lambda, 2.0, Weight::power(0.0)}, f).value;
    for (double t : {0.1, 1.0, 10.0}) {
      const auto e = k_explicit_general(f, t, eq);
      CHECK(e.sigma == doctest::Approx(1.0));
      CHECK(e.value >= full * (1 - 1e-12));
      CHECK(e.value <= std::pow(2.0, 1.5) * full);
    }
  }
  const StepFunction chi4 = StepFunction::indicator(0, 4);
  const CoupleConfig lam{2.0, Weight::power(1.0), 2.0, Weight::power(0.0)};
  const auto beyond = k_explicit_general(chi4, 10.0, lam);
  CHECK(beyond.tail == 0.0);
  CHECK(beyond.head == doctest::Approx(norm({Flavor::lambda, 2.0, Weight::power(1.0)}, chi4).value));

  // Truncated pieces of the Lambda^2(s^0) / Lambda^2(s^-1) example; sigma itself
  // is undefined there because s^-1 has no finite primitive.
  CHECK(truncated_norm({{Flavor::lambda, 2.0, Weight::power(0.0)}, Window::head, 1.0}, chi4).value ==
        doctest::Approx(1.0));
  CHECK(truncated_norm({{Flavor::lambda, 2.0, Weight::power(-1.0)}, Window::tail, 1.0}, chi4).value ==
        doctest::Approx(std::sqrt(std::log(4.0))));
  CHECK_THROWS_AS(k_explicit_general(chi4, 1.0, CoupleConfig{2.0, Weight::power(0.0), 2.0, Weight::power(-1.0)}),
                  std::domain_error);

  // Norm form against integral form.
  for (int k = 0; k < 20; ++k) {
    const StepFunction f = gen::monotone(s);
    for (double t : {0.2, 1.0, 3.0}) {
      const double a = k_explicit_general(f, t, lam, ExplicitForm::integral).value;
      const double b = k_explicit_general(f, t, lam, ExplicitForm::norm).value;
      const double r = a / b;
      CHECK(r <= 2.0);
      CHECK(r >= 0.5);
    }
  }
}

TEST_CASE("oracle on the L1 couple") {
  const StepFunction f = sf({1.0, 2.0}, {2.0, 1.0});
  for (double t : {0.01, 0.3, 1.0, 2.5, 100.0}) {
    const KQuery q{f, t, L1, L1};
    const auto r = k_oracle(q, default_oracle_grid(f, 64), false);
    CHECK(r.value == doctest::Approx(std::min(1.0, t) * 3.0).epsilon(1e-9));
    CHECK(exact_sum(r.best, f));
    CHECK(r.seed == 7);
  }
  // Monotone and concave in t.
  gen::Source s(79);
  const StepFunction g = gen::step(s);
  std::vector<double> ks;
  const auto ts = Grid::log_spaced(0.05, 20.0, 12);
  for (double t : ts.points()) ks.push_back(k_oracle({g, t, L1, L1}, default_oracle_grid(rearrange(g), 32), false).value);
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] >= ks[i - 1] * (1 - 1e-9));
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    const double a = ts[i - 1], b = ts[i], c = ts[i + 1];
    const double chord = ks[i - 1] + (ks[i + 1] - ks[i - 1]) * (b - a) / (c - a);
    CHECK(ks[i] >= chord * (1 - 1e-9));
  }
}

TEST_CASE("oracle limits in t") {
  const StepFunction f = sf({0.5, 2.0, 3.0}, {4.0, 2.0, 1.0});
  const LorentzSpace x0{Flavor::lambda, 2.0, Weight::power(1.0)};
  const LorentzSpace x1{Flavor::lambda, 2.0, Weight::power(0.0)};
  const double n0 = norm(x0, f).value, n1 = norm(x1, f).value;
  const auto big = k_oracle({f, 1e6, x0, x1}, default_oracle_grid(f, 32), false);
  CHECK(big.value == doctest::Approx(n0).epsilon(1e-9));
  CHECK(big.best.f1.is_zero());
  const double small_t = 1e-6;
  const auto small = k_oracle({f, small_t, x0, x1}, default_oracle_grid(f, 32), false);
  CHECK(small.value / small_t == doctest::Approx(n1).epsilon(1e-6));
}

TEST_CASE("K <= K^d on every query") {
  gen::Source s(83);
  const LorentzSpace a{Flavor::lambda, 2.0, Weight::power(1.0)};
  const LorentzSpace b{Flavor::lambda, 1.5, Weight::power(-0.5)};
  for (int k = 0; k < 30; ++k) {
    const StepFunction f = gen::step(s, 5);
    const double t = s.uniform(0.05, 5.0);
    const KQuery q{f, t, a, b};
    const Grid grid = default_oracle_grid(rearrange(f), 32);
    const auto gen_r = k_oracle(q, grid, false);
    const auto mono = k_oracle(q, grid, true);
    CHECK(gen_r.value <= mono.value);
    CHECK(mono.best.f0.is_non_increasing());
    CHECK(mono.best.f1.is_non_increasing());
    CHECK(exact_sum(mono.best, rearrange(f)));
    CHECK(mono.value <= mono.truncation_value * (1 + 1e-12));
  }
}

TEST_CASE("lattice descent matches exhaustive search") {
  gen::Source s(89);
  const LorentzSpace a{Flavor::lambda, 2.0, Weight::power(0.5)};
  const LorentzSpace b{Flavor::lambda, 1.0, Weight::power(0.0)};
  const LorentzSpace sa{Flavor::s, 2.0, Weight::power(0.0)};
  const LorentzSpace sb{Flavor::s, 2.0, Weight::power(-1.0)};
  for (int k = 0; k < 6; ++k) {
    const StepFunction f = gen::quantized(s, 4, 6);
    const double t = s.uniform(0.2, 3.0);
    OracleOptions lat;
    lat.lattice_step = 1.0;
    OracleOptions ex = lat;
    ex.exhaustive = true;
    for (bool mono : {true, false}) {
      const Grid grid = Grid({f.support_end()});
      const KQuery q{f, t, a, b};
      CHECK(k_oracle(q, grid, mono, lat).value == doctest::Approx(k_oracle(q, grid, mono, ex).value).epsilon(1e-6));
    }
    const KQuery qs{f, t, sa, sb};
    CHECK(k_oracle(qs, Grid({1.0}), true, lat).value == doctest::Approx(k_oracle(qs, Grid({1.0}), true, ex).value).epsilon(1e-6));
  }
  OracleOptions bad;
  bad.exhaustive = true;
  CHECK_THROWS_AS(k_oracle({StepFunction::indicator(0, 1), 1.0, a, b}, Grid({1.0}), true, bad), std::invalid_argument);
  bad.lattice_step = 1.0;
  CHECK_THROWS_AS(k_oracle({StepFunction::indicator(0, 1, 1.5), 1.0, a, b}, Grid({1.0}), true, bad),
                  std::invalid_argument);
}

TEST_CASE("S-couple oracle and near-optimal decomposition") {
  const auto cfg = corollary_couple(2.0, 1.0);
  const LorentzSpace s0{Flavor::s, 2.0, cfg.w0}, s1{Flavor::s, 2.0, cfg.w1};
  const auto zero = k_oracle_s_couple({StepFunction(), 1.0, s0, s1});
  CHECK(zero.direct == 0.0);
  CHECK(zero.mapped == 0.0);

  const StepFunction chi4 = StepFunction::indicator(0, 4);
  const auto r = k_oracle_s_couple({chi4, 1.0, s0, s1});
  CHECK(std::isfinite(r.direct));
  CHECK(std::isfinite(r.mapped));
  CHECK(r.direct > 0.0);
  CHECK(r.mapped > 0.0);
  CHECK(r.mapped <= r.mapped_monotone);
  // f1-only split.
  CHECK(r.direct <= norm(s1, chi4).value * (1 + 1e-12));
  const double ratio = r.direct / r.mapped;
  CHECK(ratio > 0.1);
  CHECK(ratio < 10.0);

  // The monotone K^d of the S couple equals K^d of the tilde Lambda couple for T f*.
  CHECK(r.direct == doctest::Approx(r.mapped_monotone).epsilon(1e-8));

  const auto near = near_optimal_s_decomposition(chi4, 1.0, cfg);
  CHECK(near.value >= r.direct * (1 - 1e-12));
  CHECK(add(near.decomposition.f0, near.decomposition.f1) == chi4);
  CHECK(near.decomposition.f0.is_non_increasing());
  CHECK(near.decomposition.f1.is_non_increasing());

  const auto nz = near_optimal_s_decomposition(StepFunction(), 1.0, cfg);
  CHECK(nz.value == 0.0);
  CHECK(nz.decomposition.f0.is_zero());

  gen::Source s(97);
  for (int k = 0; k < 10; ++k) {
    const StepFunction f = gen::step(s, 5);
    const double t = s.uniform(0.1, 10.0);
    const auto o = k_oracle_s_couple({f, t, s0, s1});
    const auto n = near_optimal_s_decomposition(f, t, cfg, o.direct_result.best);
    CHECK(n.value >= o.direct * (1 - 1e-9));
    CHECK(add(n.decomposition.f0, n.decomposition.f1) == rearrange(f));
  }
  CHECK_THROWS_AS(k_oracle_s_couple({chi4, 1.0, L1, L1}), std::invalid_argument);
}

TEST_CASE("k_objective") {
  const StepFunction f = sf({1.0, 2.0}, {2.0, 1.0});
  const KQuery q{f, 2.0, L1, L1};
  CHECK(k_objective(q, {f, StepFunction(), Provenance::manual}) == doctest::Approx(3.0));
  CHECK(k_objective(q, {StepFunction(), f, Provenance::manual}) == doctest::Approx(6.0));
  CHECK(to_string(Provenance::decomposition_lemma) == "decomposition-lemma");
}
