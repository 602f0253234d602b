#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gen.hpp"
#include "lorentzk/serialize.hpp"

using namespace lorentzk;

TEST_CASE("step functions round-trip through JSON") {
  gen::Source s(101);
  for (int k = 0; k < 100; ++k) {
    const StepFunction f = gen::step(s);
    const Json j = Json::parse(to_json(f).dump());
    CHECK(step_from_json(j) == f);
  }
  CHECK(step_from_json(Json::parse(R"({"breakpoints": [4.0], "values": [1.0]})")) == StepFunction::indicator(0, 4));
  CHECK_THROWS_AS(step_from_json(Json::parse(R"({"breakpoints": [1], "values": [1], "x": 0})")), std::invalid_argument);
  CHECK_THROWS_AS(step_from_json(Json::parse(R"({"breakpoints": [1]})")), std::invalid_argument);
  CHECK_THROWS_AS(step_from_json(Json::parse(R"([1, 2])")), std::invalid_argument);
}

TEST_CASE("weights and couples round-trip") {
  const std::vector<Weight> ws{Weight::power(-0.5), Weight::power_log(0.3, -1.0),
                               Weight::tabulated(StepFunction({1.0, 2.0}, {2.0, 1.0})),
                               tilde(Weight::tabulated(StepFunction::indicator(0, 1)), 2.0)};
  for (const Weight& w : ws) CHECK(weight_from_json(Json::parse(to_json(w).dump())) == w);

  const auto c = corollary_couple(3.0, 0.5);
  const auto back = couple_from_json(Json::parse(to_json(c).dump()));
  CHECK(back.p0 == c.p0);
  CHECK(back.p1 == c.p1);
  CHECK(back.w0 == c.w0);
  CHECK(back.w1 == c.w1);

  CHECK_THROWS_AS(weight_from_json(Json::parse(R"({"family": "exp"})")), std::invalid_argument);
  CHECK_THROWS_AS(weight_from_json(Json::parse(R"({"family": "power", "beta": 1, "gamma": 2})")),
                  std::invalid_argument);
}

TEST_CASE("non-finite numbers are strings") {
  CHECK(number(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(NAN) == "nan");
  CHECK(number(1.5) == 1.5);
  CHECK(std::isinf(to_double(Json("inf"))));
  CHECK(std::isnan(to_double(Json("nan"))));
  CHECK_THROWS_AS(to_double(Json("x")), std::invalid_argument);

  ConditionVerdict v;
  v.witness_constant = INFINITY;
  const Json j = to_json(v);
  CHECK(j.at("witness_constant") == "inf");
  CHECK(j.at("method") == "grid");
}
