#include "lorentzk/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace lorentzk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(to_double(x));
  return out;
}

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

Json to_json(const StepFunction& f) {
  return Json{{"breakpoints", f.breakpoints()}, {"values", f.values()}};
}

StepFunction step_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("step function must be an object");
  reject_unknown(j, {"breakpoints", "values"}, "step function");
  if (!j.contains("breakpoints") || !j.contains("values"))
    throw std::invalid_argument("step function needs \"breakpoints\" and \"values\"");
  return StepFunction(doubles(j.at("breakpoints"), "breakpoints"), doubles(j.at("values"), "values"));
}

StepFunction load_step_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return step_from_json(j);
}

Json to_json(const Weight& w) {
  return std::visit(overloaded{
                        [](const Power& p) { return Json{{"family", "power"}, {"beta", p.beta}}; },
                        [](const PowerLog& p) {
                          return Json{{"family", "powerlog"}, {"beta", p.beta}, {"gamma", p.gamma}};
                        },
                        [](const Tabulated& t) { return Json{{"family", "tabulated"}, {"steps", to_json(t.steps)}}; },
                        [](const ReciprocalTabulated& t) {
                          return Json{{"family", "reciprocal"}, {"steps", to_json(t.steps)}, {"p", t.p}};
                        },
                    },
                    w.family());
}

Weight weight_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family")) throw std::invalid_argument("weight needs a \"family\"");
  const auto family = j.at("family").get<std::string>();
  if (family == "power") {
    reject_unknown(j, {"family", "beta"}, "power weight");
    return Weight::power(to_double(j.at("beta")));
  }
  if (family == "powerlog") {
    reject_unknown(j, {"family", "beta", "gamma"}, "powerlog weight");
    return Weight::power_log(to_double(j.at("beta")), to_double(j.at("gamma")));
  }
  if (family == "tabulated") {
    reject_unknown(j, {"family", "steps"}, "tabulated weight");
    return Weight::tabulated(step_from_json(j.at("steps")));
  }
  if (family == "reciprocal") {
    reject_unknown(j, {"family", "steps", "p"}, "reciprocal weight");
    return Weight(ReciprocalTabulated{step_from_json(j.at("steps")), to_double(j.at("p"))});
  }
  throw std::invalid_argument("unknown weight family \"" + family + "\"");
}

Json to_json(const CoupleConfig& c) {
  return Json{{"p0", c.p0}, {"w0", to_json(c.w0)}, {"p1", c.p1}, {"w1", to_json(c.w1)}};
}

CoupleConfig couple_from_json(const Json& j) {
  reject_unknown(j, {"p0", "w0", "p1", "w1"}, "couple");
  CoupleConfig c;
  c.p0 = to_double(j.at("p0"));
  c.w0 = weight_from_json(j.at("w0"));
  c.p1 = to_double(j.at("p1"));
  c.w1 = weight_from_json(j.at("w1"));
  return c;
}

Json to_json(const Grid& g) {
  Json a = Json::array();
  for (double x : g.points()) a.push_back(x);
  return a;
}

std::string to_string(Method m) { return m == Method::closed_form ? "closed-form" : "grid"; }

Json to_json(const ConditionVerdict& v) {
  return Json{{"holds", v.holds},
              {"witness_constant", number(v.witness_constant)},
              {"witness_t", number(v.witness_t)},
              {"method", to_string(v.method)},
              {"reason", v.reason}};
}

Json to_json(const SufCondReport& r) {
  return Json{{"first", to_json(r.first)},
              {"second", to_json(r.second)},
              {"ratio_monotone", to_json(r.ratio_monotone)},
              {"eps", r.eps}};
}

Json to_json(const SHypotheses& h) {
  return Json{{"cond1", to_json(h.cond1)},      {"rb0", to_json(h.rb0)},
              {"cond3", to_json(h.cond3)},      {"eps", h.eps},
              {"psi0_infinite", h.psi0_infinite}, {"psi1_infinite", h.psi1_infinite},
              {"all_hold", h.all_hold()}};
}

Json to_json(const NormValue& n) {
  return Json{{"value", number(n.value)},
              {"divergent", n.divergent},
              {"exact", n.exact},
              {"error_estimate", number(n.error_estimate)}};
}

Json to_json(const Decomposition& d) {
  return Json{{"f0", to_json(d.f0)}, {"f1", to_json(d.f1)}, {"provenance", to_string(d.provenance)}};
}

Json to_json(const OracleResult& r) {
  return Json{{"value", number(r.value)},
              {"approximate", r.approximate},
              {"best_start", r.best_start},
              {"sweeps", r.sweeps},
              {"seed", r.seed},
              {"truncation_value", number(r.truncation_value)},
              {"best", to_json(r.best)}};
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument("unknown field \"" + key + "\" in " + where);
  }
}

}  // namespace lorentzk
