#pragma once

// JSON encodings shared by the CLI and the verification reports.
// Non-finite doubles are written as the strings "inf", "-inf" and "nan".

#include <string>

#include <json.hpp>

#include "lorentzk/kfunctional.hpp"
#include "lorentzk/lorentz_norms.hpp"
#include "lorentzk/stepfn.hpp"
#include "lorentzk/weights.hpp"

namespace lorentzk {

using Json = nlohmann::json;

Json number(double x);
double to_double(const Json& j);

Json to_json(const StepFunction& f);
StepFunction step_from_json(const Json& j);
StepFunction load_step_function(const std::string& path);

Json to_json(const Weight& w);
Weight weight_from_json(const Json& j);

Json to_json(const CoupleConfig& c);
CoupleConfig couple_from_json(const Json& j);

Json to_json(const Grid& g);

[[nodiscard]] std::string to_string(Method m);
Json to_json(const ConditionVerdict& v);
Json to_json(const SufCondReport& r);
Json to_json(const SHypotheses& h);
Json to_json(const NormValue& n);
Json to_json(const Decomposition& d);
Json to_json(const OracleResult& r);

/// Throws std::invalid_argument naming the first key of j not in `allowed`.
void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace lorentzk
