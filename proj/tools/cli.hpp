#pragma once

#include <iosfwd>
#include <string>

#include "lorentzk/weights.hpp"

namespace lorentzk::cli {

enum Exit : int { ok = 0, error = 1, hypothesis_violation = 2 };

/// power:<beta> | powerlog:<beta>:<gamma> | file:<path> (weight object or step function JSON).
Weight parse_weight(const std::string& spec);

/// Shortest round-trip decimal that always shows a fraction or exponent ("2.0", "0.1", "1e-20").
std::string format_number(double x);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorentzk::cli
