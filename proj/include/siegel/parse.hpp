#pragma once

// Text syntax for exact reals.
//
//   rationals      "3", "-7/5"
//   decimals       "0.125", "1e-3"  (taken as the exact rational they spell)
//   surds          "(p+q*sqrt(d))/r", with sqrt(d) for integer d >= 0
//   names          golden = phi-1, sqrt2m1 = sqrt(2)-1, sqrt3m1 = sqrt(3)-1
//
// Terms combine with + - * / and parentheses, e.g. "(0+1*sqrt(2))/1-1".
// "pi" and "e" are accepted only as 40-digit decimal approximations and
// produce a warning.

#include <string>
#include <string_view>
#include <vector>

#include "siegel/surd.hpp"

namespace siegel {

struct ParsedReal {
  SurdNumber value;
  std::vector<std::string> warnings;
};

ParsedReal parse_real(std::string_view text);

// Comma-separated list; commas inside parentheses do not split.
std::vector<ParsedReal> parse_real_list(std::string_view text);

// "1,2,1" -> {1, 2, 1}
std::vector<int> parse_int_list(std::string_view text);

}  // namespace siegel
