#pragma once

#include <string>

#include "kempner/ball.hpp"
#include "kempner/engine.hpp"

namespace kempner {

/// Decimal string holding only certified digits, at most `max_digits`
/// significant ones. Digits are truncated, never rounded: the true value x
/// satisfies s <= x < s + ulp(s) for positive x, mirrored for negative x.
/// When integer digits are uncertain the string is scientific ("1.23e4").
/// An exact zero, or a ball straddling zero, renders as "0".
std::string certified_decimal(const Ball& x, int max_digits);

/// Significant digits in a string produced by certified_decimal.
int significant_digits(const std::string& decimal);

/// Radius in scientific notation, rounded up ("0" for an exact ball).
std::string radius_string(const Ball& x, int digits = 3);

/// {"b":..,"E":[..],"value":"..","radius":"..","terms":M,"method":".."}
std::string result_json(const KempnerResult& result, int max_digits);

inline const char* result_csv_header() { return "b,E,value,radius,terms,method"; }

/// One CSV row; E is written as digits joined by ';'.
std::string result_csv_row(const KempnerResult& result, int max_digits);

}  // namespace kempner
