#pragma once

#include <string>

namespace semdelta {

inline constexpr int kReportSignificantDigits = 10;

// Takes the shortest round-trip decimal form of `value` and truncates it
// toward zero to `digits` significant digits. The result prints (shortest
// form) as exactly that digit string on every conforming platform.
// -0.0 becomes 0.0; non-finite values pass through.
double quantize(double value, int digits = kReportSignificantDigits);

// Shortest round-trip text of quantize(value), e.g. "0.3333333333", "1e-05".
std::string format_number(double value, int digits = kReportSignificantDigits);

}  // namespace semdelta
