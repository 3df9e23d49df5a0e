#include "semdelta/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <string_view>

namespace semdelta {

double quantize(double value, int digits) {
  if (!std::isfinite(value)) return value;
  if (value == 0.0) return 0.0;

  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  const std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
  // text looks like "-d.ddddde-XX"
  const auto exp_pos = text.find('e');
  const std::string_view mantissa = text.substr(0, exp_pos);
  const std::string_view exponent = text.substr(exp_pos);

  std::string truncated;
  int kept = 0;
  for (const char ch : mantissa) {
    const bool digit = ch >= '0' && ch <= '9';
    if (digit && kept == digits) break;
    truncated.push_back(ch);
    if (digit) ++kept;
  }
  truncated.append(exponent);

  double out = 0.0;
  std::from_chars(truncated.data(), truncated.data() + truncated.size(), out,
                  std::chars_format::scientific);
  return out == 0.0 ? 0.0 : out;
}

std::string format_number(double value, int digits) {
  const double q = quantize(value, digits);
  if (std::isnan(q)) return "nan";
  if (std::isinf(q)) return q > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, q);
  return std::string(buf, res.ptr);
}

}  // namespace semdelta
