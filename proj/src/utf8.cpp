#include "semdelta/utf8.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "semdelta/error.hpp"

namespace semdelta::utf8 {

namespace {

template <typename Map>
std::string map_code_points(std::string_view text, Map map) {
  std::string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      c = 0xFFFD;
    } else {
      c = map(c);
    }
    char buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace

std::size_t first_invalid_line(std::string_view bytes) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const auto length = static_cast<std::int32_t>(bytes.size());
  std::size_t line = 1;
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      return line;
    }
    if (c == '\n') {
      ++line;
    }
  }
  return 0;
}

void require_valid(std::string_view bytes, std::string_view what) {
  if (const auto line = first_invalid_line(bytes); line != 0) {
    throw Error(ErrorCode::kNotUtf8, std::string(what) + " is not valid UTF-8", line);
  }
}

std::string to_lower(std::string_view text) {
  return map_code_points(text, [](UChar32 c) { return u_tolower(c); });
}

std::string to_upper(std::string_view text) {
  return map_code_points(text, [](UChar32 c) { return u_toupper(c); });
}

std::size_t count_code_points(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::size_t count = 0;
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    ++count;
  }
  return count;
}

bool is_blank(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0 || !u_isUWhiteSpace(c)) {
      return false;
    }
  }
  return true;
}

}  // namespace semdelta::utf8
