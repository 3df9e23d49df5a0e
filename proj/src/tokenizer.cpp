#include "semdelta/tokenizer.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace semdelta {

namespace {

constexpr UChar32 kApostrophe = 0x27;
constexpr UChar32 kRightSingleQuote = 0x2019;

void append_code_point(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

bool is_word_code_point(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  return u_isalpha(cp) || u_isdigit(cp);
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence result;
  std::string current;
  bool pending_apostrophe = false;

  auto flush = [&] {
    if (!current.empty()) {
      result.tokens.push_back(std::move(current));
      current.clear();
    }
    pending_apostrophe = false;
  };

  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    ++result.source_char_count;
    if (c >= 0 && is_word_code_point(static_cast<char32_t>(c))) {
      if (pending_apostrophe) {
        current.push_back('\'');
        pending_apostrophe = false;
      }
      append_code_point(current, u_tolower(c));
    } else if ((c == kApostrophe || c == kRightSingleQuote) && !current.empty() &&
               !pending_apostrophe) {
      pending_apostrophe = true;
    } else {
      flush();
    }
  }
  flush();
  return result;
}

}  // namespace semdelta
