#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace semdelta {

struct TokenSequence {
  std::vector<std::string> tokens;
  // Number of Unicode code points in the source text.
  std::size_t source_char_count = 0;

  bool operator==(const TokenSequence&) const = default;
};

// Splits text into lowercase tokens.
//
// A token is a maximal run of Unicode letters and decimal digits. An
// apostrophe (U+0027, or U+2019 which is folded to U+0027) stays inside the
// token when it sits between two word characters, so "don't" and
// "rock'n'roll" are single tokens while "'quoted'" yields "quoted". Every
// other character, including hyphens, underscores and dashes, separates
// tokens. Ill-formed UTF-8 sequences act as separators.
TokenSequence tokenize(std::string_view text);

// Letter or decimal digit.
bool is_word_code_point(char32_t c);

}  // namespace semdelta
