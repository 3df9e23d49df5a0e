#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace semdelta::utf8 {

// Returns the 1-based line holding the first ill-formed sequence, or 0 when
// the whole buffer is well-formed UTF-8.
std::size_t first_invalid_line(std::string_view bytes);

inline bool is_valid(std::string_view bytes) { return first_invalid_line(bytes) == 0; }

// Throws Error{kNotUtf8} naming `what` and the offending line.
void require_valid(std::string_view bytes, std::string_view what);

std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

std::size_t count_code_points(std::string_view text);

// True when the text is empty or holds only Unicode white space.
bool is_blank(std::string_view text);

}  // namespace semdelta::utf8
