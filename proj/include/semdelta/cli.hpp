#pragma once

#include <iosfwd>

namespace semdelta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point behind the `semdelta` executable. Data goes to `out` unless
// --output names a file; diagnostics always go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semdelta::cli
