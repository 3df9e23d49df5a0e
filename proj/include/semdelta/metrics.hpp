#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "semdelta/analyzer.hpp"

namespace semdelta {

// Gap between the two most intense categories of one text.
struct DeltaResult {
  std::string top1_category;
  double top1_intensity = 0.0;
  std::optional<std::string> top2_category;  // none when only one category is nonzero
  double top2_intensity = 0.0;
  double delta = 0.0;  // top1_intensity - top2_intensity
};

// Base-2 Shannon entropy of the renormalized nonzero intensities.
struct EntropyResult {
  double bits = 0.0;
  std::size_t support_size = 0;
};

// Ranks by intensity, ties going to the lexicographically smaller name.
// Throws Error{kNoMatches} when the profile has no matched occurrence.
DeltaResult semantic_delta(const CategoryProfile& profile);

// Throws Error{kNoMatches} when the profile has no matched occurrence.
EntropyResult shannon_entropy(const CategoryProfile& profile);

}  // namespace semdelta
