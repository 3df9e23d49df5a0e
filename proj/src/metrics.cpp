#include "semdelta/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "semdelta/error.hpp"

namespace semdelta {

namespace {

void require_matches(const CategoryProfile& profile) {
  const bool any_nonzero = std::any_of(profile.intensities.begin(), profile.intensities.end(),
                                       [](double v) { return v > 0.0; });
  if (profile.matched_occurrences == 0 || !any_nonzero) {
    throw Error(ErrorCode::kNoMatches, "no token matched any lexicon category");
  }
}

}  // namespace

DeltaResult semantic_delta(const CategoryProfile& profile) {
  require_matches(profile);

  // true when category a outranks category b
  auto outranks = [&](std::size_t a, std::size_t b) {
    const double va = profile.intensities[a];
    const double vb = profile.intensities[b];
    if (va != vb) {
      return va > vb;
    }
    return profile.categories[a] < profile.categories[b];
  };

  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
  for (std::size_t c = 0; c < profile.intensities.size(); ++c) {
    if (profile.intensities[c] <= 0.0) {
      continue;
    }
    if (!first || outranks(c, *first)) {
      second = first;
      first = c;
    } else if (!second || outranks(c, *second)) {
      second = c;
    }
  }

  DeltaResult result;
  result.top1_category = profile.categories[*first];
  result.top1_intensity = profile.intensities[*first];
  if (second) {
    result.top2_category = profile.categories[*second];
    result.top2_intensity = profile.intensities[*second];
  }
  result.delta = result.top1_intensity - result.top2_intensity;
  return result;
}

EntropyResult shannon_entropy(const CategoryProfile& profile) {
  require_matches(profile);

  EntropyResult result;
  double total = 0.0;
  for (const double v : profile.intensities) {
    if (v > 0.0) {
      total += v;
      ++result.support_size;
    }
  }
  double sum = 0.0;
  for (const double v : profile.intensities) {
    if (v > 0.0) {
      const double p = v / total;
      sum += p * std::log2(p);
    }
  }
  // Rounding can push a uniform distribution a few ulps past log2(n) and a
  // degenerate one to -0.0.
  const double ceiling = std::log2(static_cast<double>(result.support_size));
  result.bits = std::clamp(-sum, 0.0, ceiling);
  if (result.bits == 0.0) {
    result.bits = 0.0;
  }
  return result;
}

}  // namespace semdelta
