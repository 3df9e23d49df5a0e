#include "semdelta/analyzer.hpp"

#include <algorithm>

#include "semdelta/error.hpp"

namespace semdelta {

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::kByMatched: return "by-matched";
    case Normalization::kByTotalTokens: return "by-total-tokens";
  }
  return "by-matched";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "by-matched") return Normalization::kByMatched;
  if (text == "by-total-tokens") return Normalization::kByTotalTokens;
  throw Error(ErrorCode::kInvalidConfig, "unknown normalization '" + std::string(text) + "'");
}

double CategoryProfile::intensity(std::string_view category) const {
  const auto it = std::find(categories.begin(), categories.end(), category);
  return it == categories.end() ? 0.0 : intensities[static_cast<std::size_t>(it - categories.begin())];
}

std::size_t CategoryProfile::raw_count(std::string_view category) const {
  const auto it = std::find(categories.begin(), categories.end(), category);
  return it == categories.end() ? 0 : raw_counts[static_cast<std::size_t>(it - categories.begin())];
}

Analyzer::Analyzer(const Lexicon& lexicon) {
  const auto categories = lexicon.categories();
  names_.reserve(categories.size());
  for (std::uint32_t c = 0; c < categories.size(); ++c) {
    names_.push_back(categories[c].name);
    for (const auto& term : categories[c].terms) {
      index_[term].push_back(c);
      const auto words = static_cast<std::size_t>(std::count(term.begin(), term.end(), '_')) + 1;
      max_ngram_ = std::max(max_ngram_, words);
    }
  }
}

CategoryProfile Analyzer::analyze(const TokenSequence& tokens, Normalization mode) const {
  const auto& words = tokens.tokens;
  const std::size_t k = names_.size();

  CategoryProfile profile;
  profile.categories = names_;
  profile.raw_counts.assign(k, 0);
  profile.intensities.assign(k, 0.0);
  profile.total_tokens = words.size();

  // last_hit[c] == i + 1 when category c already matched at position i.
  std::vector<std::size_t> last_hit(k, 0);
  std::string window;
  for (std::size_t i = 0; i < words.size(); ++i) {
    bool matched = false;
    window.clear();
    const std::size_t longest = std::min(max_ngram_, words.size() - i);
    for (std::size_t n = 0; n < longest; ++n) {
      if (n > 0) {
        window.push_back('_');
      }
      window += words[i + n];
      const auto it = index_.find(window);
      if (it == index_.end()) {
        continue;
      }
      for (const auto c : it->second) {
        if (last_hit[c] != i + 1) {
          last_hit[c] = i + 1;
          ++profile.raw_counts[c];
          matched = true;
        }
      }
    }
    if (matched) {
      ++profile.matched_occurrences;
    }
  }

  const std::size_t denominator =
      mode == Normalization::kByMatched ? profile.matched_occurrences : profile.total_tokens;
  if (denominator > 0) {
    for (std::size_t c = 0; c < k; ++c) {
      profile.intensities[c] =
          static_cast<double>(profile.raw_counts[c]) / static_cast<double>(denominator);
    }
  }
  return profile;
}

CategoryProfile analyze(const TokenSequence& tokens, const Lexicon& lexicon, Normalization mode) {
  return Analyzer(lexicon).analyze(tokens, mode);
}

}  // namespace semdelta
