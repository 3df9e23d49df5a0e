#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semdelta/lexicon.hpp"
#include "semdelta/tokenizer.hpp"

namespace semdelta {

enum class Normalization {
  kByMatched,      // count / positions matching at least one category
  kByTotalTokens,  // count / all tokens (Empath's normalize=True behaviour)
};

std::string_view to_string(Normalization mode);
Normalization parse_normalization(std::string_view text);

// Per-text category scores, indexed in lexicon category order.
struct CategoryProfile {
  std::vector<std::string> categories;
  std::vector<std::size_t> raw_counts;
  std::vector<double> intensities;
  std::size_t matched_occurrences = 0;
  std::size_t total_tokens = 0;

  // Zero for names not in the profile.
  double intensity(std::string_view category) const;
  std::size_t raw_count(std::string_view category) const;

  bool operator==(const CategoryProfile&) const = default;
};

// Precompiled term index over a lexicon. The analyzer borrows nothing from
// the lexicon after construction and is safe to share between threads.
//
// Matching rule: position i matches category c when some term of c equals
// the window tokens[i..i+n-1] joined by '_' (n = 1..3). Each (position,
// category) pair counts once toward raw_counts[c]; a position matching any
// category counts once toward matched_occurrences.
class Analyzer {
 public:
  explicit Analyzer(const Lexicon& lexicon);

  CategoryProfile analyze(const TokenSequence& tokens,
                          Normalization mode = Normalization::kByMatched) const;

  std::size_t category_count() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> index_;
  std::size_t max_ngram_ = 1;
};

CategoryProfile analyze(const TokenSequence& tokens, const Lexicon& lexicon,
                        Normalization mode = Normalization::kByMatched);

}  // namespace semdelta
