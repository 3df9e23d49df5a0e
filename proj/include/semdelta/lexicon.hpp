#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semdelta {

struct Category {
  std::string name;
  // Normalized, unique within the category, in first-seen order.
  std::vector<std::string> terms;

  bool operator==(const Category&) const = default;
};

// An immutable, validated set of named categories.
//
// Invariants enforced at construction:
//   * at least one category, each with at least one term;
//   * category names are unique, non-empty and free of whitespace;
//   * every term is lowercase and matches word(_word){0,2}, where a word is
//     exactly one token as produced by tokenize().
// A term may appear in several categories.
class Lexicon {
 public:
  static constexpr std::size_t kMaxNgram = 3;

  // Normalizes terms (lowercase, trimmed, inner whitespace runs joined by
  // '_', duplicates dropped) and validates. Throws Error.
  Lexicon(std::string name, std::vector<Category> categories);

  const std::string& name() const noexcept { return name_; }
  std::span<const Category> categories() const noexcept { return categories_; }
  std::size_t size() const noexcept { return categories_.size(); }
  std::size_t term_count() const noexcept { return term_count_; }

  std::optional<std::size_t> index_of(std::string_view category) const;

  bool operator==(const Lexicon&) const = default;

 private:
  std::string name_;
  std::vector<Category> categories_;
  std::size_t term_count_ = 0;
};

enum class LexiconFormat { kTsv };

// Parses the TSV lexicon format: one category per line, TAB-separated, the
// first field is the category name and the rest are terms. Lines starting
// with '#' and blank lines are skipped. A trailing CR is tolerated.
// Errors carry the 1-based line number.
Lexicon load_lexicon(std::string_view bytes, LexiconFormat format = LexiconFormat::kTsv,
                     std::string name = "lexicon");

// Reads a file and names the lexicon after the file stem.
Lexicon load_lexicon_file(const std::filesystem::path& path);

std::string serialize_lexicon(const Lexicon& lexicon);

// The bundled 16-category fixture (data/lexicon/fixture16.tsv).
const Lexicon& builtin_test_lexicon();
std::string_view builtin_test_lexicon_tsv();

// Returns the normalized form of `raw`, or nullopt when it cannot be a term.
std::optional<std::string> normalize_term(std::string_view raw);

}  // namespace semdelta
