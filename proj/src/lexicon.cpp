#include "semdelta/lexicon.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "semdelta/error.hpp"
#include "semdelta/tokenizer.hpp"
#include "semdelta/utf8.hpp"

namespace semdelta {

std::string_view builtin_lexicon_tsv_data();  // generated from data/lexicon/fixture16.tsv

namespace {

bool contains_whitespace(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      return true;
    }
  }
  return false;
}

// Lowercases, trims whitespace and replaces each inner whitespace run by '_'.
std::string fold_whitespace(std::string_view raw) {
  const std::string lowered = utf8::to_lower(raw);
  const auto* s = reinterpret_cast<const std::uint8_t*>(lowered.data());
  const auto length = static_cast<std::int32_t>(lowered.size());
  std::string out;
  bool gap = false;
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      gap = !out.empty();
      continue;
    }
    if (gap) {
      out.push_back('_');
      gap = false;
    }
    out.append(lowered, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
  }
  return out;
}

void validate_category_name(std::string_view name) {
  if (name.empty()) {
    throw Error(ErrorCode::kMalformedLine, "empty category name");
  }
  if (contains_whitespace(name)) {
    throw Error(ErrorCode::kMalformedLine,
                "category name '" + std::string(name) + "' contains whitespace");
  }
}

Category build_category(std::string_view name, const std::vector<std::string_view>& raw_terms) {
  validate_category_name(name);
  Category category{std::string(name), {}};
  std::unordered_set<std::string> seen;
  for (const auto raw : raw_terms) {
    auto term = normalize_term(raw);
    if (!term) {
      throw Error(ErrorCode::kInvalidTerm,
                  "category '" + category.name + "': invalid term '" + std::string(raw) + "'");
    }
    if (seen.insert(*term).second) {
      category.terms.push_back(std::move(*term));
    }
  }
  if (category.terms.empty()) {
    throw Error(ErrorCode::kEmptyCategory, "category '" + category.name + "' has no terms");
  }
  return category;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; });
}

}  // namespace

std::optional<std::string> normalize_term(std::string_view raw) {
  const std::string folded = fold_whitespace(raw);
  if (folded.empty()) {
    return std::nullopt;
  }
  const auto parts = split(folded, '_');
  if (parts.size() > Lexicon::kMaxNgram) {
    return std::nullopt;
  }
  std::string normalized;
  for (const auto part : parts) {
    // Each part must survive tokenization untouched: exactly one token with
    // no character dropped.
    const auto tokens = tokenize(part);
    if (tokens.tokens.size() != 1 ||
        utf8::count_code_points(tokens.tokens.front()) != tokens.source_char_count) {
      return std::nullopt;
    }
    if (!normalized.empty()) {
      normalized.push_back('_');
    }
    normalized += tokens.tokens.front();
  }
  return normalized;
}

Lexicon::Lexicon(std::string name, std::vector<Category> categories) : name_(std::move(name)) {
  if (categories.empty()) {
    throw Error(ErrorCode::kEmptyLexicon, "lexicon '" + name_ + "' has no categories");
  }
  std::set<std::string, std::less<>> names;
  categories_.reserve(categories.size());
  for (auto& category : categories) {
    std::vector<std::string_view> raw(category.terms.begin(), category.terms.end());
    auto built = build_category(category.name, raw);
    if (!names.insert(built.name).second) {
      throw Error(ErrorCode::kDuplicateCategory, "duplicate category '" + built.name + "'");
    }
    term_count_ += built.terms.size();
    categories_.push_back(std::move(built));
  }
}

std::optional<std::size_t> Lexicon::index_of(std::string_view category) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].name == category) {
      return i;
    }
  }
  return std::nullopt;
}

Lexicon load_lexicon(std::string_view bytes, LexiconFormat format, std::string name) {
  switch (format) {
    case LexiconFormat::kTsv:
      break;
  }
  utf8::require_valid(bytes, "lexicon");

  std::vector<Category> categories;
  std::set<std::string, std::less<>> names;
  std::size_t line_no = 0;
  for (auto line : split(bytes, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (is_blank(line) || line.front() == '#') {
      continue;
    }
    if (line.find('\t') == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedLine, "expected TAB-separated category and terms", line_no);
    }
    auto fields = split(line, '\t');
    const auto category_name = fields.front();
    fields.erase(fields.begin());
    const bool all_empty =
        std::all_of(fields.begin(), fields.end(), [](std::string_view f) { return f.empty(); });
    try {
      if (all_empty) {
        validate_category_name(category_name);
        throw Error(ErrorCode::kEmptyCategory,
                    "category '" + std::string(category_name) + "' has no terms");
      }
      auto category = build_category(category_name, fields);
      if (!names.insert(category.name).second) {
        throw Error(ErrorCode::kDuplicateCategory, "duplicate category '" + category.name + "'");
      }
      categories.push_back(std::move(category));
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), line_no);
    }
  }
  return Lexicon(std::move(name), std::move(categories));
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open lexicon '" + path.string() + "'");
  }
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return load_lexicon(bytes, LexiconFormat::kTsv, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail(), e.line());
  }
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  std::ostringstream out;
  out << "# " << lexicon.name() << '\n';
  for (const auto& category : lexicon.categories()) {
    out << category.name;
    for (const auto& term : category.terms) {
      out << '\t' << term;
    }
    out << '\n';
  }
  return out.str();
}

std::string_view builtin_test_lexicon_tsv() { return builtin_lexicon_tsv_data(); }

const Lexicon& builtin_test_lexicon() {
  static const Lexicon lexicon =
      load_lexicon(builtin_lexicon_tsv_data(), LexiconFormat::kTsv, "fixture16");
  return lexicon;
}

}  // namespace semdelta
