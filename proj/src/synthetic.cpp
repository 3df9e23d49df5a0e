#include "semdelta/synthetic.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <string_view>

#include "semdelta/error.hpp"

namespace semdelta::synthetic {

namespace {

constexpr std::array<std::string_view, 30> kFillers = {
    "i",     "think", "that", "the",   "is",   "really", "about", "we",   "should", "talk",
    "and",   "maybe", "today", "was",  "just", "so",     "well",  "you",  "know",   "it",
    "what",  "with",  "my",   "our",   "then", "there",  "very",  "some", "time",   "again"};

class Writer {
 public:
  Writer(const Lexicon& lexicon, std::uint64_t seed) : lexicon_(lexicon), rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::string term_from(std::size_t category) {
    const auto& terms = lexicon_.categories()[category].terms;
    std::string term = terms[below(terms.size())];
    std::replace(term.begin(), term.end(), '_', ' ');
    return term;
  }

  // Two-speaker dialogue, three terms per line, fillers in between.
  std::string dialogue(const std::vector<std::size_t>& categories) {
    std::string text;
    for (std::size_t i = 0; i < categories.size(); ++i) {
      if (i % 3 == 0) {
        if (i > 0) text += ".\n";
        text += (i / 3) % 2 == 0 ? "A: " : "B: ";
      } else {
        text += ' ';
      }
      const std::size_t fillers = 1 + below(3);
      for (std::size_t f = 0; f < fillers; ++f) {
        text += kFillers[below(kFillers.size())];
        text += ' ';
      }
      text += term_from(categories[i]);
    }
    text += '.';
    return text;
  }

 private:
  const Lexicon& lexicon_;
  std::mt19937_64 rng_;
};

}  // namespace

Corpus make_corpus(const Lexicon& lexicon, const Options& options) {
  const std::size_t k = lexicon.size();
  if (k < 2 || options.human_categories < 2 || options.human_categories > k) {
    throw Error(ErrorCode::kInvalidConfig, "synthetic corpus needs at least two categories");
  }
  Writer writer(lexicon, options.seed);
  Corpus corpus;

  for (std::size_t r = 0; r < options.ai_records; ++r) {
    const std::size_t dominant = (r * 7) % k;
    const std::size_t slots = 8 + writer.below(7);
    std::vector<std::size_t> categories;
    for (std::size_t s = 0; s < slots; ++s) {
      if (writer.below(100) < options.dominant_share_percent) {
        categories.push_back(dominant);
      } else {
        categories.push_back((dominant + 1 + writer.below(k - 1)) % k);
      }
    }
    DialogueRecord record;
    record.id = make_record_id("synthetic-ai", r);
    record.label = Label::kAi;
    record.source = "synthetic-ai";
    record.text = writer.dialogue(categories);
    record.meta["dominant"] = lexicon.categories()[dominant].name;
    corpus.ai.push_back(std::move(record));
  }

  for (std::size_t r = 0; r < options.human_records; ++r) {
    std::vector<std::size_t> pool(k);
    for (std::size_t c = 0; c < k; ++c) pool[c] = c;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < options.human_categories; ++i) {
      std::swap(pool[i], pool[i + writer.below(k - i)]);
    }
    pool.resize(options.human_categories);
    const std::size_t slots = 8 + writer.below(7);
    std::vector<std::size_t> categories;
    for (std::size_t s = 0; s < slots; ++s) {
      categories.push_back(pool[s < pool.size() ? s : writer.below(pool.size())]);
    }
    DialogueRecord record;
    record.id = make_record_id("synthetic-human", r);
    record.label = Label::kHuman;
    record.source = "synthetic-human";
    record.text = writer.dialogue(categories);
    corpus.human.push_back(std::move(record));
  }
  return corpus;
}

}  // namespace semdelta::synthetic
