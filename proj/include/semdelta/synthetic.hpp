#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semdelta/corpus.hpp"
#include "semdelta/lexicon.hpp"

namespace semdelta::synthetic {

// Desk-scale stand-in for the human and AI corpora.
//
// "AI-like" records draw most lexicon terms from one dominant category;
// "human-like" records spread their terms evenly over several categories.
// Both interleave the terms with filler words that match no category and
// are laid out as two-speaker dialogue. Output depends only on the options
// and the lexicon (std::mt19937_64 with explicit integer mapping, so it is
// the same on every platform).
struct Options {
  std::uint64_t seed = 20240917;
  std::size_t ai_records = 40;
  std::size_t human_records = 60;
  unsigned dominant_share_percent = 80;  // AI-like: chance a term is on-topic
  std::size_t human_categories = 5;      // human-like: categories mixed per record
};

struct Corpus {
  std::vector<DialogueRecord> ai;
  std::vector<DialogueRecord> human;
};

Corpus make_corpus(const Lexicon& lexicon, const Options& options = {});

}  // namespace semdelta::synthetic
