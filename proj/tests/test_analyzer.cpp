#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "semdelta/analyzer.hpp"
#include "semdelta/lexicon.hpp"

using namespace semdelta;
using Catch::Matchers::WithinAbs;

namespace {

const Lexicon& mini() {
  static const Lexicon lex = load_lexicon("animals\tcat\tdog\nmotion\trun\twalk\npets\tdog", LexiconFormat::kTsv, "mini3");
  return lex;
}

TokenSequence seq(std::vector<std::string> tokens) { return TokenSequence{std::move(tokens), 0}; }

}  // namespace

TEST_CASE("hand-traced profile with overlapping categories", "[analyzer]") {
  const auto p = analyze(seq({"cat", "dog", "run", "run"}), mini());
  CHECK(p.raw_count("animals") == 2);
  CHECK(p.raw_count("motion") == 2);
  CHECK(p.raw_count("pets") == 1);
  CHECK(p.matched_occurrences == 4);
  CHECK(p.total_tokens == 4);
  CHECK(p.intensity("animals") == 0.5);
  CHECK(p.intensity("motion") == 0.5);
  CHECK(p.intensity("pets") == 0.25);
}

TEST_CASE("empty and unmatched inputs give all-zero profiles", "[analyzer]") {
  for (const auto& tokens : {std::vector<std::string>{}, std::vector<std::string>{"xyzzy", "qwerty"}}) {
    const auto p = analyze(seq(tokens), mini());
    CHECK(p.matched_occurrences == 0);
    CHECK(p.categories == std::vector<std::string>{"animals", "motion", "pets"});
    CHECK(std::all_of(p.intensities.begin(), p.intensities.end(), [](double v) { return v == 0.0; }));
    CHECK(std::all_of(p.raw_counts.begin(), p.raw_counts.end(), [](std::size_t v) { return v == 0; }));
  }
}

TEST_CASE("by-total-tokens normalization divides by all tokens", "[analyzer]") {
  const auto p = analyze(seq({"cat", "the", "run", "xyzzy"}), mini(), Normalization::kByTotalTokens);
  CHECK(p.intensity("animals") == 0.25);
  CHECK(p.intensity("motion") == 0.25);
  CHECK(p.intensity("pets") == 0.0);
  CHECK(parse_normalization("by-total-tokens") == Normalization::kByTotalTokens);
  CHECK(to_string(Normalization::kByMatched) == "by-matched");
}

TEST_CASE("n-gram terms mark the window's first position", "[analyzer]") {
  const auto lex = load_lexicon("food\tice_cream\tice\ndessert\tice_cream_cone\nweather\tcream");
  const auto p = analyze(seq({"ice", "cream", "cone", "ice"}), lex);
  // position 0: food (ice, ice_cream), dessert (ice_cream_cone); position 1: weather;
  // position 3: food
  CHECK(p.raw_count("food") == 2);
  CHECK(p.raw_count("dessert") == 1);
  CHECK(p.raw_count("weather") == 1);
  CHECK(p.matched_occurrences == 3);
  CHECK_THAT(p.intensity("food"), WithinAbs(2.0 / 3.0, 1e-15));
}

TEST_CASE("overlapping n-gram windows both count", "[analyzer]") {
  const auto lex = load_lexicon("x\ta_a");
  const auto p = analyze(seq({"a", "a", "a"}), lex);
  CHECK(p.raw_count("x") == 2);
  CHECK(p.matched_occurrences == 2);
}

TEST_CASE("analyzer matches the naive oracle", "[analyzer][property]") {
  std::mt19937_64 rng(0xa7a1);
  for (int i = 0; i < 1000; ++i) {
    const auto lex = testing::random_lexicon(rng, 5, false);
    const auto tokens = testing::random_tokens(rng, 20);
    for (const auto mode : {Normalization::kByMatched, Normalization::kByTotalTokens}) {
      const auto got = analyze(seq(tokens), lex, mode);
      const auto want = testing::naive_analyze(tokens, lex, mode);
      REQUIRE(got.raw_counts == want.raw_counts);
      REQUIRE(got.matched_occurrences == want.matched_occurrences);
      for (std::size_t c = 0; c < got.intensities.size(); ++c) {
        REQUIRE_THAT(got.intensities[c], WithinAbs(want.intensities[c], 1e-12));
      }
    }
  }
}

TEST_CASE("profile invariants on random inputs", "[analyzer][property]") {
  std::mt19937_64 rng(0xbeef);
  for (int i = 0; i < 1000; ++i) {
    const auto lex = testing::random_lexicon(rng, 5, false);
    const auto tokens = testing::random_tokens(rng, 20);
    const auto p = analyze(seq(tokens), lex);
    REQUIRE(p.matched_occurrences <= p.total_tokens);
    double sum = 0.0;
    for (std::size_t c = 0; c < p.intensities.size(); ++c) {
      REQUIRE(p.intensities[c] >= 0.0);
      REQUIRE(p.intensities[c] <= 1.0);
      if (p.matched_occurrences > 0) {
        REQUIRE(p.intensities[c] == double(p.raw_counts[c]) / double(p.matched_occurrences));
      }
      sum += p.intensities[c];
    }
    if (p.matched_occurrences > 0) REQUIRE(sum >= 1.0 - 1e-12);
  }
}

TEST_CASE("permutation and self-concatenation leave intensities unchanged", "[analyzer][property]") {
  std::mt19937_64 rng(0x5ca1e);
  for (int i = 0; i < 1000; ++i) {
    const auto lex = testing::random_lexicon(rng, 5, true);
    auto tokens = testing::random_tokens(rng, 20);
    const auto base = analyze(seq(tokens), lex);

    auto shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(analyze(seq(shuffled), lex) == base);

    auto doubled = tokens;
    doubled.insert(doubled.end(), tokens.begin(), tokens.end());
    const auto twice = analyze(seq(doubled), lex);
    REQUIRE(twice.matched_occurrences == 2 * base.matched_occurrences);
    for (std::size_t c = 0; c < base.raw_counts.size(); ++c) {
      REQUIRE(twice.raw_counts[c] == 2 * base.raw_counts[c]);
      REQUIRE(twice.intensities[c] == base.intensities[c]);
    }
  }
}
