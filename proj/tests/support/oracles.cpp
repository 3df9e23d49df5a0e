#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace semdelta::testing {

namespace {

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {"cat", "dog",  "run",  "walk", "rain", "sun",
                                                 "war", "song", "food", "love", "ice",  "cream"};
  return words;
}

std::vector<std::string> split_underscore(const std::string& term) {
  std::vector<std::string> parts;
  std::stringstream ss(term);
  std::string part;
  while (std::getline(ss, part, '_')) parts.push_back(part);
  return parts;
}

}  // namespace

CategoryProfile naive_analyze(const std::vector<std::string>& tokens, const Lexicon& lexicon,
                              Normalization mode) {
  CategoryProfile p;
  for (const auto& c : lexicon.categories()) p.categories.push_back(c.name);
  p.raw_counts.assign(p.categories.size(), 0);
  p.intensities.assign(p.categories.size(), 0.0);
  p.total_tokens = tokens.size();

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bool any = false;
    for (std::size_t c = 0; c < lexicon.size(); ++c) {
      bool hit = false;
      for (const auto& term : lexicon.categories()[c].terms) {
        const auto words = split_underscore(term);
        if (i + words.size() > tokens.size()) continue;
        bool equal = true;
        for (std::size_t w = 0; w < words.size(); ++w) {
          if (tokens[i + w] != words[w]) equal = false;
        }
        if (equal) hit = true;
      }
      if (hit) {
        ++p.raw_counts[c];
        any = true;
      }
    }
    if (any) ++p.matched_occurrences;
  }
  const auto denom = mode == Normalization::kByMatched ? p.matched_occurrences : p.total_tokens;
  for (std::size_t c = 0; c < p.categories.size(); ++c) {
    p.intensities[c] = denom == 0 ? 0.0 : double(p.raw_counts[c]) / double(denom);
  }
  return p;
}

double student_t_cdf_quadrature(double t, double df) {
  using boost::math::quadrature::gauss_kronrod;
  const long double v = df;
  const long double log_norm =
      std::lgammal((v + 1) / 2) - std::lgammal(v / 2) - 0.5L * std::log(v * 3.141592653589793238462643383279502884L);
  auto pdf = [&](long double s) {
    return std::exp(log_norm - (v + 1) / 2 * std::log1p(s * s / v));
  };
  const long double upper = std::fabs(static_cast<long double>(t));
  long double area = 0;
  if (upper > 0) {
    area = gauss_kronrod<long double, 61>::integrate(pdf, 0.0L, upper, 20, 1e-16L);
  }
  return static_cast<double>(t >= 0 ? 0.5L + area : 0.5L - area);
}

double entropy_high_precision(const std::vector<double>& weights) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  Big total = 0;
  for (const double w : weights) {
    if (w > 0) total += Big(w);
  }
  Big h = 0;
  for (const double w : weights) {
    if (w > 0) {
      const Big p = Big(w) / total;
      h -= p * log(p) / log(Big(2));
    }
  }
  return static_cast<double>(h);
}

Lexicon random_lexicon(std::mt19937_64& rng, std::size_t max_categories, bool unigrams_only) {
  const auto& words = vocabulary();
  const std::size_t k = 1 + rng() % max_categories;
  std::vector<Category> categories;
  for (std::size_t c = 0; c < k; ++c) {
    Category cat{"c" + std::to_string(c), {}};
    const std::size_t terms = 1 + rng() % 4;
    for (std::size_t t = 0; t < terms; ++t) {
      std::string term = words[rng() % words.size()];
      if (!unigrams_only && rng() % 5 == 0) term += "_" + words[rng() % words.size()];
      cat.terms.push_back(term);
    }
    categories.push_back(std::move(cat));
  }
  return Lexicon("random", std::move(categories));
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_tokens) {
  const auto& words = vocabulary();
  static const std::vector<std::string> misses = {"the", "xyzzy", "qwerty"};
  std::vector<std::string> tokens(rng() % (max_tokens + 1));
  for (auto& token : tokens) {
    token = rng() % 4 == 0 ? misses[rng() % misses.size()] : words[rng() % words.size()];
  }
  return tokens;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace semdelta::testing
