// Writes the synthetic desk-scale corpora used by the acceptance suite.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "semdelta/corpus.hpp"
#include "semdelta/lexicon.hpp"
#include "semdelta/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write data/fixtures/synthetic_{ai,human}.jsonl", "semdelta-make-fixtures"};
  std::string out_dir = "data/fixtures";
  app.add_option("--out-dir", out_dir, "Directory for the JSONL files")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto corpus = semdelta::synthetic::make_corpus(semdelta::builtin_test_lexicon());
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& [name, records] : {std::pair{"synthetic_ai.jsonl", &corpus.ai},
                                      std::pair{"synthetic_human.jsonl", &corpus.human}}) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << semdelta::write_jsonl(*records);
    if (!out) {
      std::cerr << "cannot write " << (dir / name).string() << '\n';
      return 2;
    }
  }
  std::cout << "wrote " << corpus.ai.size() << " ai and " << corpus.human.size()
            << " human records to " << dir.string() << '\n';
  return 0;
}
