#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace semdelta {

enum class Label { kHuman, kAi };

std::string_view to_string(Label label);
// Accepts "human" and "ai"; throws Error{kInvalidConfig} otherwise.
Label parse_label(std::string_view text);
std::optional<Label> try_parse_label(std::string_view text);

// One scored unit of dialogue.
struct DialogueRecord {
  std::string id;
  Label label = Label::kHuman;
  std::string source;
  std::string text;
  std::map<std::string, std::string> meta;

  bool operator==(const DialogueRecord&) const = default;
};

enum class CorpusFormat { kJsonl, kCsv, kPlaintext };

std::string_view to_string(CorpusFormat format);
CorpusFormat parse_corpus_format(std::string_view text);
// ".jsonl"/".json" -> jsonl, ".csv" -> csv, anything else -> plaintext.
CorpusFormat format_from_extension(const std::filesystem::path& path);

// Describes how one input file becomes records. The dialogue unit is a CSV
// group (scene, thread), a CSV row, a JSONL line, or a window of plaintext
// lines.
struct AdapterConfig {
  CorpusFormat format = CorpusFormat::kJsonl;
  std::string text_column;                  // csv only, required there
  std::optional<std::string> group_column;  // csv only
  std::size_t window_lines = 1;             // plaintext only
  // Overrides any per-line label. Required for csv and plaintext.
  std::optional<Label> label;
  std::string source;

  // Throws Error{kInvalidConfig}.
  void validate() const;

  nlohmann::json to_json() const;
  static AdapterConfig from_json(const nlohmann::json& j);
};

// Decodes a corpus into records in source order.
//
// Generated ids are "{source}-{index}" with the running record index
// zero-padded to six digits; JSONL lines may supply their own id. Errors
// carry the 1-based line of the offending input.
std::vector<DialogueRecord> ingest(std::string_view bytes, const AdapterConfig& config);

// One JSON object per line with keys id, label, source, text and meta.
std::string write_jsonl(std::span<const DialogueRecord> records);

std::string make_record_id(std::string_view source, std::size_t index);

// Throws Error{kIo}.
std::string read_file(const std::filesystem::path& path);

}  // namespace semdelta
