#include "semdelta/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <unordered_map>

#include "semdelta/error.hpp"
#include "semdelta/utf8.hpp"

namespace semdelta {

namespace {

struct Line {
  std::string_view text;
  std::size_t number;
};

// Splits on LF and strips one trailing CR per line. A final empty line
// after the last LF is dropped.
std::vector<Line> split_lines(std::string_view bytes) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < bytes.size()) {
    auto end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    auto line = bytes.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, number++});
    start = end + 1;
  }
  return lines;
}

class IdRegistry {
 public:
  void claim(const std::string& id, std::size_t line) {
    if (!seen_.insert(id).second) {
      throw Error(ErrorCode::kDuplicateId, "record id '" + id + "' is not unique", line);
    }
  }

 private:
  std::set<std::string> seen_;
};

std::string meta_value(const nlohmann::json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

std::vector<DialogueRecord> ingest_jsonl(std::string_view bytes, const AdapterConfig& config) {
  std::vector<DialogueRecord> records;
  IdRegistry ids;
  for (const auto& [text, number] : split_lines(bytes)) {
    if (utf8::is_blank(text)) continue;
    auto fail = [number = number](const std::string& why) {
      return Error(ErrorCode::kMalformedJsonLine, why, number);
    };

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw fail("expected a JSON object");

    const auto text_it = j.find("text");
    if (text_it == j.end() || !text_it->is_string()) throw fail("missing string field \"text\"");

    DialogueRecord record;
    record.text = text_it->get<std::string>();
    if (utf8::is_blank(record.text)) throw fail("field \"text\" is blank");

    if (config.label) {
      record.label = *config.label;
    } else {
      const auto label_it = j.find("label");
      if (label_it == j.end() || !label_it->is_string()) {
        throw fail("missing \"label\" and no label configured");
      }
      const auto label = try_parse_label(label_it->get<std::string>());
      if (!label) throw fail("label must be \"human\" or \"ai\"");
      record.label = *label;
    }

    const auto source_it = j.find("source");
    if (source_it != j.end() && source_it->is_string() && !source_it->get<std::string>().empty()) {
      record.source = source_it->get<std::string>();
    } else {
      record.source = config.source;
    }

    const auto id_it = j.find("id");
    if (id_it != j.end() && !id_it->is_null()) {
      if (!id_it->is_string() || id_it->get<std::string>().empty()) {
        throw fail("field \"id\" must be a non-empty string");
      }
      record.id = id_it->get<std::string>();
    } else {
      record.id = make_record_id(config.source, records.size());
    }
    ids.claim(record.id, number);

    if (const auto meta_it = j.find("meta"); meta_it != j.end() && !meta_it->is_null()) {
      if (!meta_it->is_object()) throw fail("field \"meta\" must be an object");
      for (const auto& [key, value] : meta_it->items()) {
        record.meta[key] = meta_value(value);
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line;
};

// RFC 4180 reader. Quoted fields may hold separators, doubled quotes and
// line breaks; CRLF and LF both end a record.
std::vector<CsvRow> parse_csv(std::string_view bytes) {
  std::vector<CsvRow> rows;
  CsvRow row{{}, 1};
  std::string field;
  std::size_t line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool row_has_content = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    if (row_has_content || row.fields.size() > 1 || !row.fields.front().empty()) {
      rows.push_back(std::move(row));
    }
    row = CsvRow{{}, line};
    row_has_content = false;
  };

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char ch = bytes[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::kMalformedCsv, "quote inside an unquoted field", line);
        }
        in_quotes = true;
        field_was_quoted = true;
        row_has_content = true;
        break;
      case ',':
        row_has_content = true;
        end_field();
        break;
      case '\r':
        if (i + 1 < bytes.size() && bytes[i + 1] == '\n') break;
        field.push_back(ch);
        break;
      case '\n':
        ++line;
        end_row();
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::kMalformedCsv, "text after a closing quote", line);
        }
        field.push_back(ch);
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kMalformedCsv, "unterminated quoted field", row.line);
  }
  if (!field.empty() || field_was_quoted || !row.fields.empty()) {
    end_row();
  }
  return rows;
}

std::vector<DialogueRecord> ingest_csv(std::string_view bytes, const AdapterConfig& config) {
  const auto rows = parse_csv(bytes);
  if (rows.empty()) {
    throw Error(ErrorCode::kMissingColumn, "CSV has no header row", 1);
  }
  const auto& header = rows.front().fields;
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::kMissingColumn, "CSV header lacks column '" + name + "'", 1);
  };
  const std::size_t text_col = column(config.text_column);
  const std::optional<std::size_t> group_col =
      config.group_column ? std::optional(column(*config.group_column)) : std::nullopt;

  struct Group {
    std::string key;
    std::string text;
    std::size_t rows = 0;
    std::size_t first_line = 0;
  };
  std::vector<Group> groups;
  std::unordered_map<std::string, std::size_t> group_index;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedCsv,
                  "expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(row.fields.size()),
                  row.line);
    }
    const auto& value = row.fields[text_col];
    if (utf8::is_blank(value)) continue;

    std::string key = group_col ? row.fields[*group_col] : std::to_string(r);
    auto [it, inserted] = group_index.try_emplace(key, groups.size());
    if (inserted) {
      groups.push_back(Group{std::move(key), {}, 0, row.line});
    }
    auto& group = groups[it->second];
    if (!group.text.empty()) group.text.push_back('\n');
    group.text += value;
    ++group.rows;
  }

  std::vector<DialogueRecord> records;
  records.reserve(groups.size());
  for (auto& group : groups) {
    DialogueRecord record;
    record.id = make_record_id(config.source, records.size());
    record.label = *config.label;
    record.source = config.source;
    record.text = std::move(group.text);
    record.meta["first_line"] = std::to_string(group.first_line);
    record.meta["rows"] = std::to_string(group.rows);
    if (group_col) record.meta["group"] = group.key;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<DialogueRecord> ingest_plaintext(std::string_view bytes, const AdapterConfig& config) {
  std::vector<Line> kept;
  for (const auto& line : split_lines(bytes)) {
    if (!utf8::is_blank(line.text)) kept.push_back(line);
  }

  std::vector<DialogueRecord> records;
  for (std::size_t start = 0; start < kept.size(); start += config.window_lines) {
    const std::size_t end = std::min(kept.size(), start + config.window_lines);
    DialogueRecord record;
    record.id = make_record_id(config.source, records.size());
    record.label = *config.label;
    record.source = config.source;
    for (std::size_t i = start; i < end; ++i) {
      if (i > start) record.text.push_back('\n');
      record.text += kept[i].text;
    }
    record.meta["first_line"] = std::to_string(kept[start].number);
    record.meta["last_line"] = std::to_string(kept[end - 1].number);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kAi ? "ai" : "human";
}

std::optional<Label> try_parse_label(std::string_view text) {
  if (text == "human") return Label::kHuman;
  if (text == "ai") return Label::kAi;
  return std::nullopt;
}

Label parse_label(std::string_view text) {
  if (auto label = try_parse_label(text)) return *label;
  throw Error(ErrorCode::kInvalidConfig,
              "label must be 'human' or 'ai', got '" + std::string(text) + "'");
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kJsonl: return "jsonl";
    case CorpusFormat::kCsv: return "csv";
    case CorpusFormat::kPlaintext: return "plaintext";
  }
  return "jsonl";
}

CorpusFormat parse_corpus_format(std::string_view text) {
  if (text == "jsonl") return CorpusFormat::kJsonl;
  if (text == "csv") return CorpusFormat::kCsv;
  if (text == "plaintext" || text == "txt") return CorpusFormat::kPlaintext;
  throw Error(ErrorCode::kInvalidConfig, "unknown corpus format '" + std::string(text) + "'");
}

CorpusFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = utf8::to_lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".json") return CorpusFormat::kJsonl;
  if (ext == ".csv") return CorpusFormat::kCsv;
  return CorpusFormat::kPlaintext;
}

void AdapterConfig::validate() const {
  auto invalid = [](const std::string& why) { return Error(ErrorCode::kInvalidConfig, why); };
  if (window_lines < 1) throw invalid("window_lines must be at least 1");
  if (source.empty()) throw invalid("source must be non-empty");
  if (format == CorpusFormat::kCsv && text_column.empty()) {
    throw invalid("csv adapter requires text_column");
  }
  if (format != CorpusFormat::kCsv && (!text_column.empty() || group_column)) {
    throw invalid("text_column/group_column apply to csv only");
  }
  if (format != CorpusFormat::kJsonl && !label) {
    throw invalid(std::string(to_string(format)) + " adapter requires a label");
  }
}

nlohmann::json AdapterConfig::to_json() const {
  nlohmann::json j;
  j["format"] = std::string(to_string(format));
  j["source"] = source;
  j["label"] = label ? nlohmann::json(std::string(to_string(*label))) : nlohmann::json();
  if (format == CorpusFormat::kCsv) {
    j["text_column"] = text_column;
    j["group_column"] = group_column ? nlohmann::json(*group_column) : nlohmann::json();
  }
  if (format == CorpusFormat::kPlaintext) {
    j["window_lines"] = window_lines;
  }
  return j;
}

AdapterConfig AdapterConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "adapter config must be a JSON object");
  }
  AdapterConfig config;
  try {
    config.format = parse_corpus_format(j.at("format").get<std::string>());
    if (j.contains("text_column")) config.text_column = j["text_column"].get<std::string>();
    if (j.contains("group_column") && !j["group_column"].is_null()) {
      config.group_column = j["group_column"].get<std::string>();
    }
    if (j.contains("window_lines")) {
      const auto w = j["window_lines"].get<long long>();
      if (w < 1) throw Error(ErrorCode::kInvalidConfig, "window_lines must be at least 1");
      config.window_lines = static_cast<std::size_t>(w);
    }
    if (j.contains("label") && !j["label"].is_null()) {
      config.label = parse_label(j["label"].get<std::string>());
    }
    if (j.contains("source")) config.source = j["source"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("adapter config: ") + e.what());
  }
  return config;
}

std::vector<DialogueRecord> ingest(std::string_view bytes, const AdapterConfig& config) {
  config.validate();
  utf8::require_valid(bytes, "corpus");

  std::vector<DialogueRecord> records;
  switch (config.format) {
    case CorpusFormat::kJsonl:
      records = ingest_jsonl(bytes, config);
      break;
    case CorpusFormat::kCsv:
      records = ingest_csv(bytes, config);
      break;
    case CorpusFormat::kPlaintext:
      records = ingest_plaintext(bytes, config);
      break;
  }
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus '" + config.source + "' produced no records");
  }
  return records;
}

std::string write_jsonl(std::span<const DialogueRecord> records) {
  std::string out;
  for (const auto& record : records) {
    nlohmann::json j;
    j["id"] = record.id;
    j["label"] = std::string(to_string(record.label));
    j["source"] = record.source;
    j["text"] = record.text;
    j["meta"] = nlohmann::json::object();
    for (const auto& [key, value] : record.meta) j["meta"][key] = value;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::string make_record_id(std::string_view source, std::size_t index) {
  char digits[32];
  std::snprintf(digits, sizeof digits, "%06zu", index);
  return std::string(source) + "-" + digits;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace semdelta
