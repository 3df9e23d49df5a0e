#include "semdelta/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "semdelta/corpus.hpp"
#include "semdelta/error.hpp"
#include "semdelta/genclient.hpp"
#include "semdelta/lexicon.hpp"
#include "semdelta/pipeline.hpp"

namespace semdelta::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kDefaultWindowLines = 10;
constexpr std::string_view kStubTimestamp = "1970-01-01T00:00:00Z";

// Data problem tied to an input file; printed as "file:line: Code: detail".
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string describe(const fs::path& file, const Error& e) {
  std::string out = file.string();
  if (e.line() > 0) out += ":" + std::to_string(e.line());
  out += ": ";
  out += error_code_name(e.code());
  if (!e.detail().empty()) out += ": " + e.detail();
  return out;
}

struct ScoringFlags {
  std::string lexicon;
  std::string adapter;
  std::string normalization = "by-matched";
  std::string format = "json";
  std::string aggregation = "pooled";
  std::string output;
  bool one_sided = false;
  std::size_t jobs = std::max(1U, std::thread::hardware_concurrency());
};

void add_scoring_options(CLI::App& cmd, ScoringFlags& flags) {
  cmd.add_option("--lexicon", flags.lexicon, "Lexicon TSV file")->required()->check(CLI::ExistingFile);
  cmd.add_option("--adapter", flags.adapter, "Adapter config JSON applied to every input")
      ->check(CLI::ExistingFile);
  cmd.add_option("--normalization", flags.normalization, "Intensity normalization")
      ->check(CLI::IsMember({"by-matched", "by-total-tokens"}))
      ->capture_default_str();
  cmd.add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "svg"}))
      ->capture_default_str();
  cmd.add_option("--aggregation", flags.aggregation, "Per-label headline means")
      ->check(CLI::IsMember({"pooled", "mean-of-sources"}))
      ->capture_default_str();
  cmd.add_option("--output", flags.output, "Output file (default: standard output)");
  cmd.add_flag("--one-sided", flags.one_sided, "Test mean(ai) > mean(human) instead of two-sided");
  cmd.add_option("--jobs", flags.jobs, "Scoring threads")->check(CLI::PositiveNumber);
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty()) {
    out << data;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << data) || !file.flush()) {
    throw DataError("cannot write output file '" + path + "'");
  }
}

AdapterConfig adapter_for(const fs::path& input, const ScoringFlags& flags,
                          std::optional<Label> label) {
  AdapterConfig config;
  if (!flags.adapter.empty()) {
    try {
      config = AdapterConfig::from_json(nlohmann::json::parse(read_file(flags.adapter)));
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(flags.adapter + ": invalid JSON: " + e.what());
    } catch (const Error& e) {
      throw DataError(describe(flags.adapter, e));
    }
  } else {
    config.format = format_from_extension(input);
    if (config.format == CorpusFormat::kCsv) config.text_column = "text";
    if (config.format == CorpusFormat::kPlaintext) config.window_lines = kDefaultWindowLines;
  }
  if (config.source.empty()) config.source = input.stem().string();
  if (label) config.label = label;
  return config;
}

void load_inputs(const std::vector<std::string>& paths, std::optional<Label> label,
                 const ScoringFlags& flags, std::vector<DialogueRecord>& records,
                 std::vector<InputDescriptor>& inputs) {
  for (const auto& path : paths) {
    const fs::path input(path);
    auto config = adapter_for(input, flags, label);
    try {
      auto ingested = ingest(read_file(input), config);
      records.insert(records.end(), std::make_move_iterator(ingested.begin()),
                     std::make_move_iterator(ingested.end()));
    } catch (const Error& e) {
      throw DataError(describe(input, e));
    }
    inputs.push_back({input.filename().string(), std::move(config)});
  }
}

std::string score(std::vector<DialogueRecord> records, std::vector<InputDescriptor> inputs,
                  const ScoringFlags& flags) {
  Lexicon lexicon = [&] {
    try {
      return load_lexicon_file(flags.lexicon);
    } catch (const Error& e) {
      throw DataError(describe(flags.lexicon, e));
    }
  }();

  AnalysisOptions options;
  options.normalization = parse_normalization(flags.normalization);
  options.aggregation = parse_aggregation(flags.aggregation);
  options.tail = flags.one_sided ? Tail::kGreater : Tail::kTwoSided;
  options.jobs = flags.jobs;
  options.inputs = std::move(inputs);
  const auto report = run_analysis(records, lexicon, options);
  return render_report(report, parse_report_format(flags.format));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic-delta scoring of human and AI dialogue corpora", "semdelta"};
  app.require_subcommand(1);

  ScoringFlags analyze_flags;
  std::vector<std::string> analyze_inputs;
  std::string analyze_label;
  auto* analyze = app.add_subcommand("analyze", "Score one corpus");
  analyze->add_option("--input", analyze_inputs, "Corpus file(s)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--label", analyze_label, "Label for every record (default: from JSONL)")
      ->check(CLI::IsMember({"human", "ai"}));
  add_scoring_options(*analyze, analyze_flags);

  ScoringFlags compare_flags;
  std::vector<std::string> human_inputs;
  std::vector<std::string> ai_inputs;
  std::vector<std::string> labeled_inputs;
  auto* compare = app.add_subcommand("compare", "Score human and AI corpora and compare them");
  compare->add_option("--human", human_inputs, "Human corpus file(s)")->check(CLI::ExistingFile);
  compare->add_option("--ai", ai_inputs, "AI corpus file(s)")->check(CLI::ExistingFile);
  compare->add_option("--input", labeled_inputs, "Labeled JSONL corpus file(s)")
      ->check(CLI::ExistingFile);
  add_scoring_options(*compare, compare_flags);

  GenerationConfig gen;
  std::string prompts_path;
  std::string gen_output;
  std::size_t count_per_cell = 1;
  std::size_t gen_jobs = 4;
  bool stub = false;
  auto* generate = app.add_subcommand("generate", "Generate AI dialogues as JSONL");
  generate->add_option("--prompts", prompts_path, "Prompts TSV (cell_id, system_prompt, user_prompt_template)")
      ->check(CLI::ExistingFile);
  generate->add_option("--model", gen.model, "Model id")->capture_default_str();
  generate->add_option("--system-prompt", gen.system_prompt, "System prompt (without --prompts)");
  generate->add_option("--user-prompt", gen.user_prompt_template,
                       "User prompt template, may contain {topic} (without --prompts)");
  generate->add_option("--topics", gen.topics, "Topics substituted for {topic}")->delimiter(',');
  generate->add_option("--turns", gen.turns, "Assistant turns per dialogue")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--count", count_per_cell, "Dialogues per prompt cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--temperature", gen.temperature, "Sampling temperature")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  generate->add_option("--max-retries", gen.max_retries, "Retries per request")->capture_default_str();
  generate->add_option("--endpoint", gen.endpoint_url, "Chat-completions URL")->capture_default_str();
  generate->add_option("--api-key-env", gen.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  generate->add_option("--source", gen.source, "Source tag and id prefix (default: model)");
  generate->add_option("--jobs", gen_jobs, "Requests in flight")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--output", gen_output, "Output JSONL (default: standard output)");
  generate->add_flag("--stub", stub, "Use built-in canned replies; no network access");

  std::string validate_lexicon;
  std::string validate_output;
  auto* lexicon_validate = app.add_subcommand("lexicon-validate", "Load a lexicon and print its size");
  lexicon_validate->add_option("--lexicon", validate_lexicon, "Lexicon TSV file")
      ->required()
      ->check(CLI::ExistingFile);
  lexicon_validate->add_option("--output", validate_output, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "semdelta: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      std::optional<Label> label;
      if (!analyze_label.empty()) label = parse_label(analyze_label);
      std::vector<DialogueRecord> records;
      std::vector<InputDescriptor> inputs;
      load_inputs(analyze_inputs, label, analyze_flags, records, inputs);
      write_output(analyze_flags.output, score(std::move(records), std::move(inputs), analyze_flags), out);
    } else if (compare->parsed()) {
      if (human_inputs.empty() && ai_inputs.empty() && labeled_inputs.empty()) {
        err << "semdelta: compare needs --human/--ai or --input\n\n" << compare->help();
        return kExitUsage;
      }
      std::vector<DialogueRecord> records;
      std::vector<InputDescriptor> inputs;
      load_inputs(human_inputs, Label::kHuman, compare_flags, records, inputs);
      load_inputs(ai_inputs, Label::kAi, compare_flags, records, inputs);
      load_inputs(labeled_inputs, std::nullopt, compare_flags, records, inputs);
      write_output(compare_flags.output, score(std::move(records), std::move(inputs), compare_flags), out);
    } else if (generate->parsed()) {
      std::vector<PromptVariant> variants;
      if (!prompts_path.empty()) {
        try {
          variants = load_prompt_matrix(read_file(prompts_path));
        } catch (const Error& e) {
          throw DataError(describe(prompts_path, e));
        }
      }
      GenerationOptions options;
      options.max_in_flight = gen_jobs;
      std::unique_ptr<ChatTransport> transport;
      if (stub) {
        transport = std::make_unique<StubChatTransport>(StubChatTransport::canned());
        options.backoff_base = std::chrono::milliseconds(0);
        options.now = [] { return std::string(kStubTimestamp); };
      } else {
        gen.validate();
        transport = make_http_transport(gen);
      }
      const auto result = variants.empty()
                              ? generate_dialogues(gen, count_per_cell, *transport, options)
                              : generate_dialogues(gen, variants, count_per_cell, *transport, options);
      for (const auto& failure : result.failures) {
        err << "semdelta: generation failed for " << failure.record_id << " (cell "
            << failure.cell_index << ", replica " << failure.replica
            << "): " << error_code_name(failure.code) << ": " << failure.message << '\n';
      }
      err << "semdelta: generated " << result.records.size() << " of "
          << result.cells * count_per_cell << " dialogues\n";
      if (result.records.empty()) return kExitData;
      write_output(gen_output, write_jsonl(result.records), out);
    } else if (lexicon_validate->parsed()) {
      const Lexicon lexicon = [&] {
        try {
          return load_lexicon_file(validate_lexicon);
        } catch (const Error& e) {
          throw DataError(describe(validate_lexicon, e));
        }
      }();
      std::size_t ngrams = 0;
      for (const auto& category : lexicon.categories()) {
        for (const auto& term : category.terms) {
          if (term.find('_') != std::string::npos) ++ngrams;
        }
      }
      write_output(validate_output,
                   "lexicon " + lexicon.name() + ": " + std::to_string(lexicon.size()) +
                       " categories, " + std::to_string(lexicon.term_count()) + " terms (" +
                       std::to_string(ngrams) + " multi-word)\n",
                   out);
    }
  } catch (const DataError& e) {
    err << "semdelta: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "semdelta: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidConfig ? kExitUsage : kExitData;
  }
  return kExitOk;
}

}  // namespace semdelta::cli
