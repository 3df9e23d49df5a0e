#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdelta/analyzer.hpp"
#include "semdelta/corpus.hpp"
#include "semdelta/lexicon.hpp"
#include "semdelta/stats.hpp"

namespace semdelta {

// How a label's headline means are formed when it spans several sources.
enum class Aggregation {
  kPooled,         // every record weighs the same
  kMeanOfSources,  // each source's mean weighs the same
};

std::string_view to_string(Aggregation aggregation);
Aggregation parse_aggregation(std::string_view text);

struct InputDescriptor {
  std::string file;  // base name only, so reports do not depend on checkout paths
  AdapterConfig adapter;
};

struct AnalysisOptions {
  Normalization normalization = Normalization::kByMatched;
  Tail tail = Tail::kTwoSided;
  Aggregation aggregation = Aggregation::kPooled;
  std::size_t jobs = 1;
  std::size_t histogram_bins = 30;
  // Recorded verbatim in the report header.
  std::vector<InputDescriptor> inputs;
};

struct RecordRow {
  std::string id;
  Label label = Label::kHuman;
  std::string source;
  std::string top1;
  double iv1 = 0.0;
  std::optional<std::string> top2;
  double iv2 = 0.0;
  double delta = 0.0;
  double entropy_bits = 0.0;
  std::size_t support_size = 0;
  std::size_t matched_occurrences = 0;
  std::size_t total_tokens = 0;
};

struct SkippedRecord {
  std::string id;
  Label label = Label::kHuman;
  std::string reason;
};

struct GroupStats {
  SampleStats delta;
  SampleStats entropy;
};

struct LabelSummary {
  double delta_mean = 0.0;
  double entropy_mean = 0.0;
  std::size_t sources = 0;
};

// Welch comparison of AI (first sample) against human (second sample), or
// the reason it could not be run.
struct Comparison {
  std::optional<WelchResult> result;
  std::string unavailable_reason;
};

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

struct AnalysisReport {
  static constexpr int kSchemaVersion = 1;

  std::string lexicon_name;
  std::size_t lexicon_categories = 0;
  Normalization normalization = Normalization::kByMatched;
  Tail tail = Tail::kTwoSided;
  Aggregation aggregation = Aggregation::kPooled;
  std::vector<InputDescriptor> inputs;

  std::vector<RecordRow> records;  // sorted by id
  std::map<Label, GroupStats> group_stats;
  std::map<std::pair<Label, std::string>, GroupStats> source_stats;
  std::map<Label, LabelSummary> label_summary;
  Comparison welch_delta;
  Comparison welch_entropy;
  std::vector<SkippedRecord> skipped;  // sorted by id
  std::map<Label, std::vector<HistogramBin>> histogram;
};

// Scores every record and compares the labels.
//
// Records are put in canonical id order before anything is computed, so the
// report does not depend on input order or on `jobs`. Records without any
// lexicon match are listed in `skipped`. Throws Error{kEmptyCorpus} when no
// record is given or every record is skipped, and Error{kDuplicateId} when
// two records share an id. A missing label or too small a group leaves the
// comparisons unavailable rather than failing.
AnalysisReport run_analysis(std::span<const DialogueRecord> records, const Lexicon& lexicon,
                            const AnalysisOptions& options = {});

enum class ReportFormat { kJson, kCsv, kSvg };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view text);

std::string render_report(const AnalysisReport& report, ReportFormat format);

}  // namespace semdelta
