#include "semdelta/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <variant>

#include "semdelta/error.hpp"
#include "semdelta/metrics.hpp"
#include "semdelta/tokenizer.hpp"

namespace semdelta {

namespace {

using Scored = std::variant<RecordRow, SkippedRecord>;

Scored score_record(const DialogueRecord& record, const Analyzer& analyzer,
                    Normalization normalization) {
  const auto profile = analyzer.analyze(tokenize(record.text), normalization);
  if (profile.matched_occurrences == 0) {
    return SkippedRecord{record.id, record.label, "no-matches"};
  }
  const auto delta = semantic_delta(profile);
  const auto entropy = shannon_entropy(profile);

  RecordRow row;
  row.id = record.id;
  row.label = record.label;
  row.source = record.source;
  row.top1 = delta.top1_category;
  row.iv1 = delta.top1_intensity;
  row.top2 = delta.top2_category;
  row.iv2 = delta.top2_intensity;
  row.delta = delta.delta;
  row.entropy_bits = entropy.bits;
  row.support_size = entropy.support_size;
  row.matched_occurrences = profile.matched_occurrences;
  row.total_tokens = profile.total_tokens;
  return row;
}

std::vector<Scored> score_all(const std::vector<const DialogueRecord*>& ordered,
                              const Analyzer& analyzer, const AnalysisOptions& options) {
  std::vector<std::optional<Scored>> slots(ordered.size());
  const std::size_t threads = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(ordered.size(), 1));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < ordered.size(); i += threads) {
      slots[i] = score_record(*ordered[i], analyzer, options.normalization);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();

  std::vector<Scored> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

GroupStats summarize_rows(const std::vector<const RecordRow*>& rows) {
  RunningStats delta;
  RunningStats entropy;
  for (const auto* row : rows) {
    delta.push(row->delta);
    entropy.push(row->entropy_bits);
  }
  return GroupStats{delta.finish(), entropy.finish()};
}

Comparison compare(const std::map<Label, GroupStats>& groups, Tail tail,
                   SampleStats GroupStats::*metric) {
  Comparison comparison;
  const auto ai = groups.find(Label::kAi);
  const auto human = groups.find(Label::kHuman);
  if (ai == groups.end() || human == groups.end()) {
    comparison.unavailable_reason = "single label";
    return comparison;
  }
  try {
    comparison.result = welch_t_test(ai->second.*metric, human->second.*metric, tail);
  } catch (const Error& e) {
    comparison.unavailable_reason = std::string(error_code_name(e.code()));
  }
  return comparison;
}

}  // namespace

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kPooled ? "pooled" : "mean-of-sources";
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "pooled") return Aggregation::kPooled;
  if (text == "mean-of-sources") return Aggregation::kMeanOfSources;
  throw Error(ErrorCode::kInvalidConfig, "unknown aggregation '" + std::string(text) + "'");
}

AnalysisReport run_analysis(std::span<const DialogueRecord> records, const Lexicon& lexicon,
                            const AnalysisOptions& options) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no records to analyze");
  }
  if (options.histogram_bins == 0) {
    throw Error(ErrorCode::kInvalidConfig, "histogram needs at least one bin");
  }

  std::vector<const DialogueRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& record : records) ordered.push_back(&record);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->id == ordered[i - 1]->id) {
      throw Error(ErrorCode::kDuplicateId, "record id '" + ordered[i]->id + "' appears twice");
    }
  }

  AnalysisReport report;
  report.lexicon_name = lexicon.name();
  report.lexicon_categories = lexicon.size();
  report.normalization = options.normalization;
  report.tail = options.tail;
  report.aggregation = options.aggregation;
  report.inputs = options.inputs;

  const Analyzer analyzer(lexicon);
  for (auto& scored : score_all(ordered, analyzer, options)) {
    if (auto* row = std::get_if<RecordRow>(&scored)) {
      report.records.push_back(std::move(*row));
    } else {
      report.skipped.push_back(std::move(std::get<SkippedRecord>(scored)));
    }
  }
  if (report.records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "all " + std::to_string(records.size()) +
                                             " records were skipped (no lexicon matches)");
  }

  std::map<Label, std::vector<const RecordRow*>> by_label;
  std::map<std::pair<Label, std::string>, std::vector<const RecordRow*>> by_source;
  for (const auto& row : report.records) {
    by_label[row.label].push_back(&row);
    by_source[{row.label, row.source}].push_back(&row);
  }
  for (const auto& [label, rows] : by_label) {
    report.group_stats[label] = summarize_rows(rows);
  }
  for (const auto& [key, rows] : by_source) {
    report.source_stats[key] = summarize_rows(rows);
  }

  for (const auto& [label, stats] : report.group_stats) {
    LabelSummary summary;
    if (options.aggregation == Aggregation::kPooled) {
      summary.delta_mean = stats.delta.mean;
      summary.entropy_mean = stats.entropy.mean;
    }
    for (const auto& [key, source] : report.source_stats) {
      if (key.first != label) continue;
      ++summary.sources;
      if (options.aggregation == Aggregation::kMeanOfSources) {
        summary.delta_mean += source.delta.mean;
        summary.entropy_mean += source.entropy.mean;
      }
    }
    if (options.aggregation == Aggregation::kMeanOfSources) {
      summary.delta_mean /= static_cast<double>(summary.sources);
      summary.entropy_mean /= static_cast<double>(summary.sources);
    }
    report.label_summary[label] = summary;
  }

  report.welch_delta = compare(report.group_stats, options.tail, &GroupStats::delta);
  report.welch_entropy = compare(report.group_stats, options.tail, &GroupStats::entropy);

  // Shared equal-width bins over [0, max delta].
  double max_delta = 0.0;
  for (const auto& row : report.records) max_delta = std::max(max_delta, row.delta);
  const double upper = max_delta > 0.0 ? max_delta : 1.0;
  const std::size_t bins = options.histogram_bins;
  const double width = upper / static_cast<double>(bins);
  for (const auto& [label, rows] : by_label) {
    auto& histogram = report.histogram[label];
    histogram.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      histogram[b].lower = width * static_cast<double>(b);
      histogram[b].upper = b + 1 == bins ? upper : width * static_cast<double>(b + 1);
    }
    for (const auto* row : rows) {
      const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(row->delta / width)));
      ++histogram[b].count;
    }
  }
  return report;
}

}  // namespace semdelta
