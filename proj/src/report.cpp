#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semdelta/error.hpp"
#include "semdelta/numfmt.hpp"
#include "semdelta/pipeline.hpp"

namespace semdelta {

namespace {

using nlohmann::json;

json number(double value) { return json(quantize(value)); }

json stats_json(const SampleStats& s) {
  return {{"mean", number(s.mean)}, {"variance", number(s.variance)}, {"stddev", number(s.stddev())}};
}

json group_json(const GroupStats& g) {
  return {{"n", g.delta.n}, {"delta", stats_json(g.delta)}, {"entropy", stats_json(g.entropy)}};
}

json comparison_json(const Comparison& c) {
  if (!c.result) {
    return {{"status", "n/a"}, {"reason", c.unavailable_reason}};
  }
  const auto& r = *c.result;
  return {{"status", "ok"},
          {"sample_a", "ai"},
          {"sample_b", "human"},
          {"t", number(r.t_statistic)},
          {"df", number(r.degrees_of_freedom)},
          {"p_value", number(r.p_value)},
          {"reject_at_0_05", r.reject_at_0_05},
          {"tail", std::string(to_string(r.tail))}};
}

std::string render_json(const AnalysisReport& report) {
  json j;
  j["schema_version"] = AnalysisReport::kSchemaVersion;
  j["lexicon"] = {{"name", report.lexicon_name}, {"categories", report.lexicon_categories}};
  j["options"] = {{"normalization", std::string(to_string(report.normalization))},
                  {"tail", std::string(to_string(report.tail))},
                  {"aggregation", std::string(to_string(report.aggregation))}};

  j["inputs"] = json::array();
  for (const auto& input : report.inputs) {
    j["inputs"].push_back({{"file", input.file}, {"adapter", input.adapter.to_json()}});
  }

  j["records"] = json::array();
  for (const auto& row : report.records) {
    j["records"].push_back({{"id", row.id},
                            {"label", std::string(to_string(row.label))},
                            {"source", row.source},
                            {"top1", row.top1},
                            {"iv1", number(row.iv1)},
                            {"top2", row.top2 ? json(*row.top2) : json()},
                            {"iv2", number(row.iv2)},
                            {"delta", number(row.delta)},
                            {"entropy_bits", number(row.entropy_bits)},
                            {"support_size", row.support_size},
                            {"matched_occurrences", row.matched_occurrences},
                            {"total_tokens", row.total_tokens}});
  }

  j["group_stats"] = json::object();
  for (const auto& [label, g] : report.group_stats) {
    j["group_stats"][std::string(to_string(label))] = group_json(g);
  }
  j["source_stats"] = json::array();
  for (const auto& [key, g] : report.source_stats) {
    auto entry = group_json(g);
    entry["label"] = std::string(to_string(key.first));
    entry["source"] = key.second;
    j["source_stats"].push_back(std::move(entry));
  }
  j["label_summary"] = json::object();
  for (const auto& [label, s] : report.label_summary) {
    j["label_summary"][std::string(to_string(label))] = {{"delta_mean", number(s.delta_mean)},
                                                         {"entropy_mean", number(s.entropy_mean)},
                                                         {"sources", s.sources}};
  }

  j["welch_delta"] = comparison_json(report.welch_delta);
  j["welch_entropy"] = comparison_json(report.welch_entropy);

  j["skipped"] = json::array();
  for (const auto& s : report.skipped) {
    j["skipped"].push_back(
        {{"id", s.id}, {"label", std::string(to_string(s.label))}, {"reason", s.reason}});
  }

  j["histogram"] = json::object();
  for (const auto& [label, bins] : report.histogram) {
    auto& out = j["histogram"][std::string(to_string(label))];
    out = json::array();
    for (const auto& bin : bins) {
      out.push_back({{"lower", number(bin.lower)}, {"upper", number(bin.upper)}, {"count", bin.count}});
    }
  }
  return j.dump(2) + "\n";
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (const char ch : value) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string render_csv(const AnalysisReport& report) {
  std::string out = "id,label,source,top1,iv1,top2,iv2,delta,entropy_bits\n";
  for (const auto& row : report.records) {
    out += csv_field(row.id) + ',' + std::string(to_string(row.label)) + ',' +
           csv_field(row.source) + ',' + csv_field(row.top1) + ',' + format_number(row.iv1) + ',' +
           csv_field(row.top2.value_or("")) + ',' + format_number(row.iv2) + ',' +
           format_number(row.delta) + ',' + format_number(row.entropy_bits) + '\n';
  }
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string fixed(double value, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string render_svg(const AnalysisReport& report) {
  constexpr double kWidth = 800;
  constexpr double kHeight = 520;
  constexpr double kLeft = 70;
  constexpr double kRight = 30;
  constexpr double kTop = 60;
  constexpr double kBottom = 150;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  struct Style {
    Label label;
    const char* color;
  };
  const Style styles[] = {{Label::kHuman, "#1f77b4"}, {Label::kAi, "#d62728"}};

  double x_max = 1.0;
  std::size_t y_max = 1;
  for (const auto& [label, bins] : report.histogram) {
    if (!bins.empty()) x_max = bins.back().upper;
    for (const auto& bin : bins) y_max = std::max(y_max, bin.count);
  }
  auto x_of = [&](double v) { return kLeft + plot_w * v / x_max; };
  auto y_of = [&](double c) { return kTop + plot_h * (1.0 - c / static_cast<double>(y_max)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
      << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << "Semantic delta by label (lexicon " << xml_escape(report.lexicon_name) << ", "
      << to_string(report.normalization) << ")</text>\n";

  // axes
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
      << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = x_max * i / 4.0;
    svg << "<text x=\"" << fixed(x_of(v)) << "\" y=\"" << fixed(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << format_number(v, 3) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(kTop + 4)
      << "\" text-anchor=\"end\">" << y_max << "</text>\n";
  svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(kTop + plot_h)
      << "\" text-anchor=\"end\">0</text>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kTop + plot_h + 36)
      << "\" text-anchor=\"middle\">delta (top-1 minus top-2 intensity)</text>\n";
  svg << "<text x=\"18\" y=\"" << fixed(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(kTop + plot_h / 2) << ")\">records</text>\n";

  double legend_y = kTop + plot_h + 62;
  for (const auto& style : styles) {
    const auto bins_it = report.histogram.find(style.label);
    if (bins_it == report.histogram.end()) continue;
    svg << "<g fill=\"" << style.color << "\" fill-opacity=\"0.45\" stroke=\"" << style.color
        << "\">\n";
    for (const auto& bin : bins_it->second) {
      if (bin.count == 0) continue;
      const double x0 = x_of(bin.lower);
      const double x1 = x_of(bin.upper);
      const double y = y_of(static_cast<double>(bin.count));
      svg << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(x1 - x0)
          << "\" height=\"" << fixed(kTop + plot_h - y) << "\"/>\n";
    }
    svg << "</g>\n";

    const auto& stats = report.group_stats.at(style.label).delta;
    const double mx = x_of(stats.mean);
    svg << "<line x1=\"" << fixed(mx) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(mx)
        << "\" y2=\"" << fixed(kTop + plot_h) << "\" stroke=\"" << style.color
        << "\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
    svg << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(legend_y - 10)
        << "\" width=\"12\" height=\"12\" fill=\"" << style.color << "\" fill-opacity=\"0.45\"/>\n";
    svg << "<text x=\"" << fixed(kLeft + 18) << "\" y=\"" << fixed(legend_y) << "\">"
        << to_string(style.label) << ": n=" << stats.n << ", mean=" << format_number(stats.mean, 4)
        << ", sd=" << format_number(stats.stddev(), 4) << "</text>\n";
    legend_y += 18;
  }

  svg << "<text x=\"" << fixed(kLeft) << "\" y=\"" << fixed(legend_y + 6) << "\">Welch (delta): ";
  if (report.welch_delta.result) {
    const auto& r = *report.welch_delta.result;
    svg << "t=" << format_number(r.t_statistic, 4) << ", df=" << format_number(r.degrees_of_freedom, 4)
        << ", p=" << format_number(r.p_value, 4) << " (" << to_string(r.tail) << ")";
  } else {
    svg << "n/a (" << xml_escape(report.welch_delta.unavailable_reason) << ")";
  }
  svg << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kSvg: return "svg";
  }
  return "json";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "svg") return ReportFormat::kSvg;
  throw Error(ErrorCode::kInvalidConfig, "unknown report format '" + std::string(text) + "'");
}

std::string render_report(const AnalysisReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return render_json(report);
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kSvg: return render_svg(report);
  }
  return {};
}

}  // namespace semdelta
