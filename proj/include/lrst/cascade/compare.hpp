#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrst/cascade/run_report.hpp"
#include "lrst/error.hpp"
#include "lrst/metrics/report.hpp"

namespace lrst::cascade {

enum class TableFormat { markdown, csv, json };

inline TableFormat parse_table_format(std::string_view s) {
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw ValidationError("unknown table format '" + std::string(s) + "' (expected markdown, csv or json)");
}

/// One comparison column. WER is shown as a percentage, like the other
/// scores, and lower is better.
struct Column {
  std::string key;
  std::string title;
  bool higher_is_better = true;
  double display_scale = 1.0;
};

struct ComparisonRow {
  std::string system;
  std::string mode;
  std::vector<std::optional<double>> values;  ///< parallel to ComparisonTable::columns
};

struct ComparisonTable {
  std::vector<Column> columns;
  std::vector<ComparisonRow> rows;
};

inline std::optional<double> column_value(const RunReport& r, std::string_view key) {
  const auto& mt = r.metrics;
  if (key == "bleu") return mt ? mt->bleu : std::nullopt;
  if (key == "chrf_pp") return mt ? mt->chrf_pp : std::nullopt;
  if (key == "comet") return mt ? mt->comet : std::nullopt;
  if (key == "wer") {
    if (r.asr_metrics && r.asr_metrics->wer) return r.asr_metrics->wer;
    return mt ? mt->wer : std::nullopt;
  }
  return std::nullopt;
}

/// Columns are the union of metrics populated in any report.
inline ComparisonTable build_comparison(std::span<const RunReport> reports) {
  if (reports.empty()) throw ValidationError("compare needs at least one report");
  static const std::vector<Column> all = {
      {"bleu", "BLEU", true, 1.0},
      {"chrf_pp", "chrF++", true, 1.0},
      {"comet", "COMET", true, 1.0},
      {"wer", "WER", false, 100.0},
  };
  ComparisonTable t;
  for (const auto& col : all) {
    const bool populated = std::any_of(reports.begin(), reports.end(),
                                       [&](const RunReport& r) { return column_value(r, col.key).has_value(); });
    if (populated) t.columns.push_back(col);
  }
  for (const auto& r : reports) {
    ComparisonRow row{r.system, std::string(to_string(r.mode)), {}};
    for (const auto& col : t.columns) row.values.push_back(column_value(r, col.key));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Rank of each cell in its column: 0 = best, 1 = second best, -1 = neither
/// (or not highlighted). Best is marked once a column has two values,
/// second best once it has three. Ties share a rank.
inline std::vector<std::vector<int>> rank_cells(const ComparisonTable& t) {
  std::vector<std::vector<int>> ranks(t.rows.size(), std::vector<int>(t.columns.size(), -1));
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    std::vector<double> vals;
    for (const auto& row : t.rows) {
      if (row.values[c]) vals.push_back(*row.values[c]);
    }
    if (vals.size() < 2) continue;
    const bool higher = t.columns[c].higher_is_better;
    std::sort(vals.begin(), vals.end(), [&](double a, double b) { return higher ? a > b : a < b; });
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& v = t.rows[r].values[c];
      if (!v) continue;
      if (*v == vals[0]) {
        ranks[r][c] = 0;
      } else if (vals.size() > 1 && *v == vals[1] && t.rows.size() >= 3) {
        ranks[r][c] = 1;
      }
    }
  }
  return ranks;
}

inline std::string render_markdown(const ComparisonTable& t) {
  const auto ranks = rank_cells(t);
  std::ostringstream os;
  os << "| System | Mode |";
  for (const auto& c : t.columns) os << ' ' << c.title << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << "---:|";
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << "| " << t.rows[r].system << " | " << t.rows[r].mode << " |";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const auto& v = t.rows[r].values[c];
      std::string cell = v ? metrics::format_score(*v * t.columns[c].display_scale) : "-";
      if (ranks[r][c] == 0) cell = "**" + cell + "**";
      if (ranks[r][c] == 1) cell = "<u>" + cell + "</u>";
      os << ' ' << cell << " |";
    }
    os << '\n';
  }
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string render_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "system,mode";
  for (const auto& c : t.columns) os << ',' << c.key;
  os << '\n';
  for (const auto& row : t.rows) {
    os << csv_field(row.system) << ',' << row.mode;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      os << ',';
      if (row.values[c]) os << metrics::format_score(*row.values[c] * t.columns[c].display_scale);
    }
    os << '\n';
  }
  return os.str();
}

/// Full-precision values (WER as a ratio), so the JSON form round-trips.
inline nlohmann::ordered_json comparison_to_json(const ComparisonTable& t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json j;
    j["system"] = row.system;
    j["mode"] = row.mode;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (row.values[c]) j[t.columns[c].key] = *row.values[c];
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

inline std::string render(const ComparisonTable& t, TableFormat f) {
  switch (f) {
    case TableFormat::markdown: return render_markdown(t);
    case TableFormat::csv: return render_csv(t);
    case TableFormat::json: return comparison_to_json(t).dump(2) + "\n";
  }
  return {};
}

inline std::string compare(std::span<const RunReport> reports, TableFormat f) {
  return render(build_comparison(reports), f);
}

}  // namespace lrst::cascade
