#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogeval/protocol.hpp"

namespace cogeval {

struct ReportCell {
  double mean = 0.0;
  std::optional<double> stddev;
  std::string text;  ///< format_cell(mean, stddev)
};

/// One train/test line of the table for one cognitive test.
struct ReportRow {
  std::string test_id;
  Protocol protocol = Protocol::Within;
  std::string train;  ///< corpus id, or "MIX"
  std::string test;
  std::map<std::string, ReportCell> cells;  ///< feature family -> cell
};

struct Report {
  std::vector<std::string> families;  ///< column order (first appearance)
  std::vector<ReportRow> rows;        ///< per test: within, cross, then mixed rows
};

/// Groups results into a UAR table: "mean±std" percent cells, std omitted
/// for cross-corpus rows.
Report format_report(std::span<const ExperimentResult> results);

/// Plain-text rendering; empty string for an empty report.
std::string render_text(const Report& report);

}  // namespace cogeval
