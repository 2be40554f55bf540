#include "cogeval/report.hpp"

#include <algorithm>
#include <sstream>

namespace cogeval {

namespace {

// Display width of a UTF-8 string (code points; fine for "±").
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) {
    return (static_cast<unsigned char>(ch) & 0xC0) != 0x80;
  }));
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > width(s) ? w - width(s) : 0, ' '); }

int protocol_rank(Protocol p) { return p == Protocol::Within ? 0 : p == Protocol::Cross ? 1 : 2; }

}  // namespace

Report format_report(std::span<const ExperimentResult> results) {
  Report report;
  std::vector<std::string> test_order;
  for (const auto& r : results) {
    const auto& spec = r.spec;
    if (std::find(report.families.begin(), report.families.end(), spec.feature_family) == report.families.end()) {
      report.families.push_back(spec.feature_family);
    }
    if (std::find(test_order.begin(), test_order.end(), spec.test_id) == test_order.end()) {
      test_order.push_back(spec.test_id);
    }
    const bool mixed = spec.protocol == Protocol::Mixed;
    const std::string train = mixed ? "MIX" : spec.train_corpus;
    const std::string test = mixed ? "MIX" : spec.test_corpus;

    auto row = std::find_if(report.rows.begin(), report.rows.end(), [&](const ReportRow& x) {
      return x.test_id == spec.test_id && x.protocol == spec.protocol && x.train == train && x.test == test;
    });
    if (row == report.rows.end()) {
      report.rows.push_back({spec.test_id, spec.protocol, train, test, {}});
      row = std::prev(report.rows.end());
    }
    const auto stddev = spec.protocol == Protocol::Cross ? std::nullopt : r.std_uar;
    row->cells[spec.feature_family] = {r.mean_uar, stddev, format_cell(r.mean_uar, stddev)};
  }

  std::stable_sort(report.rows.begin(), report.rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    const auto ta = std::find(test_order.begin(), test_order.end(), a.test_id) - test_order.begin();
    const auto tb = std::find(test_order.begin(), test_order.end(), b.test_id) - test_order.begin();
    if (ta != tb) return ta < tb;
    return protocol_rank(a.protocol) < protocol_rank(b.protocol);
  });
  return report;
}

std::string render_text(const Report& report) {
  if (report.rows.empty()) return {};

  std::size_t w_train = 5, w_test = 4;
  std::vector<std::size_t> w_fam;
  for (const auto& fam : report.families) w_fam.push_back(width(fam));
  for (const auto& row : report.rows) {
    w_train = std::max(w_train, width(row.train));
    w_test = std::max(w_test, width(row.test));
    for (std::size_t f = 0; f < report.families.size(); ++f) {
      if (const auto it = row.cells.find(report.families[f]); it != row.cells.end()) {
        w_fam[f] = std::max(w_fam[f], width(it->second.text));
      }
    }
  }

  std::ostringstream out;
  const auto line = [&](const std::string& a, const std::string& b, const std::vector<std::string>& cells) {
    std::string s = pad(a, w_train) + "  " + pad(b, w_test) + " |";
    for (std::size_t f = 0; f < cells.size(); ++f) s += "  " + pad(cells[f], w_fam[f]);
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };
  std::size_t total = w_train + 2 + w_test + 2;
  for (auto w : w_fam) total += 2 + w;
  const std::string rule(total, '-');

  line("train", "test", report.families);
  std::string current_test;
  Protocol current_protocol = Protocol::Within;
  for (const auto& row : report.rows) {
    if (row.test_id != current_test) {
      out << rule << '\n' << row.test_id << '\n' << rule << '\n';
      current_test = row.test_id;
      current_protocol = row.protocol;
    } else if (row.protocol != current_protocol) {
      out << rule << '\n';
      current_protocol = row.protocol;
    }
    std::vector<std::string> cells;
    for (const auto& fam : report.families) {
      const auto it = row.cells.find(fam);
      cells.push_back(it == row.cells.end() ? "-" : it->second.text);
    }
    line(row.train, row.test, cells);
  }
  return out.str();
}

}  // namespace cogeval
