#include "cogeval/analysis.hpp"

#include <algorithm>
#include <set>

#include "cogeval/errors.hpp"

namespace cogeval {

namespace {

std::string list_ids(const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& id : ids) s += " " + id;
  return s;
}

void fill_fractions(PartitionStats& p, const std::map<std::string, const SessionRecord*>& by_id, bool use_depression,
                    std::optional<double> mean) {
  if (p.sessions.empty()) return;
  const double n = static_cast<double>(p.sessions.size());
  if (use_depression) {
    std::size_t depressed = 0;
    for (const auto& id : p.sessions) depressed += by_id.at(id)->depression.value_or(0) > 0 ? 1 : 0;
    p.depressed_fraction = static_cast<double>(depressed) / n;
  }
  if (mean) {
    std::size_t above = 0, below = 0;
    for (const auto& id : p.sessions) {
      const double score = *by_id.at(id)->test_score;
      above += score > *mean ? 1 : 0;
      below += score < *mean ? 1 : 0;
    }
    p.above_mean_fraction = static_cast<double>(above) / n;
    p.below_mean_fraction = static_cast<double>(below) / n;
  }
}

}  // namespace

void CellAssignment::assign(const std::string& session_id, int row, int col) {
  if (row < 0 || row > 2 || col < 0 || col > 2) {
    throw PreconditionError("cell (" + std::to_string(row) + "," + std::to_string(col) + ") out of range");
  }
  if (!cells.emplace(session_id, std::make_pair(row, col)).second) {
    throw PreconditionError("session \"" + session_id + "\" assigned twice");
  }
  ++counts.counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
}

std::vector<std::string> CellAssignment::members(int row, int col) const {
  std::vector<std::string> out;
  for (const auto& [id, cell] : cells) {
    if (cell.first == row && cell.second == col) out.push_back(id);
  }
  return out;
}

CellAssignment CellAssignment::transposed() const {
  CellAssignment t;
  for (const auto& [id, cell] : cells) t.assign(id, cell.second, cell.first);
  return t;
}

CellAssignment cooccurrence(std::span<const SessionRecord* const> sessions) {
  std::vector<std::string> missing;
  CellAssignment out;
  for (const auto* s : sessions) {
    if (!s->depression) {
      missing.push_back(s->session_id);
      continue;
    }
    out.assign(s->session_id, s->cognitive, *s->depression);
  }
  if (!missing.empty()) throw ValidationError("missing depression label for session(s):" + list_ids(missing));
  return out;
}

CellAssignment cooccurrence(const Corpus& corpus) {
  std::vector<const SessionRecord*> all;
  for (const auto& s : corpus.sessions) all.push_back(&s);
  return cooccurrence(all);
}

CellAssignment cross_label_confusion(const std::map<std::string, int>& predictions,
                                     std::span<const SessionRecord* const> sessions, Label against) {
  std::vector<std::string> uncovered;
  CellAssignment out;
  for (const auto* s : sessions) {
    const auto truth = s->label(against);
    if (!truth) continue;
    const auto it = predictions.find(s->session_id);
    if (it == predictions.end()) {
      uncovered.push_back(s->session_id);
      continue;
    }
    out.assign(s->session_id, *truth, it->second);
  }
  if (!uncovered.empty()) throw ValidationError("no prediction for session(s):" + list_ids(uncovered));
  return out;
}

OverlapTable cell_overlap(const CellAssignment& reference, const CellAssignment& other) {
  const bool same_universe =
      reference.cells.size() == other.cells.size() &&
      std::equal(reference.cells.begin(), reference.cells.end(), other.cells.begin(),
                 [](const auto& a, const auto& b) { return a.first == b.first; });
  if (!same_universe) {
    std::vector<std::string> diff;
    for (const auto& [id, _] : reference.cells) {
      if (!other.cells.contains(id)) diff.push_back(id);
    }
    for (const auto& [id, _] : other.cells) {
      if (!reference.cells.contains(id)) diff.push_back(id);
    }
    throw ValidationError("cell_overlap: session universes differ:" + list_ids(diff));
  }

  OverlapTable table{};
  for (const auto& [id, cell] : reference.cells) {
    if (other.cells.at(id) == cell) {
      ++table[static_cast<std::size_t>(cell.first)][static_cast<std::size_t>(cell.second)].shared;
    }
  }
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      OverlapCell& cell = table[r][c];
      cell.reference_count = reference.counts.counts[r][c];
      cell.other_count = other.counts.counts[r][c];
      if (cell.reference_count > 0) {
        cell.fraction = static_cast<double>(cell.shared) / static_cast<double>(cell.reference_count);
      }
      if (cell.other_count > 0) {
        cell.fraction_of_other = static_cast<double>(cell.shared) / static_cast<double>(cell.other_count);
      }
    }
  }
  return table;
}

Breakdown misclassification_breakdown(const ExperimentResult& result, const Corpus& corpus) {
  const Label target = result.spec.target;
  Breakdown out;

  std::map<std::string, const SessionRecord*> by_id;
  for (const auto& [id, pred] : result.predictions) {
    const SessionRecord* s = corpus.find(id);
    if (s == nullptr || s->test_id != result.spec.test_id) continue;
    const auto truth = s->label(target);
    if (!truth) throw ValidationError("session \"" + id + "\" lacks its " + std::string(to_string(target)) + " label");
    by_id.emplace(id, s);
    ++out.analyzed;
    if (pred < *truth) out.under.sessions.push_back(id);
    if (pred > *truth) out.over.sessions.push_back(id);
  }
  out.errors = out.under.sessions.size() + out.over.sessions.size();

  bool use_depression = true;
  for (const auto& [id, s] : by_id) {
    if (!s->depression) {
      use_depression = false;
      out.warnings.push_back("depression labels missing (e.g. session \"" + id + "\"); depression shares omitted");
      break;
    }
  }

  // Reference population for "above/below average": every session of this
  // test in the corpus.
  std::vector<double> scores;
  std::string score_gap;
  for (const auto* s : corpus.sessions_for_test(result.spec.test_id)) {
    if (!s->test_score) {
      score_gap = s->session_id;
      break;
    }
    scores.push_back(*s->test_score);
  }
  if (!score_gap.empty() || scores.empty()) {
    out.warnings.push_back(score_gap.empty() ? "no test scores available; test-performance shares omitted"
                                             : "test_score missing (e.g. session \"" + score_gap +
                                                   "\"); test-performance shares omitted");
  } else {
    double sum = 0.0;
    for (double v : scores) sum += v;
    out.score_mean = sum / static_cast<double>(scores.size());
  }

  fill_fractions(out.under, by_id, use_depression, out.score_mean);
  fill_fractions(out.over, by_id, use_depression, out.score_mean);
  return out;
}

}  // namespace cogeval
