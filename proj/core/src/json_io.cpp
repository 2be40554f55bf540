#include "cogeval/json_io.hpp"

#include "cogeval/errors.hpp"
#include "cogeval/version.hpp"

namespace cogeval {

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.kernel.kind = parse_kernel(j.at("kernel").get<std::string>());
  if (h.kernel.kind == KernelKind::Rbf) h.kernel.gamma = j.at("gamma").get<double>();
  h.c = j.at("C").get<double>();
  if (j.contains("layer") && !j.at("layer").is_null()) h.layer = j.at("layer").get<int>();
  h.feature_set = j.at("feature_set").get<std::string>();
  return h;
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec s;
  s.protocol = parse_protocol(j.at("protocol").get<std::string>());
  s.train_corpus = j.at("train_corpus").get<std::string>();
  s.test_corpus = j.at("test_corpus").get<std::string>();
  s.test_id = j.at("test_id").get<std::string>();
  s.feature_family = j.at("feature_family").get<std::string>();
  s.target = parse_label(j.at("target").get<std::string>());
  s.pooling = parse_pooling(j.at("pooling").get<std::string>());
  s.k = j.at("k").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

}  // namespace

json to_json(const ConfusionMatrix& m) {
  json rows = json::array();
  for (const auto& row : m.counts) rows.push_back(json::array({row[0], row[1], row[2]}));
  return rows;
}

ConfusionMatrix confusion_from_json(const json& j) {
  ConfusionMatrix m;
  if (!j.is_array() || j.size() != 3) throw ParseError("confusion matrix must be a 3x3 array");
  for (std::size_t r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw ParseError("confusion matrix must be a 3x3 array");
    for (std::size_t c = 0; c < 3; ++c) m.counts[r][c] = j[r][c].get<std::int64_t>();
  }
  return m;
}

json to_json(const KernelConfig& k) {
  json j{{"kind", std::string(to_string(k.kind))}};
  if (k.kind == KernelKind::Rbf) j["gamma"] = k.gamma;
  return j;
}

json to_json(const Hyperparameters& h) {
  json j{{"kernel", std::string(to_string(h.kernel.kind))}, {"C", h.c}, {"feature_set", h.feature_set}};
  j["gamma"] = h.kernel.kind == KernelKind::Rbf ? json(h.kernel.gamma) : json(nullptr);
  j["layer"] = h.layer ? json(*h.layer) : json(nullptr);
  return j;
}

json to_json(const HyperGrid& g) {
  json kernels = json::array();
  for (auto k : g.kernels) kernels.push_back(std::string(to_string(k)));
  return {{"kernels", kernels}, {"C", g.c_values}, {"gamma", g.gamma_values}, {"layers", g.layers}};
}

json to_json(const ExperimentSpec& s) {
  return {{"protocol", std::string(to_string(s.protocol))},
          {"train_corpus", s.train_corpus},
          {"test_corpus", s.test_corpus},
          {"test_id", s.test_id},
          {"feature_family", s.feature_family},
          {"target", std::string(to_string(s.target))},
          {"pooling", std::string(to_string(s.pooling))},
          {"k", s.k},
          {"seed", s.seed}};
}

json to_json(const SvmMulticlassModel& model) {
  json pairs = json::array();
  for (const auto& m : model.binary_models) {
    json sv = json::array();
    for (std::size_t i = 0; i < m.support_vectors.rows(); ++i) {
      const auto row = m.support_vectors.row(i);
      sv.push_back(std::vector<double>(row.begin(), row.end()));
    }
    pairs.push_back({{"class_pair", {m.class_pair.first, m.class_pair.second}},
                     {"kernel", to_json(m.kernel)},
                     {"C", m.c},
                     {"bias", m.bias},
                     {"dual_coefs", m.dual_coefs},
                     {"support_vectors", sv},
                     {"dual_objective", m.dual_objective},
                     {"updates", m.updates}});
  }
  return {{"format", "cogeval-svm-ovo"},
          {"scaler", {{"mean", model.scaler.mean}, {"scale", model.scaler.scale}}},
          {"binary_models", pairs}};
}

json to_json(const ExperimentResult& r, const std::optional<std::string>& generated_at) {
  json folds = json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"fold", f.fold},
                     {"confusion", to_json(f.confusion)},
                     {"uar", f.uar},
                     {"chosen", to_json(f.chosen)},
                     {"inner_uar", f.inner_uar},
                     {"n_train", f.n_train},
                     {"n_test", f.n_test}});
  }
  json j{{"tool", "cogeval"},
         {"version", kVersion},
         {"seed", r.spec.seed},
         {"spec", to_json(r.spec)},
         {"grid", to_json(r.grid)},
         {"corpora", r.corpora},
         {"folds", folds},
         {"mean_uar", r.mean_uar},
         {"std_uar", opt(r.std_uar)},
         {"cell", format_cell(r.mean_uar, r.std_uar)},
         {"predictions", r.predictions}};
  if (generated_at) j["generated_at"] = *generated_at;
  return j;
}

ExperimentResult result_from_json(const json& j) {
  try {
    ExperimentResult r;
    r.spec = spec_from_json(j.at("spec"));
    const json& g = j.at("grid");
    r.grid.kernels.clear();
    for (const auto& k : g.at("kernels")) r.grid.kernels.push_back(parse_kernel(k.get<std::string>()));
    r.grid.c_values = g.at("C").get<std::vector<double>>();
    r.grid.gamma_values = g.at("gamma").get<std::vector<double>>();
    r.grid.layers = g.at("layers").get<std::vector<int>>();
    r.corpora = j.at("corpora").get<std::vector<std::string>>();
    for (const auto& f : j.at("folds")) {
      FoldResult fr;
      fr.fold = f.at("fold").get<int>();
      fr.confusion = confusion_from_json(f.at("confusion"));
      fr.uar = f.at("uar").get<double>();
      fr.chosen = hyper_from_json(f.at("chosen"));
      fr.inner_uar = f.at("inner_uar").get<double>();
      fr.n_train = f.at("n_train").get<std::size_t>();
      fr.n_test = f.at("n_test").get<std::size_t>();
      r.folds.push_back(std::move(fr));
    }
    r.mean_uar = j.at("mean_uar").get<double>();
    if (!j.at("std_uar").is_null()) r.std_uar = j.at("std_uar").get<double>();
    r.predictions = j.at("predictions").get<std::map<std::string, int>>();
    for (const auto& [id, p] : r.predictions) {
      if (p < 0 || p > 2) throw ParseError("prediction for \"" + id + "\" out of range");
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what());
  }
}

json to_json(const Report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json cells = json::object();
    for (const auto& [fam, cell] : row.cells) {
      cells[fam] = {{"text", cell.text}, {"mean", cell.mean}, {"std", opt(cell.stddev)}};
    }
    rows.push_back({{"test_id", row.test_id},
                    {"protocol", std::string(to_string(row.protocol))},
                    {"train", row.train},
                    {"test", row.test},
                    {"cells", cells}});
  }
  return {{"metric", "UAR (%)"}, {"families", report.families}, {"rows", rows}};
}

json to_json(const CellAssignment& a) {
  json members = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(a.members(r, c));
    members.push_back(row);
  }
  return {{"counts", to_json(a.counts)}, {"members", members}};
}

json to_json(const OverlapTable& t) {
  json rows = json::array();
  for (const auto& row : t) {
    json out = json::array();
    for (const auto& cell : row) {
      out.push_back({{"shared", cell.shared},
                     {"reference_count", cell.reference_count},
                     {"other_count", cell.other_count},
                     {"fraction", opt(cell.fraction)},
                     {"fraction_of_other", opt(cell.fraction_of_other)}});
    }
    rows.push_back(out);
  }
  return rows;
}

json to_json(const Breakdown& b) {
  const auto part = [](const PartitionStats& p) {
    return json{{"count", p.sessions.size()},
                {"sessions", p.sessions},
                {"depressed_fraction", opt(p.depressed_fraction)},
                {"above_mean_fraction", opt(p.above_mean_fraction)},
                {"below_mean_fraction", opt(p.below_mean_fraction)}};
  };
  return {{"analyzed", b.analyzed},
          {"errors", b.errors},
          {"under", part(b.under)},
          {"over", part(b.over)},
          {"score_mean", opt(b.score_mean)},
          {"warnings", b.warnings}};
}

}  // namespace cogeval
