#include "cogeval/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <set>
#include <thread>

#include "cogeval/errors.hpp"

namespace cogeval {

namespace {

// Runs fn(0..n-1) on up to `threads` workers. Exceptions are collected per
// index and the lowest-index one is rethrown, so failures do not depend on
// the schedule.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int label_of(const SessionRecord& s, Label target) {
  const auto v = s.label(target);
  if (!v) {
    throw ValidationError("session \"" + s.session_id + "\" has no " + std::string(to_string(target)) + " label");
  }
  return *v;
}

std::vector<int> labels_of(const SessionList& sessions, Label target) {
  std::vector<int> y;
  y.reserve(sessions.size());
  for (const auto* s : sessions) y.push_back(label_of(*s, target));
  return y;
}

FeatureMatrix select_rows(const FeatureMatrix& x, const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  for (auto r : rows) out.append_row(x.row(r));
  return out;
}

template <class T>
std::vector<T> select(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

SessionList sessions_or_throw(const Corpus& corpus, const std::string& test_id) {
  SessionList s = corpus.sessions_for_test(test_id);
  if (s.empty()) {
    throw PreconditionError("corpus \"" + corpus.corpus_id + "\" has no sessions for test \"" + test_id + "\"");
  }
  return s;
}

FoldResult evaluate_fold(int fold, const SessionList& train, const SessionList& test, const ExperimentSpec& spec,
                         const HyperGrid& grid, FeatureStore& store, const RunOptions& options,
                         std::map<std::string, int>& predictions) {
  const GridSearchOutcome gs = grid_search(train, spec, grid, store, inner_seed(spec.seed, fold), options);
  const std::vector<int> pred = fit_and_predict(train, test, gs.best, spec, store, options);
  const std::vector<int> truth = labels_of(test, spec.target);

  FoldResult r;
  r.fold = fold;
  r.confusion = confusion(truth, pred);
  r.uar = uar(r.confusion);
  r.chosen = gs.best;
  r.inner_uar = gs.best_uar;
  r.n_train = train.size();
  r.n_test = test.size();
  for (std::size_t i = 0; i < test.size(); ++i) predictions[test[i]->session_id] = pred[i];
  return r;
}

void finish(ExperimentResult& result) {
  std::vector<double> uars;
  for (const auto& f : result.folds) uars.push_back(f.uar);
  const UarSummary s = summarize(uars);
  result.mean_uar = s.mean;
  result.std_uar = result.spec.protocol == Protocol::Cross ? std::nullopt : s.stddev;
}

}  // namespace

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Within: return "within";
    case Protocol::Cross: return "cross";
    case Protocol::Mixed: return "mixed";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "within") return Protocol::Within;
  if (name == "cross") return Protocol::Cross;
  if (name == "mixed") return Protocol::Mixed;
  throw PreconditionError("unknown protocol '" + std::string(name) + "' (expected within|cross|mixed)");
}

std::string describe(const Hyperparameters& h) {
  char buf[128];
  if (h.kernel.kind == KernelKind::Rbf) {
    std::snprintf(buf, sizeof buf, "rbf C=%g gamma=%g", h.c, h.kernel.gamma);
  } else {
    std::snprintf(buf, sizeof buf, "linear C=%g", h.c);
  }
  std::string out = buf;
  if (h.layer) out += " layer=" + std::to_string(*h.layer);
  return out;
}

std::string layer_feature_set(std::string_view family, int layer) {
  char buf[16];
  std::snprintf(buf, sizeof buf, ".L%02d", layer);
  return std::string(family) + buf;
}

std::vector<int> detect_layers(const Corpus& corpus, std::string_view family) {
  const std::string prefix = std::string(family) + ".L";
  std::vector<int> layers;
  for (const auto& name : corpus.feature_sets) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string digits = name.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos) continue;
    const int layer = std::stoi(digits);
    if (layer_feature_set(family, layer) == name) layers.push_back(layer);
  }
  std::sort(layers.begin(), layers.end());
  return layers;
}

std::vector<Hyperparameters> HyperGrid::enumerate(std::string_view family) const {
  std::vector<std::optional<int>> layer_opts;
  if (layers.empty()) {
    layer_opts.emplace_back(std::nullopt);
  } else {
    auto sorted = layers;
    std::sort(sorted.begin(), sorted.end());
    for (int l : sorted) layer_opts.emplace_back(l);
  }
  auto cs = c_values;
  std::sort(cs.begin(), cs.end());
  auto gammas = gamma_values;
  std::sort(gammas.begin(), gammas.end());

  std::vector<Hyperparameters> points;
  for (KernelKind kind : {KernelKind::Linear, KernelKind::Rbf}) {
    if (std::find(kernels.begin(), kernels.end(), kind) == kernels.end()) continue;
    for (const auto& layer : layer_opts) {
      const std::string fs = layer ? layer_feature_set(family, *layer) : std::string(family);
      for (double c : cs) {
        if (kind == KernelKind::Linear) {
          points.push_back({KernelConfig::linear(), c, layer, fs});
        } else {
          for (double g : gammas) points.push_back({KernelConfig::rbf(g), c, layer, fs});
        }
      }
    }
  }
  return points;
}

void ExperimentSpec::validate() const {
  if (k < 2) throw PreconditionError("fold count must be at least 2");
  if (test_id.empty()) throw PreconditionError("experiment needs a test id");
  if (feature_family.empty()) throw PreconditionError("experiment needs a feature family");
  switch (protocol) {
    case Protocol::Within:
      if (!test_corpus.empty() && test_corpus != train_corpus) {
        throw PreconditionError("within-corpus protocol requires train and test corpus to be equal");
      }
      break;
    case Protocol::Cross:
      if (train_corpus.empty() || test_corpus.empty()) {
        throw PreconditionError("cross-corpus protocol needs both a train and a test corpus");
      }
      if (train_corpus == test_corpus) {
        throw PreconditionError("cross-corpus protocol requires distinct corpora, got \"" + train_corpus +
                                "\" twice");
      }
      break;
    case Protocol::Mixed:
      if (train_corpus.empty() || test_corpus.empty() || train_corpus == test_corpus) {
        throw PreconditionError("mixed-corpus protocol needs two distinct corpora");
      }
      break;
  }
}

HyperGrid resolve_grid(HyperGrid grid, const ExperimentSpec& spec, std::span<const Corpus* const> corpora) {
  if (grid.layers.empty() && !corpora.empty()) {
    std::vector<int> common = detect_layers(*corpora.front(), spec.feature_family);
    for (const Corpus* c : corpora.subspan(1)) {
      const auto other = detect_layers(*c, spec.feature_family);
      std::vector<int> both;
      std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::back_inserter(both));
      common = std::move(both);
    }
    grid.layers = common;
  }
  for (const Corpus* c : corpora) {
    for (const auto& h : grid.enumerate(spec.feature_family)) {
      if (!c->has_feature_set(h.feature_set)) {
        throw PreconditionError("corpus \"" + c->corpus_id + "\" has no feature set \"" + h.feature_set + "\"");
      }
    }
  }
  return grid;
}

GridSearchOutcome grid_search(const SessionList& train, const ExperimentSpec& spec, const HyperGrid& grid,
                              FeatureStore& store, std::uint64_t seed, const RunOptions& options) {
  const std::vector<Hyperparameters> points = grid.enumerate(spec.feature_family);
  if (points.empty()) throw PreconditionError("hyperparameter grid is empty");

  const SplitPlan inner = make_split(train, spec.k, seed, spec.target);
  const std::vector<int> y = labels_of(train, spec.target);
  std::vector<std::vector<std::size_t>> fold_train(static_cast<std::size_t>(spec.k));
  std::vector<std::vector<std::size_t>> fold_test(static_cast<std::size_t>(spec.k));
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int f = inner.fold_of(*train[i]);
    for (int g = 0; g < spec.k; ++g) (g == f ? fold_test : fold_train)[static_cast<std::size_t>(g)].push_back(i);
  }

  std::map<std::string, FeatureMatrix> designs;
  for (const auto& h : points) {
    if (!designs.contains(h.feature_set)) designs.emplace(h.feature_set, store.design_matrix(train, h.feature_set, spec.pooling));
  }

  GridSearchOutcome out;
  out.scores.assign(points.size(), 0.0);
  parallel_for(points.size(), options.threads, [&](std::size_t p) {
    const Hyperparameters& h = points[p];
    const FeatureMatrix& x = designs.at(h.feature_set);
    double total = 0.0;
    for (int f = 0; f < spec.k; ++f) {
      const auto& tr = fold_train[static_cast<std::size_t>(f)];
      const auto& te = fold_test[static_cast<std::size_t>(f)];
      const std::vector<int> y_tr = select(y, tr);
      const SvmMulticlassModel model = train_multiclass(select_rows(x, tr), y_tr, h.c, h.kernel, options.smo);
      std::vector<int> pred;
      pred.reserve(te.size());
      for (auto i : te) pred.push_back(model.predict(x.row(i)));
      total += uar(confusion(select(y, te), pred));
    }
    out.scores[p] = total / spec.k;
  });

  std::size_t best = 0;
  for (std::size_t p = 1; p < points.size(); ++p) {
    if (out.scores[p] > out.scores[best]) best = p;
  }
  out.best = points[best];
  out.best_uar = out.scores[best];
  return out;
}

std::vector<int> fit_and_predict(const SessionList& train, const SessionList& test, const Hyperparameters& h,
                                 const ExperimentSpec& spec, FeatureStore& store, const RunOptions& options) {
  const FeatureMatrix x = store.design_matrix(train, h.feature_set, spec.pooling);
  const SvmMulticlassModel model = train_multiclass(x, labels_of(train, spec.target), h.c, h.kernel, options.smo);
  std::vector<int> pred;
  pred.reserve(test.size());
  for (const auto* s : test) pred.push_back(model.predict(*store.pooled(*s, h.feature_set, spec.pooling)));
  return pred;
}

ExperimentResult run_within(const Corpus& corpus, const ExperimentSpec& spec_in, const HyperGrid& grid,
                            FeatureStore& store, const RunOptions& options) {
  ExperimentSpec spec = spec_in;
  if (spec.protocol != Protocol::Within) throw PreconditionError("run_within called with a non-within spec");
  if (spec.train_corpus.empty()) spec.train_corpus = corpus.corpus_id;
  if (spec.test_corpus.empty()) spec.test_corpus = spec.train_corpus;
  spec.validate();
  if (spec.train_corpus != corpus.corpus_id) {
    throw PreconditionError("spec names corpus \"" + spec.train_corpus + "\" but got \"" + corpus.corpus_id + "\"");
  }

  const Corpus* corpora[] = {&corpus};
  ExperimentResult result;
  result.spec = spec;
  result.grid = resolve_grid(grid, spec, corpora);
  result.corpora = {corpus.corpus_id};

  const SessionList sessions = sessions_or_throw(corpus, spec.test_id);
  const SplitPlan plan = make_split(sessions, spec.k, spec.seed, spec.target);
  for (int f = 0; f < spec.k; ++f) {
    result.folds.push_back(evaluate_fold(f, plan.train_part(sessions, f), plan.test_part(sessions, f), spec,
                                         result.grid, store, options, result.predictions));
  }
  finish(result);
  return result;
}

ExperimentResult run_cross(const Corpus& train, const Corpus& test, const ExperimentSpec& spec_in,
                           const HyperGrid& grid, FeatureStore& store, const RunOptions& options) {
  ExperimentSpec spec = spec_in;
  if (spec.protocol != Protocol::Cross) throw PreconditionError("run_cross called with a non-cross spec");
  if (spec.train_corpus.empty()) spec.train_corpus = train.corpus_id;
  if (spec.test_corpus.empty()) spec.test_corpus = test.corpus_id;
  spec.validate();
  if (spec.train_corpus != train.corpus_id || spec.test_corpus != test.corpus_id) {
    throw PreconditionError("spec corpora do not match the corpora passed in");
  }

  const Corpus* corpora[] = {&train, &test};
  ExperimentResult result;
  result.spec = spec;
  result.grid = resolve_grid(grid, spec, corpora);
  result.corpora = {train.corpus_id, test.corpus_id};

  result.folds.push_back(evaluate_fold(0, sessions_or_throw(train, spec.test_id),
                                       sessions_or_throw(test, spec.test_id), spec, result.grid, store, options,
                                       result.predictions));
  finish(result);
  return result;
}

ExperimentResult run_mixed(const Corpus& a, const Corpus& b, const ExperimentSpec& spec_in, const HyperGrid& grid,
                           FeatureStore& store, const RunOptions& options) {
  ExperimentSpec spec = spec_in;
  if (spec.protocol != Protocol::Mixed) throw PreconditionError("run_mixed called with a non-mixed spec");
  if (spec.train_corpus.empty()) spec.train_corpus = a.corpus_id;
  if (spec.test_corpus.empty()) spec.test_corpus = b.corpus_id;
  spec.validate();
  if (spec.train_corpus != a.corpus_id || spec.test_corpus != b.corpus_id) {
    throw PreconditionError("spec corpora do not match the corpora passed in");
  }

  const Corpus* corpora[] = {&a, &b};
  ExperimentResult result;
  result.spec = spec;
  result.grid = resolve_grid(grid, spec, corpora);
  result.corpora = {a.corpus_id, b.corpus_id};

  const SessionList sa = sessions_or_throw(a, spec.test_id);
  const SessionList sb = sessions_or_throw(b, spec.test_id);
  const SplitPlan plan_a = make_split(sa, spec.k, spec.seed, spec.target);
  const SplitPlan plan_b = make_split(sb, spec.k, spec.seed + 1, spec.target);
  for (int f = 0; f < spec.k; ++f) {
    SessionList train = plan_a.train_part(sa, f);
    SessionList test = plan_a.test_part(sa, f);
    const SessionList train_b = plan_b.train_part(sb, f);
    const SessionList test_b = plan_b.test_part(sb, f);
    train.insert(train.end(), train_b.begin(), train_b.end());
    test.insert(test.end(), test_b.begin(), test_b.end());
    result.folds.push_back(evaluate_fold(f, train, test, spec, result.grid, store, options, result.predictions));
  }
  finish(result);
  return result;
}

}  // namespace cogeval
