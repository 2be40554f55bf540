#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cogeval/analysis.hpp"
#include "cogeval/errors.hpp"
#include "cogeval/json_io.hpp"
#include "cogeval/protocol.hpp"
#include "cogeval/report.hpp"
#include "cogeval/synth.hpp"
#include "cogeval/version.hpp"

namespace cogeval::cli {

namespace {

namespace fs = std::filesystem;

// Flag combinations that parse but make no sense together.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kCognitiveNames[3] = {"HC", "MCI", "DEM"};
constexpr const char* kDepressionNames[3] = {"none", "mild", "severe"};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed3(std::optional<double> v) {
  if (!v) return "unavailable";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void print_matrix(std::ostream& out, const ConfusionMatrix& m, const char* const* row_names,
                  const char* const* col_names, const std::string& corner) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-10s", corner.c_str());
  out << buf;
  for (int c = 0; c < 3; ++c) {
    std::snprintf(buf, sizeof buf, "%8s", col_names[c]);
    out << buf;
  }
  out << '\n';
  for (int r = 0; r < 3; ++r) {
    std::snprintf(buf, sizeof buf, "%-10s", row_names[r]);
    out << buf;
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof buf, "%8lld", static_cast<long long>(m.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]));
      out << buf;
    }
    out << '\n';
  }
}

// --- validate ------------------------------------------------------------

struct ValidateArgs {
  std::vector<std::string> manifests;
  bool shallow = false;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  LoadOptions opts;
  opts.parse_features = !a.shallow;
  for (const auto& path : a.manifests) {
    const Corpus c = load_manifest(path, opts);
    out << "corpus " << c.corpus_id << " (" << path << "): " << c.sessions.size() << " sessions\n";
    out << "  feature sets:";
    for (const auto& f : c.feature_sets) out << ' ' << f;
    out << '\n';
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-10s %6s %6s %6s %6s\n", "test", "HC", "MCI", "DEM", "total");
    out << buf;
    for (const auto& test : c.test_ids()) {
      const auto sessions = c.sessions_for_test(test);
      const ClassCounts n = class_counts(sessions, Label::Cognitive);
      std::snprintf(buf, sizeof buf, "  %-10s %6zu %6zu %6zu %6zu\n", test.c_str(), n[0], n[1], n[2], sessions.size());
      out << buf;
    }
  }
  return kExitOk;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string protocol;
  std::vector<std::string> manifests;
  std::vector<std::string> corpus;
  std::string train;
  std::string test_corpus;
  std::string test_id;
  std::string features;
  std::string target = "cognitive";
  std::string pooling = "mean";
  int k = 5;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<std::string> kernels;
  std::vector<double> c_values;
  std::vector<double> gamma_values;
  std::vector<int> layers;
  std::string out_dir;
  std::string name;
  bool disk_cache = false;
  bool quiet = false;
};

ExperimentSpec build_spec(const EvalArgs& a, std::vector<std::string>& corpus_ids) {
  ExperimentSpec spec;
  spec.protocol = parse_protocol(a.protocol);
  spec.test_id = a.test_id;
  spec.feature_family = a.features;
  spec.target = parse_label(a.target);
  spec.pooling = parse_pooling(a.pooling);
  spec.k = a.k;
  spec.seed = a.seed;

  const bool pair_flags = !a.train.empty() || !a.test_corpus.empty();
  switch (spec.protocol) {
    case Protocol::Within:
      if (pair_flags) throw UsageError("--train/--test-corpus are not used with --protocol within; use --corpus");
      if (a.corpus.size() > 1) throw UsageError("--protocol within takes one --corpus");
      corpus_ids = a.corpus;
      break;
    case Protocol::Cross:
      if (!a.corpus.empty()) throw UsageError("--protocol cross takes --train and --test-corpus, not --corpus");
      if (a.train.empty() || a.test_corpus.empty()) throw UsageError("--protocol cross needs --train and --test-corpus");
      corpus_ids = {a.train, a.test_corpus};
      break;
    case Protocol::Mixed:
      if (pair_flags && !a.corpus.empty()) throw UsageError("give the two corpora either as --corpus A --corpus B or as --train/--test-corpus");
      corpus_ids = pair_flags ? std::vector<std::string>{a.train, a.test_corpus} : a.corpus;
      if (corpus_ids.size() != 2 || corpus_ids[0].empty() || corpus_ids[1].empty()) {
        throw UsageError("--protocol mixed needs two corpora");
      }
      break;
  }
  if (corpus_ids.size() == 2) {
    spec.train_corpus = corpus_ids[0];
    spec.test_corpus = corpus_ids[1];
  } else if (corpus_ids.size() == 1) {
    spec.train_corpus = spec.test_corpus = corpus_ids[0];
  }
  spec.validate();
  return spec;
}

HyperGrid build_grid(const EvalArgs& a) {
  HyperGrid grid;
  if (!a.kernels.empty()) {
    grid.kernels.clear();
    for (const auto& k : a.kernels) grid.kernels.push_back(parse_kernel(k));
  }
  if (!a.c_values.empty()) grid.c_values = a.c_values;
  if (!a.gamma_values.empty()) grid.gamma_values = a.gamma_values;
  grid.layers = a.layers;
  return grid;
}

std::string default_name(const ExperimentSpec& s) {
  std::string corpora = s.protocol == Protocol::Within ? s.train_corpus : s.train_corpus + "-" + s.test_corpus;
  return std::string(to_string(s.protocol)) + "_" + corpora + "_" + s.test_id + "_" + s.feature_family + "_" +
         std::string(to_string(s.target)) + "_s" + std::to_string(s.seed);
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("COGEVAL_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  std::vector<std::string> ids;
  ExperimentSpec spec;
  HyperGrid grid;
  try {
    spec = build_spec(a, ids);
    grid = build_grid(a);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  std::map<std::string, Corpus> corpora;
  for (const auto& path : a.manifests) {
    Corpus c = load_manifest(path);
    const std::string id = c.corpus_id;
    if (!corpora.emplace(id, std::move(c)).second) throw ValidationError("corpus \"" + id + "\" loaded twice");
  }
  if (ids.empty()) {
    if (corpora.size() != 1) throw UsageError("several manifests given; select one with --corpus");
    ids = {corpora.begin()->first};
    spec.train_corpus = spec.test_corpus = ids[0];
  }
  const auto get = [&](const std::string& id) -> const Corpus& {
    const auto it = corpora.find(id);
    if (it == corpora.end()) throw ValidationError("corpus \"" + id + "\" not found in the given manifests");
    return it->second;
  };

  FeatureStore::Options store_opts;
  store_opts.disk_cache = a.disk_cache;
  FeatureStore store(store_opts);
  RunOptions run;
  run.threads = a.threads;

  ExperimentResult result;
  switch (spec.protocol) {
    case Protocol::Within: result = run_within(get(ids[0]), spec, grid, store, run); break;
    case Protocol::Cross: result = run_cross(get(ids[0]), get(ids[1]), spec, grid, store, run); break;
    case Protocol::Mixed: result = run_mixed(get(ids[0]), get(ids[1]), spec, grid, store, run); break;
  }

  const fs::path dir = output_dir(a.out_dir);
  fs::create_directories(dir);
  const std::string name = a.name.empty() ? default_name(result.spec) : a.name;
  const fs::path json_path = dir / (name + ".json");
  const fs::path text_path = dir / (name + ".txt");
  write_text_file(json_path, to_json(result, utc_timestamp()).dump(2) + "\n");
  const std::vector<ExperimentResult> one{result};
  write_text_file(text_path, render_text(format_report(one)));

  if (!a.quiet) {
    for (const auto& f : result.folds) {
      out << "fold " << f.fold << ": UAR " << format_percent(f.uar) << "  (" << describe(f.chosen) << ", inner "
          << format_percent(f.inner_uar) << ", n_train " << f.n_train << ", n_test " << f.n_test << ")\n";
    }
  }
  out << to_string(result.spec.protocol) << ' ' << result.spec.train_corpus << " -> " << result.spec.test_corpus
      << ' ' << result.spec.test_id << ' ' << result.spec.feature_family << ": UAR "
      << format_cell(result.mean_uar, result.std_uar) << '\n';
  out << "wrote " << json_path.string() << '\n' << "wrote " << text_path.string() << '\n';
  return kExitOk;
}

// --- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  std::string mode;
  std::string manifest;
  std::string result;
  std::string test_id;
  std::string format = "text";
};

// Sessions of `corpus` for the result's test that carry a prediction.
SessionList predicted_sessions(const ExperimentResult& r, const Corpus& corpus) {
  SessionList out;
  for (const auto* s : corpus.sessions_for_test(r.spec.test_id)) {
    if (r.predictions.contains(s->session_id)) out.push_back(s);
  }
  if (out.empty()) {
    throw ValidationError("result has no predictions for sessions of corpus \"" + corpus.corpus_id + "\", test \"" +
                          r.spec.test_id + "\"");
  }
  return out;
}

void print_overlap(std::ostream& out, const OverlapTable& t) {
  out << "per cell (shared, fraction of co-occurrence cell), rows = cognitive, columns = depression\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-6s", "");
  out << buf;
  for (const auto* c : kDepressionNames) {
    std::snprintf(buf, sizeof buf, "%16s", c);
    out << buf;
  }
  out << '\n';
  for (std::size_t r = 0; r < 3; ++r) {
    std::snprintf(buf, sizeof buf, "%-6s", kCognitiveNames[r]);
    out << buf;
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& cell = t[r][c];
      const std::string frac = cell.fraction ? fixed3(cell.fraction) : "-";
      const std::string text = "(" + std::to_string(cell.shared) + ", " + frac + ")";
      std::snprintf(buf, sizeof buf, "%16s", text.c_str());
      out << buf;
    }
    out << '\n';
  }
  out << "fraction of the predicted cell:\n";
  for (std::size_t r = 0; r < 3; ++r) {
    std::snprintf(buf, sizeof buf, "%-6s", kCognitiveNames[r]);
    out << buf;
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& cell = t[r][c];
      std::snprintf(buf, sizeof buf, "%16s", cell.fraction_of_other ? fixed3(cell.fraction_of_other).c_str() : "-");
      out << buf;
    }
    out << '\n';
  }
}

void print_partition(std::ostream& out, const char* title, const PartitionStats& p) {
  out << title << ": " << p.sessions.size() << " session(s)\n"
      << "  with depression:      " << fixed3(p.depressed_fraction) << '\n'
      << "  test score above mean: " << fixed3(p.above_mean_fraction) << '\n'
      << "  test score below mean: " << fixed3(p.below_mean_fraction) << '\n';
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.mode != "cooccur" && a.result.empty()) throw UsageError("--mode " + a.mode + " needs --result");
  const Corpus corpus = load_manifest(a.manifest);
  const bool as_json = a.format == "json";

  if (a.mode == "cooccur") {
    SessionList sessions;
    for (const auto& s : corpus.sessions) {
      if (a.test_id.empty() || s.test_id == a.test_id) sessions.push_back(&s);
    }
    const CellAssignment co = cooccurrence(sessions);
    if (as_json) {
      out << json{{"mode", a.mode}, {"corpus", corpus.corpus_id}, {"cooccurrence", to_json(co)}}.dump(2) << '\n';
    } else {
      out << "co-occurrence, corpus " << corpus.corpus_id << (a.test_id.empty() ? "" : ", test " + a.test_id) << '\n';
      print_matrix(out, co.counts, kCognitiveNames, kDepressionNames, "cog\\dep");
    }
    return kExitOk;
  }

  const ExperimentResult result = result_from_json(read_json_file(a.result));
  if (!a.test_id.empty() && a.test_id != result.spec.test_id) {
    throw UsageError("--test " + a.test_id + " does not match the result's test " + result.spec.test_id);
  }

  if (a.mode == "breakdown") {
    const Breakdown b = misclassification_breakdown(result, corpus);
    for (const auto& w : b.warnings) err << "warning: " << w << '\n';
    if (as_json) {
      out << json{{"mode", a.mode}, {"corpus", corpus.corpus_id}, {"breakdown", to_json(b)}}.dump(2) << '\n';
    } else {
      out << "misclassification breakdown, corpus " << corpus.corpus_id << ", test " << result.spec.test_id << '\n'
          << "analyzed " << b.analyzed << ", misclassified " << b.errors << ", test score mean "
          << fixed3(b.score_mean) << '\n';
      print_partition(out, "under-classified (predicted < truth)", b.under);
      print_partition(out, "over-classified (predicted > truth)", b.over);
    }
    return kExitOk;
  }

  const SessionList sessions = predicted_sessions(result, corpus);
  // Requires depression on every analyzed session; the error lists offenders.
  const CellAssignment co = cooccurrence(sessions);
  const CellAssignment cross = cross_label_confusion(result.predictions, sessions, Label::Depression);

  if (a.mode == "cross-label") {
    if (as_json) {
      out << json{{"mode", a.mode}, {"corpus", corpus.corpus_id}, {"cross_label", to_json(cross)}}.dump(2) << '\n';
    } else {
      out << "predicted cognitive class against depression, corpus " << corpus.corpus_id << '\n';
      print_matrix(out, cross.counts, kDepressionNames, kCognitiveNames, "dep\\pred");
    }
    return kExitOk;
  }

  const OverlapTable table = cell_overlap(co, cross.transposed());
  if (as_json) {
    out << json{{"mode", a.mode},
                {"corpus", corpus.corpus_id},
                {"cooccurrence", to_json(co)},
                {"cross_label", to_json(cross)},
                {"overlap", to_json(table)}}
               .dump(2)
        << '\n';
  } else {
    out << "co-occurrence (reference), corpus " << corpus.corpus_id << '\n';
    print_matrix(out, co.counts, kCognitiveNames, kDepressionNames, "cog\\dep");
    out << "predicted cognitive class against depression\n";
    print_matrix(out, cross.counts.transposed(), kCognitiveNames, kDepressionNames, "pred\\dep");
    print_overlap(out, table);
  }
  return kExitOk;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  SynthSpec spec;
  std::vector<int> speakers;
  std::vector<std::size_t> frames;
  std::vector<double> cooccurrence;
  std::optional<int> informative_layer;
  bool test_scores = false;
  std::optional<std::uint64_t> permute_seed;
};

int cmd_synth(SynthArgs a, std::ostream& out) {
  if (!a.speakers.empty()) {
    if (a.speakers.size() != 3) throw UsageError("--speakers takes three counts (HC MCI DEM)");
    a.spec.speakers_per_class = {a.speakers[0], a.speakers[1], a.speakers[2]};
  }
  if (!a.frames.empty()) {
    if (a.frames.size() != 2) throw UsageError("--frames takes MIN MAX");
    a.spec.min_frames = a.frames[0];
    a.spec.max_frames = a.frames[1];
  }
  if (!a.cooccurrence.empty()) {
    if (a.cooccurrence.size() != 9) throw UsageError("--cooccurrence takes nine probabilities, row-major");
    std::array<std::array<double, 3>, 3> t{};
    for (std::size_t i = 0; i < 9; ++i) t[i / 3][i % 3] = a.cooccurrence[i];
    a.spec.cooccurrence_target = t;
  }
  a.spec.informative_layer = a.informative_layer;
  if (a.test_scores) a.spec.test_score = TestScoreModel{};
  try {
    a.spec.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  Corpus c = generate(a.spec, a.out_dir);
  if (a.permute_seed) {
    c = permute_labels(c, *a.permute_seed);
    write_manifest(c, fs::path(a.out_dir) / "manifest.jsonl");
  }
  out << "wrote " << (fs::path(a.out_dir) / "manifest.jsonl").string() << " (" << c.sessions.size()
      << " sessions, corpus " << c.corpus_id << ")\n";
  return kExitOk;
}

// --- report --------------------------------------------------------------

int cmd_report(const std::vector<std::string>& files, const std::string& format, std::ostream& out) {
  std::vector<ExperimentResult> results;
  for (const auto& f : files) results.push_back(result_from_json(read_json_file(f)));
  const Report rep = format_report(results);
  if (format == "json") {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << render_text(rep);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-corpus evaluation of HC/MCI/DEM classifiers on precomputed embeddings", "cogeval"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Load manifests and print class counts");
  validate->add_option("manifest", va.manifests, "Manifest file(s)")->required()->check(CLI::ExistingFile);
  validate->add_flag("--no-parse", va.shallow, "Only check that feature files exist");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Run a within, cross or mixed-corpus experiment");
  eval->add_option("--protocol", ea.protocol, "within | cross | mixed")
      ->required()
      ->check(CLI::IsMember({"within", "cross", "mixed"}));
  eval->add_option("-m,--manifest", ea.manifests, "Corpus manifest (repeatable)")->required()->check(CLI::ExistingFile);
  eval->add_option("--corpus", ea.corpus, "Corpus id (within: one; mixed: two)");
  eval->add_option("--train", ea.train, "Training corpus id (cross, mixed)");
  eval->add_option("--test-corpus", ea.test_corpus, "Test corpus id (cross, mixed)");
  eval->add_option("--test", ea.test_id, "Cognitive test id, e.g. sVFT")->required();
  eval->add_option("--features", ea.features, "Feature family, e.g. w2v2")->required();
  eval->add_option("--target", ea.target, "cognitive | depression")
      ->check(CLI::IsMember({"cognitive", "depression"}))
      ->capture_default_str();
  eval->add_option("--pooling", ea.pooling, "mean | sum")->check(CLI::IsMember({"mean", "sum"}))->capture_default_str();
  eval->add_option("-k,--folds", ea.k, "Folds")->check(CLI::Range(2, 1000))->capture_default_str();
  eval->add_option("--seed", ea.seed, "Outer split seed")->capture_default_str();
  eval->add_option("--threads", ea.threads, "Worker threads (0 = all cores)")->capture_default_str();
  eval->add_option("--kernels", ea.kernels, "Grid kernels")->check(CLI::IsMember({"linear", "rbf"}))->delimiter(',');
  eval->add_option("--C", ea.c_values, "Grid C values")->check(CLI::PositiveNumber)->delimiter(',');
  eval->add_option("--gamma", ea.gamma_values, "Grid gamma values")->check(CLI::PositiveNumber)->delimiter(',');
  eval->add_option("--layers", ea.layers, "Grid layers (default: all found)")->check(CLI::PositiveNumber)->delimiter(',');
  eval->add_option("-o,--out", ea.out_dir, "Output directory (default $COGEVAL_OUT_DIR or .)");
  eval->add_option("--name", ea.name, "Output file stem");
  eval->add_flag("--disk-cache", ea.disk_cache, "Cache pooled vectors next to the feature files");
  eval->add_flag("-q,--quiet", ea.quiet, "Only print the summary line");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Co-occurrence, cross-label, overlap and error breakdown");
  analyze->add_option("--mode", aa.mode, "cooccur | cross-label | overlap | breakdown")
      ->required()
      ->check(CLI::IsMember({"cooccur", "cross-label", "overlap", "breakdown"}));
  analyze->add_option("-m,--manifest", aa.manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  analyze->add_option("-r,--result", aa.result, "Result JSON written by eval")->check(CLI::ExistingFile);
  analyze->add_option("--test", aa.test_id, "Restrict to one cognitive test");
  analyze->add_option("--format", aa.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("-o,--out", sa.out_dir, "Output directory")->required();
  synth->add_option("--corpus-id", sa.spec.corpus_id)->capture_default_str();
  synth->add_option("--seed", sa.spec.seed)->capture_default_str();
  synth->add_option("--speakers", sa.speakers, "Speakers per class: HC MCI DEM")->delimiter(',');
  synth->add_option("--dim", sa.spec.dim)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--frames", sa.frames, "Frame range: MIN MAX")->delimiter(',');
  synth->add_option("--separation", sa.spec.separation, "Class-mean distance in noise sd")->capture_default_str();
  synth->add_option("--shift", sa.spec.corpus_shift, "Corpus offset length")->capture_default_str();
  synth->add_option("--tests", sa.spec.test_ids, "Test ids")->delimiter(',');
  synth->add_option("--family", sa.spec.feature_family)->capture_default_str();
  synth->add_option("--layers", sa.spec.layers, "Emit <family>.L01.. layered sets")->capture_default_str();
  synth->add_option("--informative-layer", sa.informative_layer, "Only this layer carries class signal");
  synth->add_option("--cooccurrence", sa.cooccurrence, "Nine joint (cognitive, depression) probabilities")
      ->delimiter(',');
  synth->add_flag("--test-scores", sa.test_scores, "Attach test scores");
  synth->add_option("--permute-labels", sa.permute_seed, "Shuffle cognitive labels with this seed");

  std::vector<std::string> report_files;
  std::string report_format = "text";
  auto* report = app.add_subcommand("report", "Tabulate result JSON files");
  report->add_option("result", report_files, "Result JSON file(s)")->required()->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  if (argc <= 1) {
    err << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(va, out);
    if (*eval) return cmd_eval(ea, out);
    if (*analyze) return cmd_analyze(aa, out, err);
    if (*synth) return cmd_synth(sa, out);
    if (*report) return cmd_report(report_files, report_format, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace cogeval::cli
