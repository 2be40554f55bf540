#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cogeval/analysis.hpp"
#include "cogeval/json_io.hpp"
#include "cogeval/synth.hpp"
#include "temp_dir.hpp"

namespace cogeval {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "cogeval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const std::filesystem::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

SynthSpec small(const std::string& id, std::uint64_t seed) {
  SynthSpec s;
  s.corpus_id = id;
  s.seed = seed;
  s.speakers_per_class = {8, 8, 8};
  s.dim = 8;
  return s;
}

class CliTest : public ::testing::Test {
 protected:
  std::string manifest(const std::string& sub) const { return (dir_ / sub / "manifest.jsonl").string(); }
  std::string out_dir() const { return (dir_ / "out").string(); }
  testing::TempDir dir_;
};

TEST_F(CliTest, NoArgumentsIsUsageError) {
  const CliRun r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("validate"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(CliTest, ValidatePrintsCounts) {
  generate(small("A", 1), dir_ / "a");
  const CliRun r = run({"validate", manifest("a")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sVFT"), std::string::npos);
  EXPECT_NE(r.out.find("      8      8      8     24"), std::string::npos) << r.out;
}

TEST_F(CliTest, ValidateNamesMissingFeatureFile) {
  const Corpus c = generate(small("A", 1), dir_ / "a");
  const auto victim = c.sessions[5].features.at("emb");
  std::filesystem::remove(victim);
  const CliRun r = run({"validate", manifest("a")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(victim.filename().string()), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalWithinWritesReport) {
  generate(small("A", 1), dir_ / "a");
  const CliRun r = run({"eval", "--protocol", "within", "-m", manifest("a"), "--corpus", "A", "--test", "sVFT",
                     "--features", "emb", "--seed", "7", "--out", out_dir(), "--name", "w"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = read_json(dir_ / "out" / "w.json");
  EXPECT_GE(j.at("mean_uar").get<double>(), 0.95);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("folds").size(), 5u);
  EXPECT_TRUE(j.contains("generated_at"));
  EXPECT_TRUE(j.at("folds")[0].contains("chosen"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / "w.txt"));
  EXPECT_NE(r.out.find("±"), std::string::npos);
}

TEST_F(CliTest, EvalIsReproducibleModuloTimestamp) {
  generate(small("A", 1), dir_ / "a");
  for (const char* name : {"r1", "r2"}) {
    ASSERT_EQ(run({"eval", "--protocol", "within", "-m", manifest("a"), "--test", "sVFT", "--features", "emb",
                   "--out", out_dir(), "--name", name, "-q"})
                  .code,
              0);
  }
  json a = read_json(dir_ / "out" / "r1.json");
  json b = read_json(dir_ / "out" / "r2.json");
  a.erase("generated_at");
  b.erase("generated_at");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(CliTest, EvalCrossHasNoSpread) {
  generate(small("A", 1), dir_ / "a");
  generate(small("B", 2), dir_ / "b");
  const CliRun r = run({"eval", "--protocol", "cross", "-m", manifest("a"), "-m", manifest("b"), "--train", "A",
                     "--test-corpus", "B", "--test", "sVFT", "--features", "emb", "--out", out_dir(), "--name", "x"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("±"), std::string::npos) << r.out;
  const json j = read_json(dir_ / "out" / "x.json");
  EXPECT_TRUE(j.at("std_uar").is_null());
  EXPECT_EQ(j.at("corpora"), json::array({"A", "B"}));
}

TEST_F(CliTest, EvalGuards) {
  generate(small("A", 1), dir_ / "a");
  auto with = [&](std::vector<std::string> extra, std::string test = "sVFT", std::string features = "emb") {
    std::vector<std::string> args{"eval", "-m", manifest("a"), "--test", test, "--features", features, "--out", out_dir()};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  EXPECT_EQ(with({"--protocol", "cross", "--train", "A", "--test-corpus", "A"}).code, 2);
  EXPECT_EQ(with({"--protocol", "loso"}).code, 2);
  EXPECT_EQ(with({"--protocol", "cross", "--train", "A"}).code, 2);
  EXPECT_EQ(with({"--protocol", "within", "--train", "A"}).code, 2);
  EXPECT_EQ(with({"--protocol", "mixed", "--corpus", "A"}).code, 2);
  EXPECT_EQ(with({"--protocol", "within", "-k", "1"}).code, 2);
  EXPECT_EQ(with({"--protocol", "within", "--corpus", "Z"}).code, 1);
  EXPECT_EQ(with({"--protocol", "within"}, "BNT").code, 1);
  EXPECT_EQ(with({"--protocol", "within"}, "sVFT", "bert").code, 1);
  EXPECT_EQ(run({"eval", "--protocol", "within", "--test", "sVFT"}).code, 2);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  generate(small("A", 1), dir_ / "a");
  const std::string env_dir = (dir_ / "env").string();
  ::setenv("COGEVAL_OUT_DIR", env_dir.c_str(), 1);
  const CliRun r = run({"eval", "--protocol", "within", "-m", manifest("a"), "--test", "sVFT", "--features", "emb",
                     "--name", "e", "-q"});
  ::unsetenv("COGEVAL_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "env" / "e.json"));
}

// Corpus with the co-occurrence table 20 5 4 / 15 17 16 / 57 14 12.
Corpus table_corpus(const std::filesystem::path& dir, bool scores) {
  SynthSpec s;
  s.corpus_id = "NSC";
  s.speakers_per_class = {29, 48, 83};
  s.dim = 2;
  s.min_frames = 2;
  s.max_frames = 3;
  s.cooccurrence_target = std::array<std::array<double, 3>, 3>{
      {{20 / 160.0, 5 / 160.0, 4 / 160.0}, {15 / 160.0, 17 / 160.0, 16 / 160.0}, {57 / 160.0, 14 / 160.0, 12 / 160.0}}};
  if (scores) s.test_score = TestScoreModel{};
  return generate(s, dir);
}

std::string write_result(const std::filesystem::path& path, const std::map<std::string, int>& predictions) {
  ExperimentResult r;
  r.spec.test_id = "sVFT";
  r.spec.feature_family = "emb";
  r.spec.train_corpus = r.spec.test_corpus = "NSC";
  r.corpora = {"NSC"};
  r.predictions = predictions;
  std::ofstream(path) << to_json(r).dump();
  return path.string();
}

TEST_F(CliTest, AnalyzeCooccurrenceAndIdentityCrossLabel) {
  const Corpus c = table_corpus(dir_ / "nsc", false);
  CliRun r = run({"analyze", "--mode", "cooccur", "-m", manifest("nsc")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("DEM             57      14      12"), std::string::npos) << r.out;

  std::map<std::string, int> identity;
  for (const auto& s : c.sessions) identity[s.session_id] = s.cognitive;
  const auto result = write_result(dir_ / "id.json", identity);
  r = run({"analyze", "--mode", "cross-label", "-m", manifest("nsc"), "-r", result, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(confusion_from_json(j.at("cross_label").at("counts")), cooccurrence(c).counts.transposed());
}

TEST_F(CliTest, AnalyzeOverlapReportsPlantedCell) {
  const Corpus c = table_corpus(dir_ / "nsc", false);
  std::map<std::string, int> pred;
  for (const auto& s : c.sessions) pred[s.session_id] = s.cognitive;
  const auto dem_none = cooccurrence(c).members(2, 0);
  for (std::size_t i = 46; i < dem_none.size(); ++i) pred[dem_none[i]] = 1;
  const auto result = write_result(dir_ / "p.json", pred);
  const CliRun r = run({"analyze", "--mode", "overlap", "-m", manifest("nsc"), "-r", result});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(46, 0.807)"), std::string::npos) << r.out;
}

TEST_F(CliTest, AnalyzeMissingDepressionListsSessions) {
  const Corpus c = generate(small("NSC", 3), dir_ / "nsc");
  std::map<std::string, int> pred;
  for (const auto& s : c.sessions) pred[s.session_id] = s.cognitive;
  const auto result = write_result(dir_ / "p.json", pred);
  const CliRun r = run({"analyze", "--mode", "cross-label", "-m", manifest("nsc"), "-r", result});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(c.sessions[0].session_id), std::string::npos) << r.err;
  EXPECT_EQ(run({"analyze", "--mode", "overlap", "-m", manifest("nsc")}).code, 2);
}

TEST_F(CliTest, BreakdownWithoutScores) {
  const Corpus c = table_corpus(dir_ / "nsc", false);
  std::map<std::string, int> pred;
  for (const auto& s : c.sessions) pred[s.session_id] = s.cognitive;
  pred[cooccurrence(c).members(2, 1).front()] = 0;
  const auto result = write_result(dir_ / "p.json", pred);
  const CliRun r = run({"analyze", "--mode", "breakdown", "-m", manifest("nsc"), "-r", result});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("with depression:      1.000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("test score above mean: unavailable"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, SynthAndReport) {
  CliRun r = run({"synth", "-o", (dir_ / "s").string(), "--corpus-id", "S", "--speakers", "10,10,10", "--dim", "4",
               "--permute-labels", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"validate", manifest("s")}).code, 0);
  EXPECT_EQ(run({"synth", "-o", (dir_ / "t").string(), "--speakers", "6,6"}).code, 2);
  EXPECT_EQ(run({"synth", "-o", (dir_ / "t").string(), "--separation", "-1"}).code, 2);

  ASSERT_EQ(run({"eval", "--protocol", "within", "-m", manifest("s"), "--test", "sVFT", "--features", "emb",
                 "--out", out_dir(), "--name", "s", "-q", "--kernels", "linear", "--C", "1"})
                .code,
            0);
  r = run({"report", (dir_ / "out" / "s.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("train  test |  emb", 0), 0u) << r.out;
}

}  // namespace
}  // namespace cogeval
