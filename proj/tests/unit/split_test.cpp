#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "cogeval/errors.hpp"
#include "cogeval/protocol.hpp"
#include "fixtures.hpp"

namespace cogeval {
namespace {

using testing::all_sessions;
using testing::label_corpus;

std::array<std::array<int, 3>, 5> per_fold_counts(const Corpus& c, const SplitPlan& plan) {
  std::array<std::array<int, 3>, 5> counts{};
  for (const auto& s : c.sessions) ++counts[static_cast<std::size_t>(plan.fold_of(s))][static_cast<std::size_t>(s.cognitive)];
  return counts;
}

TEST(Split, NscShapedFoldsAreStratified) {
  const Corpus c = label_corpus({29, 48, 83});
  const SplitPlan plan = make_split(c, "sVFT", 5, 42, Label::Cognitive);
  EXPECT_EQ(plan.assignment.size(), 160u);
  for (const auto& fold : per_fold_counts(c, plan)) {
    EXPECT_TRUE(fold[0] == 5 || fold[0] == 6) << fold[0];
    EXPECT_TRUE(fold[1] == 9 || fold[1] == 10) << fold[1];
    EXPECT_TRUE(fold[2] == 16 || fold[2] == 17) << fold[2];
  }
}

TEST(Split, DeterministicPerSeed) {
  const Corpus c = label_corpus({29, 48, 83});
  EXPECT_EQ(make_split(c, "sVFT", 5, 7, Label::Cognitive).assignment,
            make_split(c, "sVFT", 5, 7, Label::Cognitive).assignment);
  EXPECT_NE(make_split(c, "sVFT", 5, 7, Label::Cognitive).assignment,
            make_split(c, "sVFT", 5, 8, Label::Cognitive).assignment);
}

TEST(Split, IndependentOfInputOrder) {
  const Corpus c = label_corpus({10, 12, 14});
  SessionList forward = all_sessions(c);
  SessionList backward(forward.rbegin(), forward.rend());
  EXPECT_EQ(make_split(forward, 5, 3, Label::Cognitive).assignment,
            make_split(backward, 5, 3, Label::Cognitive).assignment);
}

TEST(Split, TooFewSpeakersInAClass) {
  EXPECT_THROW(make_split(label_corpus({3, 10, 10}), "sVFT", 5, 1, Label::Cognitive), PreconditionError);
}

TEST(Split, AbsentClassAllowed) {
  const SplitPlan plan = make_split(label_corpus({0, 10, 10}), "sVFT", 5, 1, Label::Cognitive);
  EXPECT_EQ(plan.assignment.size(), 20u);
}

TEST(Split, BadArguments) {
  const Corpus c = label_corpus({5, 5, 5});
  EXPECT_THROW(make_split(c, "sVFT", 1, 1, Label::Cognitive), PreconditionError);
  EXPECT_THROW(make_split(c, "BNT", 5, 1, Label::Cognitive), PreconditionError);
}

TEST(Split, SessionsOfOneSpeakerStayTogether) {
  Corpus c = label_corpus({10, 10, 10});
  const std::size_t n = c.sessions.size();
  for (std::size_t i = 0; i < n; ++i) {
    SessionRecord extra = c.sessions[i];
    extra.session_id += "-bis";
    c.sessions.push_back(extra);
  }
  const SessionList sessions = all_sessions(c);
  const SplitPlan plan = make_split(sessions, 5, 9, Label::Cognitive);
  EXPECT_EQ(plan.assignment.size(), 30u);
  for (int fold = 0; fold < 5; ++fold) {
    std::set<std::string> train, test;
    for (const auto* s : plan.train_part(sessions, fold)) train.insert(s->speaker_id);
    for (const auto* s : plan.test_part(sessions, fold)) test.insert(s->speaker_id);
    for (const auto& sp : test) EXPECT_EQ(train.count(sp), 0u);
    EXPECT_EQ(plan.train_part(sessions, fold).size() + plan.test_part(sessions, fold).size(), sessions.size());
  }
}

TEST(Split, ConflictingSpeakerLabelsRejected) {
  Corpus c = label_corpus({5, 5, 5});
  SessionRecord extra = c.sessions[0];
  extra.session_id = "dup";
  extra.cognitive = 2;
  c.sessions.push_back(extra);
  EXPECT_THROW(make_split(all_sessions(c), 5, 1, Label::Cognitive), ValidationError);
}

TEST(Split, MissingTargetLabelRejected) {
  const Corpus c = label_corpus({5, 5, 5});
  EXPECT_THROW(make_split(all_sessions(c), 5, 1, Label::Depression), ValidationError);
}

TEST(Split, SpeakerIdsScopedByCorpus) {
  const Corpus a = label_corpus({5, 5, 5}, "A");
  const Corpus b = label_corpus({5, 5, 5}, "B");
  SessionList both = all_sessions(a);
  for (const auto* s : all_sessions(b)) both.push_back(s);
  EXPECT_EQ(make_split(both, 5, 1, Label::Cognitive).assignment.size(), 30u);
}

TEST(Split, FoldMembershipIsUniformOverSeeds) {
  const Corpus c = label_corpus({29, 48, 83});
  std::map<std::string, std::array<int, 5>> hits;
  const int seeds = 2000;
  for (int seed = 0; seed < seeds; ++seed) {
    const SplitPlan plan = make_split(c, "sVFT", 5, static_cast<std::uint64_t>(seed), Label::Cognitive);
    for (const auto& [key, fold] : plan.assignment) ++hits[key.speaker_id][static_cast<std::size_t>(fold)];
  }
  // Binomial(2000, 0.2): sd ~ 17.9; 5 sd bounds over 800 cells.
  for (const auto& [speaker, folds] : hits) {
    for (int count : folds) EXPECT_NEAR(count, seeds / 5, 90) << speaker;
  }
}

}  // namespace
}  // namespace cogeval
