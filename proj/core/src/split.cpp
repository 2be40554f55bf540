#include <algorithm>
#include <random>
#include <string>

#include "cogeval/errors.hpp"
#include "cogeval/protocol.hpp"
#include "detail/random.hpp"

namespace cogeval {

namespace {

SpeakerKey key_of(const SessionRecord& s) { return {s.corpus_id, s.speaker_id}; }

}  // namespace

int SplitPlan::fold_of(const SessionRecord& s) const {
  const auto it = assignment.find(key_of(s));
  if (it == assignment.end()) {
    throw PreconditionError("speaker \"" + s.speaker_id + "\" of corpus \"" + s.corpus_id + "\" is not in the split");
  }
  return it->second;
}

SessionList SplitPlan::test_part(const SessionList& sessions, int fold) const {
  SessionList out;
  for (const auto* s : sessions) {
    if (fold_of(*s) == fold) out.push_back(s);
  }
  return out;
}

SessionList SplitPlan::train_part(const SessionList& sessions, int fold) const {
  SessionList out;
  for (const auto* s : sessions) {
    if (fold_of(*s) != fold) out.push_back(s);
  }
  return out;
}

SplitPlan make_split(const SessionList& sessions, int k, std::uint64_t seed, Label label) {
  if (k < 2) throw PreconditionError("fold count must be at least 2, got " + std::to_string(k));
  if (sessions.empty()) throw PreconditionError("cannot split an empty session list");

  std::map<SpeakerKey, int> speaker_label;
  std::vector<std::string> missing;
  for (const auto* s : sessions) {
    const auto value = s->label(label);
    if (!value) {
      missing.push_back(s->session_id);
      continue;
    }
    const auto [it, inserted] = speaker_label.emplace(key_of(*s), *value);
    if (!inserted && it->second != *value) {
      throw ValidationError("speaker \"" + s->speaker_id + "\" carries conflicting " + std::string(to_string(label)) +
                            " labels");
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing " + std::string(to_string(label)) + " label for session(s):";
    for (const auto& id : missing) msg += " " + id;
    throw ValidationError(msg);
  }

  std::array<std::vector<SpeakerKey>, kNumClasses> by_class;
  for (const auto& [speaker, value] : speaker_label) by_class[static_cast<std::size_t>(value)].push_back(speaker);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto n = by_class[static_cast<std::size_t>(c)].size();
    if (n > 0 && n < static_cast<std::size_t>(k)) {
      throw PreconditionError("class " + std::to_string(c) + " has " + std::to_string(n) +
                              " speaker(s); stratified " + std::to_string(k) + "-fold split needs at least " +
                              std::to_string(k));
    }
  }

  SplitPlan plan;
  plan.k = k;
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  // Random starting fold so leftover speakers do not always land in fold 0.
  std::size_t deal = static_cast<std::size_t>(detail::bounded(rng, static_cast<std::uint64_t>(k)));
  for (auto& speakers : by_class) {
    detail::shuffle(speakers, rng);
    for (const auto& speaker : speakers) {
      plan.assignment.emplace(speaker, static_cast<int>(deal % static_cast<std::size_t>(k)));
      ++deal;
    }
  }
  return plan;
}

SplitPlan make_split(const Corpus& corpus, std::string_view test_id, int k, std::uint64_t seed, Label label) {
  return make_split(corpus.sessions_for_test(test_id), k, seed, label);
}

}  // namespace cogeval
