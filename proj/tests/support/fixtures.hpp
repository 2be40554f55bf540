#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cogeval/corpus.hpp"
#include "cogeval/protocol.hpp"

namespace cogeval::testing {

/// Label-only corpus (no feature files): `counts[c]` speakers of class c,
/// one session each for test "sVFT", ids zero-padded in label order.
inline Corpus label_corpus(const std::array<int, 3>& counts, const std::string& corpus_id = "A") {
  Corpus c;
  c.corpus_id = corpus_id;
  int id = 0;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < counts[static_cast<std::size_t>(k)]; ++i, ++id) {
      SessionRecord s;
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04d", id);
      s.session_id = corpus_id + "-s" + buf;
      s.speaker_id = std::string("p") + buf;
      s.corpus_id = corpus_id;
      s.test_id = "sVFT";
      s.cognitive = k;
      c.sessions.push_back(s);
    }
  }
  return c;
}

/// Co-occurrence table (rows HC/MCI/DEM, columns depression none/mild/severe)
/// with cognitive marginals 29/48/83 and depression marginals 92/36/32.
inline constexpr std::array<std::array<int, 3>, 3> kFigureTable{{{20, 5, 4}, {15, 17, 16}, {57, 14, 12}}};

/// label_corpus({29, 48, 83}) with depression labels laid out per kFigureTable.
inline Corpus figure_corpus() {
  Corpus c = label_corpus({29, 48, 83});
  std::size_t i = 0;
  for (std::size_t cog = 0; cog < 3; ++cog) {
    for (std::size_t dep = 0; dep < 3; ++dep) {
      for (int n = 0; n < kFigureTable[cog][dep]; ++n) c.sessions[i++].depression = static_cast<int>(dep);
    }
  }
  return c;
}

inline std::map<std::string, int> identity_predictions(const Corpus& c) {
  std::map<std::string, int> p;
  for (const auto& s : c.sessions) p[s.session_id] = s.cognitive;
  return p;
}

inline SessionList all_sessions(const Corpus& c) {
  SessionList out;
  for (const auto& s : c.sessions) out.push_back(&s);
  return out;
}

}  // namespace cogeval::testing
