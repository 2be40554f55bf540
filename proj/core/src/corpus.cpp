#include "cogeval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cogeval/errors.hpp"
#include "cogeval/feature_matrix.hpp"

namespace cogeval {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"", line);
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string", line);
  return v.get<std::string>();
}

int require_int(const json& v, const char* key, std::size_t line) {
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer", line);
  return v.get<int>();
}

SessionRecord parse_line(const std::string& text, std::size_t line, const std::filesystem::path& base) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", line);

  SessionRecord s;
  s.session_id = require_string(obj, "session_id", line);
  s.speaker_id = require_string(obj, "speaker_id", line);
  s.corpus_id = require_string(obj, "corpus_id", line);
  s.test_id = require_string(obj, "test_id", line);
  s.cognitive = require_int(require(obj, "cognitive", line), "cognitive", line);

  if (const auto it = obj.find("depression"); it != obj.end() && !it->is_null()) {
    s.depression = require_int(*it, "depression", line);
  }
  if (const auto it = obj.find("test_score"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) throw ParseError("field \"test_score\" must be a number or null", line);
    s.test_score = it->get<double>();
  }

  const json& features = require(obj, "features", line);
  if (!features.is_object()) throw ParseError("field \"features\" must be an object", line);
  for (const auto& [name, rel] : features.items()) {
    if (!rel.is_string()) throw ParseError("feature path for \"" + name + "\" must be a string", line);
    std::filesystem::path p = rel.get<std::string>();
    s.features.emplace(name, p.is_absolute() ? p : base / p);
  }
  return s;
}

bool in_range(int label) { return label >= 0 && label < kNumClasses; }

}  // namespace

std::string_view to_string(Label label) { return label == Label::Cognitive ? "cognitive" : "depression"; }

Label parse_label(std::string_view name) {
  if (name == "cognitive") return Label::Cognitive;
  if (name == "depression") return Label::Depression;
  throw PreconditionError("unknown label '" + std::string(name) + "' (expected cognitive|depression)");
}

const SessionRecord* Corpus::find(std::string_view session_id) const {
  const auto it = std::lower_bound(sessions.begin(), sessions.end(), session_id,
                                   [](const SessionRecord& s, std::string_view id) { return s.session_id < id; });
  return it != sessions.end() && it->session_id == session_id ? &*it : nullptr;
}

bool Corpus::has_feature_set(std::string_view name) const {
  return std::binary_search(feature_sets.begin(), feature_sets.end(), name);
}

std::vector<const SessionRecord*> Corpus::sessions_for_test(std::string_view test_id) const {
  std::vector<const SessionRecord*> out;
  for (const auto& s : sessions) {
    if (s.test_id == test_id) out.push_back(&s);
  }
  return out;
}

std::vector<std::string> Corpus::test_ids() const {
  std::set<std::string> ids;
  for (const auto& s : sessions) ids.insert(s.test_id);
  return {ids.begin(), ids.end()};
}

void validate_corpus(const Corpus& corpus, const LoadOptions& options) {
  std::set<std::string> declared(corpus.feature_sets.begin(), corpus.feature_sets.end());
  for (std::size_t i = 0; i < corpus.sessions.size(); ++i) {
    const SessionRecord& s = corpus.sessions[i];
    if (i > 0 && corpus.sessions[i - 1].session_id == s.session_id) {
      throw ValidationError("duplicate session_id \"" + s.session_id + "\"");
    }
    if (s.session_id.empty()) throw ValidationError("empty session_id");
    if (s.speaker_id.empty()) throw ValidationError("session \"" + s.session_id + "\": empty speaker_id");
    if (s.corpus_id != corpus.corpus_id) {
      throw ValidationError("session \"" + s.session_id + "\": corpus_id \"" + s.corpus_id +
                            "\" differs from manifest corpus \"" + corpus.corpus_id + "\"");
    }
    if (!in_range(s.cognitive)) {
      throw ValidationError("session \"" + s.session_id + "\": cognitive label out of range (" +
                            std::to_string(s.cognitive) + ")");
    }
    if (s.depression && !in_range(*s.depression)) {
      throw ValidationError("session \"" + s.session_id + "\": depression label out of range (" +
                            std::to_string(*s.depression) + ")");
    }
    for (const auto& name : declared) {
      if (!s.features.contains(name)) {
        throw ValidationError("session \"" + s.session_id + "\" lacks feature set \"" + name + "\"");
      }
    }
    for (const auto& [name, path] : s.features) {
      if (!declared.contains(name)) {
        throw ValidationError("session \"" + s.session_id + "\" has undeclared feature set \"" + name + "\"");
      }
      if (!std::filesystem::is_regular_file(path)) {
        throw ValidationError("session \"" + s.session_id + "\": missing feature file " + path.string());
      }
      if (options.parse_features) {
        try {
          (void)read_feature_matrix(path);
        } catch (const Error& e) {
          throw ValidationError("session \"" + s.session_id + "\": unreadable feature file: " + e.what());
        }
      }
    }
  }
}

Corpus load_manifest(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest " + path.string());
  const auto base = path.parent_path();

  Corpus corpus;
  std::set<std::string> feature_sets;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    SessionRecord s = parse_line(text, line, base);
    if (corpus.sessions.empty()) {
      corpus.corpus_id = s.corpus_id;
    } else if (s.corpus_id != corpus.corpus_id) {
      throw ValidationError("line " + std::to_string(line) + ": manifest mixes corpus ids \"" + corpus.corpus_id +
                            "\" and \"" + s.corpus_id + "\"");
    }
    for (const auto& [name, _] : s.features) feature_sets.insert(name);
    corpus.sessions.push_back(std::move(s));
  }

  std::stable_sort(corpus.sessions.begin(), corpus.sessions.end(),
                   [](const SessionRecord& a, const SessionRecord& b) { return a.session_id < b.session_id; });
  corpus.feature_sets.assign(feature_sets.begin(), feature_sets.end());
  validate_corpus(corpus, options);
  return corpus;
}

void write_manifest(const Corpus& corpus, const std::filesystem::path& path) {
  const auto base = std::filesystem::absolute(path).parent_path();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot create manifest " + path.string());
  for (const auto& s : corpus.sessions) {
    json obj = json::object();
    obj["session_id"] = s.session_id;
    obj["speaker_id"] = s.speaker_id;
    obj["corpus_id"] = s.corpus_id;
    obj["test_id"] = s.test_id;
    obj["cognitive"] = s.cognitive;
    obj["depression"] = s.depression ? json(*s.depression) : json(nullptr);
    obj["test_score"] = s.test_score ? json(*s.test_score) : json(nullptr);
    json features = json::object();
    for (const auto& [name, p] : s.features) {
      auto rel = std::filesystem::absolute(p).lexically_relative(base);
      features[name] = (rel.empty() ? p : rel).generic_string();
    }
    obj["features"] = std::move(features);
    out << obj.dump() << '\n';
  }
  if (!out) throw Error("failed writing manifest " + path.string());
}

ClassCounts class_counts(std::span<const SessionRecord* const> sessions, Label label) {
  ClassCounts counts{};
  std::vector<std::string> missing;
  for (const SessionRecord* s : sessions) {
    const auto value = s->label(label);
    if (!value) {
      missing.push_back(s->session_id);
      continue;
    }
    ++counts[static_cast<std::size_t>(*value)];
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "missing " << to_string(label) << " label for " << missing.size() << " session(s):";
    for (const auto& id : missing) msg << ' ' << id;
    throw ValidationError(msg.str());
  }
  return counts;
}

ClassCounts class_counts(const Corpus& corpus, Label label) {
  std::vector<const SessionRecord*> all;
  all.reserve(corpus.sessions.size());
  for (const auto& s : corpus.sessions) all.push_back(&s);
  return class_counts(all, label);
}

}  // namespace cogeval
