#include <filesystem>
#include <functional>
#include <string>

#include "cogeval/errors.hpp"
#include "cogeval/protocol.hpp"

namespace cogeval {

std::shared_ptr<const std::vector<double>> FeatureStore::pooled(const SessionRecord& session,
                                                                const std::string& feature_set, PoolingKind kind) {
  const auto it = session.features.find(feature_set);
  if (it == session.features.end()) {
    throw ValidationError("session \"" + session.session_id + "\" has no feature set \"" + feature_set + "\"");
  }
  const std::filesystem::path& path = it->second;
  const std::string key = path.string() + '\n' + std::string(to_string(kind));
  {
    std::lock_guard lock(mutex_);
    if (const auto hit = cache_.find(key); hit != cache_.end()) return hit->second;
  }

  FeatureMatrix pooled_matrix;
  const std::filesystem::path cached = path.string() + "." + std::string(to_string(kind)) + ".pooled";
  if (options_.disk_cache && std::filesystem::is_regular_file(cached)) {
    pooled_matrix = read_feature_matrix(cached);
  } else {
    pooled_matrix = pool(read_feature_matrix(path), kind);
    if (options_.disk_cache) {
      auto tmp = cached;
      tmp += ".tmp" + std::to_string(std::hash<std::string>{}(key));
      write_feature_matrix(tmp, pooled_matrix);
      std::filesystem::rename(tmp, cached);
      // Later runs read the float32 copy; use it now too so results match.
      pooled_matrix = read_feature_matrix(cached);
    }
  }
  auto vec = std::make_shared<const std::vector<double>>(pooled_matrix.values());

  std::lock_guard lock(mutex_);
  ++loads_;
  return cache_.emplace(key, std::move(vec)).first->second;
}

FeatureMatrix FeatureStore::design_matrix(const SessionList& sessions, const std::string& feature_set,
                                          PoolingKind kind) {
  FeatureMatrix x;
  for (const auto* s : sessions) {
    const auto v = pooled(*s, feature_set, kind);
    if (x.rows() > 0 && v->size() != x.dim()) {
      throw ValidationError("feature set \"" + feature_set + "\": session \"" + s->session_id + "\" has dim " +
                            std::to_string(v->size()) + ", expected " + std::to_string(x.dim()));
    }
    x.append_row(*v);
  }
  return x;
}

std::size_t FeatureStore::loads() const {
  std::lock_guard lock(mutex_);
  return loads_;
}

}  // namespace cogeval
