#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "cogeval/analysis.hpp"
#include "cogeval/metrics.hpp"
#include "cogeval/protocol.hpp"
#include "cogeval/report.hpp"
#include "cogeval/svm.hpp"

namespace cogeval {

using nlohmann::json;

json to_json(const ConfusionMatrix& m);
ConfusionMatrix confusion_from_json(const json& j);

json to_json(const KernelConfig& k);
json to_json(const Hyperparameters& h);
json to_json(const HyperGrid& g);
json to_json(const ExperimentSpec& s);

/// Self-describing model dump (kernel, C, scaler, support vectors, coefficients, biases).
json to_json(const SvmMulticlassModel& model);

/// Full experiment report with provenance. `generated_at` is the only
/// field that varies between identical runs.
json to_json(const ExperimentResult& r, const std::optional<std::string>& generated_at = std::nullopt);
ExperimentResult result_from_json(const json& j);

json to_json(const Report& report);
json to_json(const CellAssignment& a);
json to_json(const OverlapTable& t);
json to_json(const Breakdown& b);

}  // namespace cogeval
