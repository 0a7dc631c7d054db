#ifndef SHOOT_SERIALIZE_HPP
#define SHOOT_SERIALIZE_HPP

#include <filesystem>
#include <variant>

#include <json.hpp>

#include "shoot/baselines.hpp"
#include "shoot/ensemble.hpp"

namespace shoot {

// Versioned JSON model documents:
//   {"format": "shoot-model", "version": 1, "kind": "shooting" | "random_forest" | "gbm", ...}
// Trees are stored as parallel arrays (feature, threshold, left, right, value, n_samples).
// Doubles are written with round-trip precision, so reloaded models predict bit-identically.

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<ShootingEnsemble, RandomForest, GradientBoosting>;

nlohmann::json tree_to_json(const RegressionTree& tree);
RegressionTree tree_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ShootingEnsemble& model);
nlohmann::json model_to_json(const RandomForest& model);
nlohmann::json model_to_json(const GradientBoosting& model);

/// Throws DataError on unknown format, version or kind.
AnyModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel load_model(const std::filesystem::path& path);

Vector predict_any(const AnyModel& model, const Matrix& features);

}  // namespace shoot

#endif  // SHOOT_SERIALIZE_HPP
