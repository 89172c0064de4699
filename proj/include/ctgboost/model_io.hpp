#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ctgboost/booster.hpp"

namespace ctgboost {

inline constexpr std::string_view kModelFormat = "ctg-boost-model/1";

/// Self-describing JSON document. Reals are written in shortest
/// round-trip form, so a reload reproduces every double bit for bit.
std::string model_to_json(const BoostedModel& model);

/// Throws VersionMismatch for a different format tag and CorruptModel for
/// anything malformed; never returns a partially populated model.
BoostedModel model_from_json(std::string_view text);

void save_model(const BoostedModel& model, const std::filesystem::path& path);
BoostedModel load_model(const std::filesystem::path& path);

}  // namespace ctgboost
