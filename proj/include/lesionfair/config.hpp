#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lesionfair/dataio.hpp"
#include "lesionfair/metrics.hpp"
#include "lesionfair/mixup.hpp"
#include "lesionfair/skintone.hpp"

namespace lesionfair {

inline constexpr const char* kConfigEnvVar = "LESIONFAIR_CONFIG";

struct ToolConfig {
  MixupConfig mixup;
  ItaBins ita_bins;
  AucAveraging auc_averaging = AucAveraging::kMacro;
  double z_value = kDefaultZ;
  PaletteConfig palette;
  std::vector<double> alphas{0.5, 0.75};

  // Throws kInvalidConfig.
  void validate() const;
};

// Overlays the keys present in `doc` onto `cfg`; absent keys keep their
// current values. Throws kInvalidConfig on unknown keys or wrong types.
void apply_config(ToolConfig& cfg, const nlohmann::json& doc);

// Defaults overlaid with the file (JSON; // and /* */ comments allowed),
// then validated. Throws kIo or kInvalidConfig.
ToolConfig load_config(const std::filesystem::path& path);

// The explicit path if given, else $LESIONFAIR_CONFIG if set and non-empty.
std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path);

nlohmann::ordered_json config_to_json(const ToolConfig& cfg);

}  // namespace lesionfair
