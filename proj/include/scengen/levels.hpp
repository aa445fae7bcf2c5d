#pragma once

#include <string>

namespace scengen {

// Severity levels for anomalous weather, ordered least to most severe.

enum class PrecipLevel { kModerate = 0, kHeavy = 1, kRainstorm = 2, kTorrential = 3 };

// Beaufort-style wind strength levels 8 through 11.
enum class WindLevel { k8 = 0, k9 = 1, k10 = 2, k11 = 3 };

const char* to_string(PrecipLevel level);
const char* to_string(WindLevel level);
PrecipLevel precip_level_from_string(const std::string& name);
WindLevel wind_level_from_string(const std::string& name);

}  // namespace scengen
