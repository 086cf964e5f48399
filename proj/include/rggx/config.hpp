#pragma once

// Versioned JSON configuration documents and run manifests.
//
// Config document (schema 1). Unknown keys are rejected everywhere.
//
//   {
//     "schema": 1,
//     "window": {"kind": "cube" | "ball", "dimension": 3},
//     "plane": {"axes": [0, 1]} | {"basis": [[...], [...]]},      optional
//     "regime": {"kind": "sparse" | "thermodynamic", "c": 1.0}
//             | {"kind": "explicit", "delta": 0.05},
//     "t": 1000 | [500, 1000],
//     "replications": 2000,
//     "regions": [{"kind": "rectangle", "lo": [0, 0], "hi": [0.5, 0.5]},
//                 {"kind": "disk", "center": [0.5, 0.5], "radius": 0.2},
//                 {"kind": "full"}],                               optional
//     "seed": 1,
//     "weight": {"kind": "inverse_sq"} | {"kind": "unit", "bound": 3}
//             | {"kind": "table", "breaks": [...], "values": [...], "bound": 1},
//     "compute_stress": true,                                      optional
//     "constants": "published" | "integral",                       optional
//     "intensity_slack": 0.05,                                     optional
//     "quadrature": {"outer_per_axis": 32, "inner_points": 100000}, optional
//     "outputs": {"dir": "out", "prefix": "run"}                   optional
//   }

#include <cstdint>
#include <string>

#include "json.hpp"
#include "rggx/experiment.hpp"

namespace rggx {

inline constexpr int kConfigSchema = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RGGX_OUT_DIR";

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
/// Normalised document; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical dump of everything except "outputs", as hex.
std::string config_hash(const ExperimentConfig& cfg);

struct RunSettings {
  int threads = 1;
  double level = 0.01;
  double tolerance_scale = 1.0;
  bool calibrate = false;
};

nlohmann::json make_manifest(const ExperimentConfig& cfg, const RunSettings& settings, const std::string& command,
                             const std::string& records_file);

/// Rebuilds the configuration stored in a manifest and checks it against the
/// recorded hash; throws ConfigurationError on mismatch.
ExperimentConfig config_from_manifest(const nlohmann::json& manifest);

}  // namespace rggx
