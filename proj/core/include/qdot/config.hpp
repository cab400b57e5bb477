#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdot/core_model.hpp"
#include "qdot/coupling.hpp"
#include "qdot/exact_ed.hpp"

namespace qdot::io {

// Configuration problems carry the offending key path; the CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Run configuration, parsed from a JSON document with sections
// {material, geometry, effective, array, protocol, ed, output}. Physical
// scalars are strings with a mandatory unit suffix ("1.5 ueV", "300 nm",
// "0.5 T", "2 ps", "1e4 nm2"); a missing or wrong suffix is a hard error,
// never a silent conversion. Unknown keys are rejected.

struct EffectiveSection {
  std::array<double, 4> eps0_ueV{};
  double delta_ueV = 0.0;
  double zeeman_per_flux_ueV = 0.0;
  double diamagnetic_ueV = 0.0;
  double flux_from = 0.0;
  double flux_to = 1.0;
  int flux_points = 101;
};

struct ArraySection {
  coupling::ArrayGeometry geometry;
};

struct ScheduleEntry {
  double duration_ps = 0.0;
  double e0_ueV = 0.0;
  double e1_ueV = 0.0;
  double gamma_ueV = 0.0;
};

struct ProtocolSection {
  std::string kind;  // gate | rotation | schedule | rootswap | computational | detuned | preserve
  std::string gate;  // hadamard | not (kind == gate)
  double theta_rad = 0.0;
  double phase_rad = 0.0;
  double gate_energy_ueV = 0.0;
  double gamma_ueV = 0.0;
  double v_ueV = 0.0;
  std::vector<double> v_over_gamma;  // sweep for the concurrence protocols
  std::string start = "00";
  double t_max_ps = 0.0;  // 0 = protocol default
  int points = 2000;
  std::uint64_t shots = 0;
  std::vector<ScheduleEntry> schedule;
};

struct EdSection {
  ed::EDConfig config;          // channel field ignored, see `channel`
  std::string channel = "both"; // singlet | triplet | both
  int n_lowest = 6;
  int grid_n = 161;
  std::string cache_dir;        // empty = <out>/cache
};

struct OutputSection {
  std::string prefix;
};

struct RunConfig {
  std::optional<model::MaterialParams> material;
  std::optional<model::DotGeometry> geometry;
  std::optional<EffectiveSection> effective;
  std::optional<ArraySection> array;
  std::optional<ProtocolSection> protocol;
  std::optional<EdSection> ed;
  OutputSection output;
  std::uint64_t seed = 0;

  // canonical resolved document (defaults filled in, keys sorted) and its hash
  std::string resolved_json;
  std::uint64_t config_hash = 0;
};

// seed_override (the CLI --seed flag) replaces the config seed before the
// document is resolved, so the embedded hash reflects the effective seed.
RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override = {});
RunConfig parse_run_config(const std::string& json_text,
                           std::optional<std::uint64_t> seed_override = {});

}  // namespace qdot::io
