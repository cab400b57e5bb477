#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qdot/config.hpp"
#include "qdot/result_table.hpp"

namespace qdot::io {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything a subcommand wants written to disk: named CSV tables plus
// free-form notes that the CLI prints to stdout.
struct CommandOutput {
  std::vector<std::pair<std::string, ResultTable>> tables;  // filename -> table
  std::vector<std::string> notes;
};

// Thrown when a run exceeds a configured resource cap; CLI exit code 4.
class ResourceCapError : public std::runtime_error {
 public:
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on numerical non-convergence; CLI exit code 3.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Eight-level effective spectrum against a flux grid.
CommandOutput cmd_spectrum(const RunConfig& cfg);

// Gate schedules: populations/amplitudes vs time, optional seeded histogram.
CommandOutput cmd_evolve(const RunConfig& cfg);

// Inter-dot couplings v_n for all three models plus n^-5/n^-6 ratio columns.
CommandOutput cmd_couple(const RunConfig& cfg);

// Concurrence protocol traces, one table per v/gamma value in the sweep.
CommandOutput cmd_concurrence(const RunConfig& cfg);

// Exact-diagonalisation run: spectrum, extracted Delta, density grid. The
// Coulomb tensor cache lives under `cache_dir` (or <out>/cache when unset).
CommandOutput cmd_ed(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace qdot::io
