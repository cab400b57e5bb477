#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qdot::io {

// Rectangular numeric table with a '#'-prefixed metadata block. Output is
// byte-deterministic: metadata keys are emitted sorted and values printed
// with a fixed format, so identical runs produce identical files.
struct ResultTable {
  std::vector<std::string> columns;  // name with unit suffix, e.g. "delta [ueV]"
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  void add_row(std::initializer_list<double> values);
  void check_rectangular() const;
};

std::string to_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::filesystem::path& path);

// Parses the '#' metadata block, header and rows back; used for round-trip
// checks and downstream tooling.
ResultTable read_csv(const std::filesystem::path& path);

// FNV-1a over a byte string; the config hash embedded in every output.
std::uint64_t fnv1a_hash(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// canonical number formatting used in CSV cells ("%.15g")
std::string format_double(double v);

}  // namespace qdot::io
