#pragma once

// Run manifest: what was run, on which grid, and what was written.
// Serialized as JSON with sorted keys; doubles round-trip exactly.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasespace/core.hpp"

namespace phasespace::cli {

struct GridSpec {
  double q_min = -8.0;
  double q_max = 8.0;
  std::size_t n = 256;
  bool operator==(const GridSpec&) const = default;
};

struct EvolutionSpec {
  double dt = 1e-3;
  std::size_t steps = 0;
  std::optional<std::size_t> truncation;
  bool operator==(const EvolutionSpec&) const = default;
};

struct OutputRecord {
  std::string path;
  std::string sha256;
  bool operator==(const OutputRecord&) const = default;
};

struct CheckRecord {
  std::string name;
  std::string status;  // "pass" or "fail"
  double residual = 0.0;
  bool operator==(const CheckRecord&) const = default;
};

struct RunManifest {
  std::string command;
  std::string state_spec;
  GridSpec grid;
  PhysicalConstants constants;
  std::vector<double> potential;
  EvolutionSpec evolution;
  std::map<std::string, double> tolerances;
  std::vector<OutputRecord> outputs;
  std::vector<CheckRecord> checks;

  bool operator==(const RunManifest&) const = default;
};

std::string to_json(const RunManifest& manifest);
// Missing keys keep their defaults. Throws ParseError on malformed JSON or wrong types.
RunManifest manifest_from_json(std::string_view text);

std::string sha256_hex(std::string_view data);

}  // namespace phasespace::cli
