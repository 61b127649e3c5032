#pragma once

// The invariant suite behind `phasespace verify`.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phasespace/core.hpp"

namespace phasespace::cli {

// Seed for the random mixtures; the report is byte-identical run to run.
inline constexpr std::uint64_t kVerifySeed = 20240611;

enum class Relation { AtMost, Below, AtLeast };

struct CheckResult {
  std::string name;
  double residual = 0.0;
  Relation relation = Relation::AtMost;
  double bound = 0.0;
  bool passed = false;
};

CheckResult make_check(std::string name, double residual, Relation relation, double bound);

struct VerifyOptions {
  PositionGrid grid = PositionGrid(-8.0, 8.0, 256);
  PhysicalConstants constants;
  std::uint64_t seed = kVerifySeed;
  // The evolution checks take most of the runtime.
  bool dynamics = true;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  // One line per check plus a summary line.
  std::string to_text() const;
};

VerifyReport run_verify(const VerifyOptions& options = {});

// count weights, uniform in (0, 1] then normalized to sum 1. Drawn from the raw
// engine bits so the sequence is the same on every standard library.
std::vector<double> random_weights(std::mt19937_64& rng, std::size_t count);

}  // namespace phasespace::cli
