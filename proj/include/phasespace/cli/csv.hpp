#pragma once

// Text formats written by the command-line tool.
//
// Distribution CSV:
//   # kind=Wigner
//   # nq=256
//   # np=256
//   # qmin=-8
//   # qmax=8
//   # hbar=1
//   # mass=1
//   q,p,re,im
//   <one row per grid point, q-major, p ascending>
// Marginal CSV: "x,value". Every float is printed with 17 significant digits.

#include <filesystem>
#include <string>
#include <string_view>

#include "phasespace/core.hpp"
#include "phasespace/transforms.hpp"

namespace phasespace::cli {

std::string format_double(double x);

std::string distribution_csv(const PhaseSpaceDistribution& dist);
// Throws ParseError on malformed input or sample coordinates off the grid.
PhaseSpaceDistribution parse_distribution_csv(std::string_view text);

std::string marginal_csv(const MarginalVector& marginal);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace phasespace::cli
