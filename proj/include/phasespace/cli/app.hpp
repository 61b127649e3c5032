#pragma once

// Command-line entry point.
//
//   phasespace wigner    --state SPEC
//   phasespace sn        --state SPEC
//   phasespace convert   --in SN.csv
//   phasespace marginals --state SPEC --dist wigner|sn
//   phasespace expect    --state SPEC --observable q|p|q2|H [--potential c0,c1,...]
//   phasespace evolve    --state SPEC --potential c0,c1,... --dt DT --steps N [--truncation K] [--oracle]
//   phasespace verify    [--quick]
//
// Shared options: --grid a,b,n  --hbar H  --mass M  --out DIR  --config FILE.
// Output directory defaults to $PHASESPACE_OUT_DIR, then ".".
//
// Exit codes: 0 success, 1 failed check, 2 usage or input error,
// 3 numerical guard (BoundaryLeak, StepTooLarge).

#include <iosfwd>
#include <string>
#include <vector>

namespace phasespace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumericalGuard = 3;

inline constexpr const char* kOutDirEnv = "PHASESPACE_OUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace phasespace::cli
