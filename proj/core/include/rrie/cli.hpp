#pragma once

#include <iosfwd>

namespace rrie {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNumerical = 2 };

/// Entry point of the `rrie` tool:
///   denoise     --input F --snr L --noise {gaussian|uniform02} [--alpha A] [--eta E] --output F
///   experiment  --config F
///   overlap     --config F
///   mmse-curve  --prior P --lambda-max X --points K [--n N --m M --seed S --output F]
///   check
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrie
