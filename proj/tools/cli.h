#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infoplane::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertified = 10;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalError = 3;

// Runs one command line (without the program name). Reports and CSV output
// go to `out`, logs to `err`. Returns the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infoplane::cli
