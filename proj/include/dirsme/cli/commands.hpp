#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dirsme/cli/dataset.hpp"
#include "dirsme/cli/report.hpp"

namespace dirsme::cli {

inline constexpr const char* kVersion = "0.3.1";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

// model: vmf | bingham | kent | fisher-bingham | sine
// estimator: hybrid | full
FitReport fit_dataset(const Dataset& data, const std::string& model, const std::string& estimator);

// Entry point behind the dirsme executable; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirsme::cli
