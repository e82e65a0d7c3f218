#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qcorr::cli {

/// Runs the command line `args` (program name excluded). Reports go to `out`;
/// failures print one JSON error line to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Integer percent with the sign kept, e.g. 0.084 -> "8%".
std::string percent(double fraction);

}  // namespace qcorr::cli
