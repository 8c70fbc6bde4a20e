#pragma once

#include <ostream>

namespace santalo::cli {

/// Parses argv, runs one verb and writes its report. Returns the process exit
/// status: 0 success, 1 domain error, 2 parse error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace santalo::cli
