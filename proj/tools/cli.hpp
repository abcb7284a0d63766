#pragma once

#include <ostream>

namespace nest::cli {

/// Entry point of the `nest` tool, with injectable streams for testing.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nest::cli
