#pragma once

#include <iosfwd>

namespace aefuse::cli {

/// Entry point of the `aefuse` command. Returns the process exit code:
/// 0 on success, 1 on a runtime or validation failure, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aefuse::cli
