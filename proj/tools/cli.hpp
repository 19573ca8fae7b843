#pragma once

#include <iosfwd>

namespace mtcli {

/// Runs the `mt` command line. Returns 0 on success, 1 on a computational failure,
/// 2 on a usage error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace mtcli
