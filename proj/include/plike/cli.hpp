#pragma once

#include <iosfwd>

namespace plike {

/// Runs the command line. Returns 0 on success, 1 on domain errors (a JSON
/// object {"error": kind, "message": ...} goes to `err`) and 2 on usage
/// errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plike
