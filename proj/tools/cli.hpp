#pragma once

#include <ostream>

namespace saddlekit::cli {

/// Runs one command line. Returns 0 on success, 1 on a domain error (JSON on
/// err) and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saddlekit::cli
