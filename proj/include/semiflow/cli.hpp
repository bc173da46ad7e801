#pragma once

#include <iosfwd>

namespace semiflow::cli {

// Runs one CLI invocation. JSON report on `out`, structured errors on `err`.
// Exit codes: 0 success, 1 usage error, 2 expression parse error, 3 numeric
// failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semiflow::cli
