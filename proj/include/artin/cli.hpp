#pragma once

#include <iosfwd>

namespace artin {

/// Entry point of the `artin` tool. Exit codes: 0 success, 1 computation or
/// validation failure, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace artin
