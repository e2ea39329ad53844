// cli_app.hpp — the `quasih` command driver, separated from main() so the
// integration tests can run subcommands in-process.
#pragma once

#include <iosfwd>

namespace quasih {

// Exit codes: 0 success, 1 verification failure, 2 config error, 3 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quasih
