#pragma once

#include <iosfwd>

namespace wlsys {

// Entry point of the command-line tool. Exit codes: 0 success, 1 domain
// error (bad data, carrier violations, unsupported operations), 2 usage error
// (bad flags, missing files, invalid configuration).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wlsys
