#pragma once

#include <iosfwd>

namespace hesn {

/// Entry point of the command-line tool. Returns the process exit status:
/// 0 on success, otherwise the numeric ErrorCode of the failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hesn
