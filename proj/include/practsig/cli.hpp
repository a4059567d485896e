#pragma once

#include <iosfwd>

namespace practsig {

/// Entry point of the `practsig` command. Exit codes: 0 success, 2 input or
/// configuration error, 3 numeric or initialization failure, 4 R-hat above
/// 1.05 after fitting.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

} // namespace practsig
