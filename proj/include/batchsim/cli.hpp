#pragma once

#include <iosfwd>

#include "batchsim/error.hpp"

namespace batchsim {

/// 0 success, 1 usage error, 2 data or integrity error, 3 internal invariant violation.
int exit_code_for(Errc code);

/// Entry point of the batchsim command line (gen, run, bench, report).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace batchsim
