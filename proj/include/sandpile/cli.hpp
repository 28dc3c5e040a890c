#pragma once

#include <ostream>

namespace sandpile {

/// Entry point behind the `sandpile` tool. Returns 0 on success, 1 on
/// invalid input, 2 when a solver fails or a check does not hold.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sandpile
