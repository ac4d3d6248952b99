#pragma once

#include <iosfwd>

#include "potlab/config.hpp"

namespace potlab::cli {

/// Runs the configured command. Returns 0 on success, 1 when a computed
/// criterion fails, 2 on a computational failure and 3 on an input error.
[[nodiscard]] int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line, validate and run.
[[nodiscard]] int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace potlab::cli
