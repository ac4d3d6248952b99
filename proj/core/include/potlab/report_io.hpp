#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "potlab/inequalities.hpp"

namespace potlab {

/// Rounds to the given number of significant digits through decimal text,
/// so that serialized reports do not depend on the last bits of a result.
[[nodiscard]] double round_significant(double value, int digits = 12);

/// One JSON object per report, on a single line.
[[nodiscard]] std::string to_json_line(const InequalityReport& report);
void write_jsonl(std::ostream& out, std::span<const InequalityReport> reports);
/// Aligned plain-text table.
void write_table(std::ostream& out, std::span<const InequalityReport> reports);

}  // namespace potlab
