#pragma once

#include <string>
#include <vector>

namespace jitterpovm {

/// Shortest decimal form that parses back to exactly the same double;
/// locale-independent.
std::string format_number(double x);

/// Writes header + equal-length numeric columns as CSV with '\n' line
/// endings. The file appears atomically: content goes to a temporary in the
/// same directory, which is renamed over the target only after a complete
/// write. Throws std::runtime_error on I/O failure.
void write_csv_atomic(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns);

/// Same temp-then-rename discipline for an arbitrary text payload.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace jitterpovm
