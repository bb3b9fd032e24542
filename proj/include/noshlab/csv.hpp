#pragma once

#include "noshlab/numkit.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace noshlab::csv {

/// Reads a comma-separated file with a header row into a Dataset. Lines
/// starting with '#' are skipped. Every cell must be a finite number with a
/// '.' decimal separator; blank cells are errors (InputError with row/column).
numkit::Dataset read_dataset(std::istream& in, const std::string& source = "<stream>");
numkit::Dataset read_dataset(const std::filesystem::path& path);

/// Writes the shortest decimal form that reads back to the same double.
void write_dataset(std::ostream& out, const numkit::Dataset& data);
void write_dataset(const std::filesystem::path& path, const numkit::Dataset& data);

/// Shortest round-trip representation of a double.
std::string format_exact(double value);

}  // namespace noshlab::csv
