#pragma once

#include <string>
#include <vector>

namespace meanfield {

std::string sha256_hex(const std::string& bytes);

// write via a temporary file in the same directory plus rename, so a
// reader never observes a half-written file
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// shortest round-trip decimal form (%.17g)
std::string format_double(double value);
std::string format_csv_row(const std::vector<double>& values);

std::string utc_timestamp_now();

}  // namespace meanfield
