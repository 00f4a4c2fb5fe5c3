#pragma once

#include <string>
#include <string_view>

namespace termnet {

// Shortest decimal representation that round-trips the exact double.
// Used by every serializer so numeric output is byte-deterministic.
std::string fmt_double(double v);

std::string read_file(const std::string& path);

// Writes to a temp file in the target directory, then renames.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace termnet
