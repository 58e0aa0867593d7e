#pragma once

#include <string>

namespace metascan::data {

/// Directory holding the bundled catalog files. The METASCAN_DATA_DIR
/// environment variable overrides the compiled-in default.
std::string default_data_dir();

/// Reads a whole file; raises IoError when unreadable.
std::string read_file(const std::string& path);

} // namespace metascan::data
