#include "metascan/data.hpp"

#include "metascan/error.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef METASCAN_DEFAULT_DATA_DIR
#define METASCAN_DEFAULT_DATA_DIR "data"
#endif

namespace metascan::data {

std::string default_data_dir() {
    if (const char* env = std::getenv("METASCAN_DATA_DIR"))
        return env;
    return METASCAN_DEFAULT_DATA_DIR;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace metascan::data
