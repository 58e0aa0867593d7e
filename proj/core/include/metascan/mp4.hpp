#pragma once

#include "metascan/bytes.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace metascan::mp4 {

/// ISO BMFF box. Container boxes hold children; leaves hold raw payload
/// bytes. `meta` is a full box: its 4-byte version/flags prefix is kept in
/// `full_box_header` and the rest is parsed as children.
struct Mp4Box {
    std::string box_type; // 4 chars
    Bytes payload;        // leaf payload
    std::vector<Mp4Box> children;
    bool container = false;
    Bytes full_box_header; // 4 bytes for `meta`, empty otherwise

    bool operator==(const Mp4Box&) const = default;
};

std::vector<Mp4Box> parse_mp4(ByteView bytes);
Bytes serialize_mp4(const std::vector<Mp4Box>& boxes);

std::vector<Mp4Box> set_mp4_metadata(std::vector<Mp4Box> boxes,
                                     const std::map<std::string, std::string>& fields);
std::map<std::string, std::string> extract_mp4_metadata(const std::vector<Mp4Box>& boxes);

} // namespace metascan::mp4
