#pragma once

#include "metascan/bytes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metascan::id3 {

/// Text frame. `text` is UTF-8 regardless of the wire encoding; the writer
/// picks encoding 0 (Latin-1) when the text fits, 3 (UTF-8) otherwise.
struct Id3Frame {
    std::string frame_id; // 4 chars, [A-Z0-9]
    std::uint8_t encoding = 0;
    std::string text;

    bool operator==(const Id3Frame&) const = default;
};

struct Id3Tag {
    int major_version = 3;
    std::vector<Id3Frame> frames;

    bool operator==(const Id3Tag&) const = default;
};

Bytes syncsafe_encode(std::uint32_t n);
std::uint32_t syncsafe_decode(ByteView b);

std::pair<std::optional<Id3Tag>, Bytes> parse_id3(ByteView bytes);
Bytes serialize_id3(const Id3Tag& tag, ByteView audio);

bool valid_frame_id(const std::string& id);

} // namespace metascan::id3
