#pragma once

#include "metascan/bytes.hpp"

#include <map>
#include <string>

namespace metascan {

enum class MediaFormat { Jpeg, Mp3, Mp4 };

const char* format_name(MediaFormat format);
MediaFormat parse_format_name(const std::string& name);

/// Format-qualified field identifier: "iptc:2:105", "id3:TIT2", "mp4:©nam".
using FieldKey = std::string;

/// Uniform view over the text-typed metadata of one media file.
struct MetadataDocument {
    MediaFormat format = MediaFormat::Jpeg;
    std::map<FieldKey, std::string> fields;

    bool operator==(const MetadataDocument&) const = default;
};

MetadataDocument extract_metadata(ByteView bytes, MediaFormat format);

/// Writes `fields` (keys without the format prefix stripped, i.e. full
/// FieldKeys) into the media file, replacing existing values.
Bytes set_metadata(ByteView bytes, MediaFormat format,
                   const std::map<FieldKey, std::string>& fields);

} // namespace metascan
