#pragma once

#include "metascan/bytes.hpp"

#include <cstdint>
#include <vector>

namespace metascan::jpeg {

/// One marker segment between SOI and the scan data. `marker` is the second
/// byte of the 0xFFxx marker. Standalone markers (TEM, RSTn) carry no length
/// field and always have an empty payload.
struct Segment {
    std::uint8_t marker = 0;
    Bytes payload;

    bool operator==(const Segment&) const = default;
};

struct JpegImage {
    std::vector<Segment> segments;
    Bytes entropy_data; // scan data between the SOS payload and EOI
    Bytes trailing;     // bytes after EOI, preserved verbatim

    bool operator==(const JpegImage&) const = default;
};

constexpr std::uint8_t kMarkerSoi = 0xD8;
constexpr std::uint8_t kMarkerEoi = 0xD9;
constexpr std::uint8_t kMarkerSos = 0xDA;
constexpr std::uint8_t kMarkerApp13 = 0xED;

constexpr std::size_t kMaxSegmentPayload = 65533;

inline bool is_app_marker(std::uint8_t marker) { return marker >= 0xE0 && marker <= 0xEF; }

// TEM and RSTn have no length field.
inline bool is_standalone_marker(std::uint8_t marker) {
    return marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7);
}

JpegImage parse_jpeg(ByteView bytes);
Bytes serialize_jpeg(const JpegImage& image);

} // namespace metascan::jpeg
