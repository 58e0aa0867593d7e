#include "metascan/jpeg.hpp"

#include "metascan/error.hpp"

namespace metascan::jpeg {

JpegImage parse_jpeg(ByteView bytes) {
    if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != kMarkerSoi)
        raise(Errc::NotJpeg, "missing SOI marker");

    JpegImage image;
    std::size_t pos = 2;
    bool in_scan = false;

    while (!in_scan) {
        if (pos + 2 > bytes.size())
            raise(Errc::Truncated, "input ends before EOI");
        if (bytes[pos] != 0xFF)
            raise(Errc::Truncated, "expected marker at offset " + std::to_string(pos));
        // fill bytes before a marker are legal
        std::uint8_t marker = bytes[pos + 1];
        if (marker == 0xFF) {
            ++pos;
            continue;
        }
        pos += 2;

        if (marker == kMarkerEoi) {
            image.trailing.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
            return image;
        }
        if (is_standalone_marker(marker)) {
            image.segments.push_back({marker, {}});
            continue;
        }
        if (pos + 2 > bytes.size())
            raise(Errc::Truncated, "segment length missing");
        std::size_t declared = read_u16be(bytes, pos);
        if (declared < 2)
            raise(Errc::BadLength, "segment length < 2");
        if (pos + declared > bytes.size())
            raise(Errc::Truncated, "segment payload exceeds input");
        Segment seg;
        seg.marker = marker;
        seg.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos + 2),
                           bytes.begin() + static_cast<std::ptrdiff_t>(pos + declared));
        image.segments.push_back(std::move(seg));
        pos += declared;
        if (marker == kMarkerSos)
            in_scan = true;
    }

    // Scan data runs until the EOI marker; 0xFF inside the scan is always
    // followed by 0x00 or an RST marker, so a literal FF D9 terminates it.
    std::size_t scan_start = pos;
    while (pos + 2 <= bytes.size()) {
        if (bytes[pos] == 0xFF && bytes[pos + 1] == kMarkerEoi) {
            image.entropy_data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(scan_start),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(pos));
            image.trailing.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos + 2),
                                  bytes.end());
            return image;
        }
        ++pos;
    }
    raise(Errc::Truncated, "no EOI after scan data");
}

Bytes serialize_jpeg(const JpegImage& image) {
    Bytes out;
    out.push_back(0xFF);
    out.push_back(kMarkerSoi);
    for (const Segment& seg : image.segments) {
        out.push_back(0xFF);
        out.push_back(seg.marker);
        if (is_standalone_marker(seg.marker)) {
            if (!seg.payload.empty())
                raise(Errc::BadLength, "standalone marker cannot carry a payload");
            continue;
        }
        if (seg.payload.size() > kMaxSegmentPayload)
            raise(Errc::BadLength, "segment payload exceeds 65533 bytes");
        put_u16be(out, static_cast<std::uint16_t>(seg.payload.size() + 2));
        append(out, seg.payload);
    }
    append(out, image.entropy_data);
    out.push_back(0xFF);
    out.push_back(kMarkerEoi);
    append(out, image.trailing);
    return out;
}

} // namespace metascan::jpeg
