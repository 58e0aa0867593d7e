#include "metascan/iptc.hpp"

#include "metascan/error.hpp"

#include <algorithm>
#include <cstring>

namespace metascan::iptc {

namespace {

const char kPhotoshopHeader[] = "Photoshop 3.0";
const char kBlockSignature[] = "8BIM";

bool has_photoshop_header(ByteView payload) {
    const std::size_t n = sizeof(kPhotoshopHeader); // includes NUL
    return payload.size() >= n
        && std::memcmp(payload.data(), kPhotoshopHeader, n) == 0;
}

} // namespace

Bytes encode_iptc_dataset(int record, int dataset, ByteView payload) {
    if (payload.size() > kMaxDatasetPayload)
        raise(Errc::FieldTooLong, "IPTC dataset payload exceeds 32767 bytes");
    Bytes out;
    out.push_back(0x1C);
    out.push_back(static_cast<std::uint8_t>(record));
    out.push_back(static_cast<std::uint8_t>(dataset));
    put_u16be(out, static_cast<std::uint16_t>(payload.size()));
    append(out, payload);
    return out;
}

std::vector<IptcDataSet> decode_iptc_stream(ByteView data) {
    std::vector<IptcDataSet> sets;
    std::size_t pos = 0;
    while (pos < data.size()) {
        if (data[pos] != 0x1C)
            raise(Errc::MalformedIptc, "expected dataset tag 0x1C");
        if (pos + 5 > data.size())
            raise(Errc::MalformedIptc, "dataset header truncated");
        IptcDataSet ds;
        ds.record = data[pos + 1];
        ds.dataset = data[pos + 2];
        std::size_t len = read_u16be(data, pos + 3);
        if (len > kMaxDatasetPayload)
            raise(Errc::MalformedIptc, "extended datasets are not supported");
        if (pos + 5 + len > data.size())
            raise(Errc::MalformedIptc, "dataset payload truncated");
        ds.payload.assign(data.begin() + static_cast<std::ptrdiff_t>(pos + 5),
                          data.begin() + static_cast<std::ptrdiff_t>(pos + 5 + len));
        sets.push_back(std::move(ds));
        pos += 5 + len;
    }
    return sets;
}

std::vector<PhotoshopResourceBlock> decode_resource_blocks(ByteView payload) {
    if (!has_photoshop_header(payload))
        raise(Errc::MalformedIptc, "APP13 segment lacks Photoshop 3.0 header");
    std::vector<PhotoshopResourceBlock> blocks;
    std::size_t pos = sizeof(kPhotoshopHeader);
    while (pos < payload.size()) {
        if (pos + 4 > payload.size()
            || std::memcmp(payload.data() + pos, kBlockSignature, 4) != 0)
            raise(Errc::MalformedIptc, "missing 8BIM signature");
        pos += 4;
        if (pos + 2 > payload.size())
            raise(Errc::MalformedIptc, "resource id truncated");
        PhotoshopResourceBlock block;
        block.resource_id = read_u16be(payload, pos);
        pos += 2;
        if (pos >= payload.size())
            raise(Errc::MalformedIptc, "resource name truncated");
        std::size_t name_len = payload[pos];
        std::size_t name_field = 1 + name_len;
        if (name_field % 2 != 0)
            ++name_field; // padded to even
        if (pos + name_field > payload.size())
            raise(Errc::MalformedIptc, "resource name truncated");
        block.name = to_string(payload.subspan(pos + 1, name_len));
        pos += name_field;
        if (pos + 4 > payload.size())
            raise(Errc::MalformedIptc, "resource data length truncated");
        std::size_t data_len = read_u32be(payload, pos);
        pos += 4;
        if (pos + data_len > payload.size())
            raise(Errc::MalformedIptc, "resource data truncated");
        block.data.assign(payload.begin() + static_cast<std::ptrdiff_t>(pos),
                          payload.begin() + static_cast<std::ptrdiff_t>(pos + data_len));
        pos += data_len;
        if (data_len % 2 != 0) {
            if (pos >= payload.size())
                raise(Errc::MalformedIptc, "missing data pad byte");
            ++pos;
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

Bytes encode_resource_blocks(const std::vector<PhotoshopResourceBlock>& blocks) {
    Bytes out;
    out.insert(out.end(), kPhotoshopHeader, kPhotoshopHeader + sizeof(kPhotoshopHeader));
    for (const auto& block : blocks) {
        out.insert(out.end(), kBlockSignature, kBlockSignature + 4);
        put_u16be(out, block.resource_id);
        out.push_back(static_cast<std::uint8_t>(block.name.size()));
        append(out, block.name);
        if ((1 + block.name.size()) % 2 != 0)
            out.push_back(0);
        put_u32be(out, static_cast<std::uint32_t>(block.data.size()));
        append(out, block.data);
        if (block.data.size() % 2 != 0)
            out.push_back(0);
    }
    return out;
}

std::vector<IptcDataSet> get_iptc(const jpeg::JpegImage& image) {
    Bytes stream;
    for (const auto& seg : image.segments) {
        if (seg.marker != jpeg::kMarkerApp13 || !has_photoshop_header(seg.payload))
            continue;
        for (const auto& block : decode_resource_blocks(seg.payload))
            if (block.resource_id == kIptcResourceId)
                append(stream, block.data);
    }
    return decode_iptc_stream(stream);
}

jpeg::JpegImage set_iptc(const jpeg::JpegImage& image,
                         const std::vector<IptcDataSet>& datasets) {
    Bytes stream;
    for (const auto& ds : datasets)
        append(stream, encode_iptc_dataset(ds.record, ds.dataset, ds.payload));

    PhotoshopResourceBlock block;
    block.resource_id = kIptcResourceId;
    block.data = std::move(stream);
    Bytes payload = encode_resource_blocks({block});
    if (payload.size() > jpeg::kMaxSegmentPayload)
        raise(Errc::BadLength, "assembled APP13 payload exceeds segment capacity");

    jpeg::JpegImage result;
    result.entropy_data = image.entropy_data;
    result.trailing = image.trailing;

    // Drop prior IPTC carriers, insert the new APP13 before the first
    // non-APPn segment.
    bool inserted = false;
    for (const auto& seg : image.segments) {
        if (seg.marker == jpeg::kMarkerApp13 && has_photoshop_header(seg.payload))
            continue;
        if (!inserted && !jpeg::is_app_marker(seg.marker)) {
            result.segments.push_back({jpeg::kMarkerApp13, payload});
            inserted = true;
        }
        result.segments.push_back(seg);
    }
    if (!inserted)
        result.segments.push_back({jpeg::kMarkerApp13, payload});
    return result;
}

} // namespace metascan::iptc
