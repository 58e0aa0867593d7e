#include "metascan/metadata.hpp"

#include "metascan/error.hpp"
#include "metascan/id3.hpp"
#include "metascan/iptc.hpp"
#include "metascan/jpeg.hpp"
#include "metascan/mp4.hpp"

#include <charconv>

namespace metascan {

namespace {

FieldKey iptc_key(int record, int dataset) {
    return "iptc:" + std::to_string(record) + ":" + std::to_string(dataset);
}

// "iptc:2:105" -> (2, 105)
std::pair<int, int> parse_iptc_key(const FieldKey& key) {
    std::size_t a = key.find(':');
    std::size_t b = key.find(':', a + 1);
    if (a == FieldKey::npos || b == FieldKey::npos)
        raise(Errc::UnknownField, key);
    int record = 0;
    int dataset = 0;
    auto r1 = std::from_chars(key.data() + a + 1, key.data() + b, record);
    auto r2 = std::from_chars(key.data() + b + 1, key.data() + key.size(), dataset);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || record < 0 || record > 255
        || dataset < 0 || dataset > 255)
        raise(Errc::UnknownField, key);
    return {record, dataset};
}

// MP4 item codes: FieldKeys are UTF-8, the wire fourcc is Latin-1
// (e.g. the copyright sign is C2 A9 in a key, the single byte A9 on the wire).
std::string fourcc_to_utf8(const std::string& code) {
    std::string out;
    for (unsigned char c : code) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xC0 | c >> 6));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

std::string utf8_to_fourcc(const std::string& code) {
    std::string out;
    std::size_t i = 0;
    while (i < code.size()) {
        unsigned char c = static_cast<unsigned char>(code[i]);
        if ((c & 0xE0) == 0xC0 && i + 1 < code.size()) {
            out.push_back(static_cast<char>((c & 0x1F) << 6
                | (static_cast<unsigned char>(code[i + 1]) & 0x3F)));
            i += 2;
        } else {
            out.push_back(static_cast<char>(c));
            ++i;
        }
    }
    return out;
}

std::string strip_prefix(const FieldKey& key, const char* prefix) {
    std::string p(prefix);
    if (key.rfind(p, 0) != 0 || key.size() <= p.size())
        raise(Errc::UnknownField, key);
    return key.substr(p.size());
}

} // namespace

const char* format_name(MediaFormat format) {
    switch (format) {
    case MediaFormat::Jpeg: return "jpg";
    case MediaFormat::Mp3: return "mp3";
    case MediaFormat::Mp4: return "mp4";
    }
    return "?";
}

MediaFormat parse_format_name(const std::string& name) {
    if (name == "jpg" || name == "jpeg")
        return MediaFormat::Jpeg;
    if (name == "mp3")
        return MediaFormat::Mp3;
    if (name == "mp4")
        return MediaFormat::Mp4;
    raise(Errc::UnknownField, "unknown format: " + name);
}

MetadataDocument extract_metadata(ByteView bytes, MediaFormat format) {
    MetadataDocument doc;
    doc.format = format;
    switch (format) {
    case MediaFormat::Jpeg: {
        auto image = jpeg::parse_jpeg(bytes);
        for (const auto& ds : iptc::get_iptc(image))
            doc.fields[iptc_key(ds.record, ds.dataset)] = to_string(ds.payload);
        break;
    }
    case MediaFormat::Mp3: {
        auto [tag, audio] = id3::parse_id3(bytes);
        if (tag)
            for (const auto& frame : tag->frames)
                doc.fields["id3:" + frame.frame_id] = frame.text;
        break;
    }
    case MediaFormat::Mp4: {
        auto boxes = mp4::parse_mp4(bytes);
        for (const auto& [code, value] : mp4::extract_mp4_metadata(boxes))
            doc.fields["mp4:" + fourcc_to_utf8(code)] = value;
        break;
    }
    }
    return doc;
}

Bytes set_metadata(ByteView bytes, MediaFormat format,
                   const std::map<FieldKey, std::string>& fields) {
    switch (format) {
    case MediaFormat::Jpeg: {
        auto image = jpeg::parse_jpeg(bytes);
        // keep untouched datasets, replace assigned ones
        std::map<std::pair<int, int>, std::string> merged;
        for (const auto& ds : iptc::get_iptc(image))
            merged[{ds.record, ds.dataset}] = to_string(ds.payload);
        for (const auto& [key, value] : fields)
            merged[parse_iptc_key(key)] = value;
        std::vector<iptc::IptcDataSet> datasets;
        for (const auto& [rd, value] : merged)
            datasets.push_back({static_cast<std::uint8_t>(rd.first),
                                static_cast<std::uint8_t>(rd.second), to_bytes(value)});
        return jpeg::serialize_jpeg(iptc::set_iptc(image, datasets));
    }
    case MediaFormat::Mp3: {
        auto [tag, audio] = id3::parse_id3(bytes);
        id3::Id3Tag out = tag.value_or(id3::Id3Tag{});
        for (const auto& [key, value] : fields) {
            std::string frame_id = strip_prefix(key, "id3:");
            bool replaced = false;
            for (auto& frame : out.frames)
                if (frame.frame_id == frame_id) {
                    frame.text = value;
                    replaced = true;
                }
            if (!replaced)
                out.frames.push_back({frame_id, 0, value});
        }
        return id3::serialize_id3(out, audio);
    }
    case MediaFormat::Mp4: {
        auto boxes = mp4::parse_mp4(bytes);
        std::map<std::string, std::string> items;
        for (const auto& [key, value] : fields)
            items[utf8_to_fourcc(strip_prefix(key, "mp4:"))] = value;
        return mp4::serialize_mp4(mp4::set_mp4_metadata(std::move(boxes), items));
    }
    }
    raise(Errc::UnknownField, "bad format");
}

} // namespace metascan
