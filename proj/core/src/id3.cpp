#include "metascan/id3.hpp"

#include "metascan/error.hpp"

#include <cstring>

namespace metascan::id3 {

namespace {

std::string latin1_to_utf8(ByteView data) {
    std::string out;
    out.reserve(data.size());
    for (std::uint8_t c : data) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xC0 | c >> 6));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

// Returns false when the text contains a code point above U+00FF.
bool utf8_to_latin1(const std::string& text, Bytes& out) {
    out.clear();
    std::size_t i = 0;
    while (i < text.size()) {
        std::uint8_t c = static_cast<std::uint8_t>(text[i]);
        if (c < 0x80) {
            out.push_back(c);
            ++i;
        } else if ((c & 0xE0) == 0xC0 && i + 1 < text.size()) {
            std::uint32_t cp = (c & 0x1F) << 6
                | (static_cast<std::uint8_t>(text[i + 1]) & 0x3F);
            if (cp > 0xFF)
                return false;
            out.push_back(static_cast<std::uint8_t>(cp));
            i += 2;
        } else {
            return false;
        }
    }
    return true;
}

std::string strip_trailing_nul(std::string s) {
    while (!s.empty() && s.back() == '\0')
        s.pop_back();
    return s;
}

} // namespace

bool valid_frame_id(const std::string& id) {
    if (id.size() != 4)
        return false;
    for (char c : id)
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')))
            return false;
    return true;
}

Bytes syncsafe_encode(std::uint32_t n) {
    if (n >= (1u << 28))
        raise(Errc::OutOfRange, "syncsafe value must be < 2^28");
    return {static_cast<std::uint8_t>(n >> 21 & 0x7F), static_cast<std::uint8_t>(n >> 14 & 0x7F),
            static_cast<std::uint8_t>(n >> 7 & 0x7F), static_cast<std::uint8_t>(n & 0x7F)};
}

std::uint32_t syncsafe_decode(ByteView b) {
    if (b.size() != 4)
        raise(Errc::NotSyncsafe, "syncsafe field must be 4 bytes");
    std::uint32_t v = 0;
    for (std::uint8_t byte : b) {
        if (byte >= 0x80)
            raise(Errc::NotSyncsafe, "high bit set in syncsafe byte");
        v = v << 7 | byte;
    }
    return v;
}

std::pair<std::optional<Id3Tag>, Bytes> parse_id3(ByteView bytes) {
    if (bytes.size() < 3 || std::memcmp(bytes.data(), "ID3", 3) != 0)
        return {std::nullopt, Bytes(bytes.begin(), bytes.end())};
    if (bytes.size() < 10)
        raise(Errc::Truncated, "ID3 header truncated");

    int major = bytes[3];
    if (major != 3 && major != 4)
        raise(Errc::UnsupportedVersion, "ID3v2." + std::to_string(major));
    std::uint8_t flags = bytes[5];
    if (flags & 0x80)
        raise(Errc::UnsupportedVersion, "unsynchronized tags are not supported");
    if (flags & 0x40)
        raise(Errc::UnsupportedVersion, "extended headers are not supported");

    std::uint32_t tag_size = syncsafe_decode(bytes.subspan(6, 4));
    if (10 + static_cast<std::size_t>(tag_size) > bytes.size())
        raise(Errc::Truncated, "declared tag size exceeds input");

    Id3Tag tag;
    tag.major_version = major;
    std::size_t pos = 10;
    const std::size_t end = 10 + tag_size;
    while (pos < end) {
        if (bytes[pos] == 0)
            break; // padding
        if (pos + 10 > end)
            raise(Errc::Truncated, "frame header truncated");
        Id3Frame frame;
        frame.frame_id = to_string(bytes.subspan(pos, 4));
        if (!valid_frame_id(frame.frame_id))
            raise(Errc::BadFrameId, frame.frame_id);
        std::uint32_t size = major == 4 ? syncsafe_decode(bytes.subspan(pos + 4, 4))
                                        : read_u32be(bytes, pos + 4);
        pos += 10;
        if (pos + size > end)
            raise(Errc::Truncated, "frame payload truncated");
        if (size > 0) {
            frame.encoding = bytes[pos];
            ByteView body = bytes.subspan(pos + 1, size - 1);
            if (frame.encoding == 0)
                frame.text = strip_trailing_nul(latin1_to_utf8(body));
            else if (frame.encoding == 3)
                frame.text = strip_trailing_nul(to_string(body));
            else
                raise(Errc::UnsupportedVersion, "UTF-16 text encodings are not supported");
        }
        tag.frames.push_back(std::move(frame));
        pos += size;
    }
    Bytes audio(bytes.begin() + static_cast<std::ptrdiff_t>(end), bytes.end());
    return {std::move(tag), std::move(audio)};
}

Bytes serialize_id3(const Id3Tag& tag, ByteView audio) {
    Bytes frames;
    for (const Id3Frame& frame : tag.frames) {
        if (!valid_frame_id(frame.frame_id))
            raise(Errc::BadFrameId, frame.frame_id);
        Bytes body;
        Bytes latin1;
        if (utf8_to_latin1(frame.text, latin1)) {
            body.push_back(0);
            append(body, latin1);
        } else {
            body.push_back(3);
            append(body, frame.text);
        }
        append(frames, frame.frame_id);
        put_u32be(frames, static_cast<std::uint32_t>(body.size()));
        put_u16be(frames, 0); // frame flags
        append(frames, body);
    }

    Bytes out;
    append(out, std::string("ID3"));
    out.push_back(3); // writer always emits v2.3
    out.push_back(0);
    out.push_back(0);
    append(out, syncsafe_encode(static_cast<std::uint32_t>(frames.size())));
    append(out, frames);
    append(out, audio);
    return out;
}

} // namespace metascan::id3
