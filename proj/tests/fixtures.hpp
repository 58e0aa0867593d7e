// Hand-assembled media fixtures used across the suites.
#pragma once

#include "metascan/bytes.hpp"
#include "metascan/id3.hpp"
#include "metascan/iptc.hpp"
#include "metascan/jpeg.hpp"
#include "metascan/mp4.hpp"

#include <random>
#include <string>

namespace fixtures {

using metascan::Bytes;

inline void push(Bytes& out, std::initializer_list<int> bytes) {
    for (int b : bytes)
        out.push_back(static_cast<std::uint8_t>(b));
}

// Minimal JFIF APP0 payload.
inline Bytes jfif_app0_payload() {
    Bytes p;
    metascan::append(p, std::string("JFIF"));
    push(p, {0x00, 0x01, 0x01, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00});
    return p;
}

// APP13 payload: "Photoshop 3.0\0" + one 8BIM resource 0x0404 with the
// given IPTC stream.
inline Bytes app13_payload(const Bytes& iptc_stream) {
    Bytes p;
    metascan::append(p, std::string("Photoshop 3.0"));
    p.push_back(0);
    metascan::append(p, std::string("8BIM"));
    metascan::put_u16be(p, 0x0404);
    push(p, {0x00, 0x00}); // empty Pascal name, padded
    metascan::put_u32be(p, static_cast<std::uint32_t>(iptc_stream.size()));
    metascan::append(p, iptc_stream);
    if (iptc_stream.size() % 2 != 0)
        p.push_back(0);
    return p;
}

inline Bytes iptc_dataset(int record, int dataset, const std::string& value) {
    Bytes b;
    b.push_back(0x1C);
    b.push_back(static_cast<std::uint8_t>(record));
    b.push_back(static_cast<std::uint8_t>(dataset));
    metascan::put_u16be(b, static_cast<std::uint16_t>(value.size()));
    metascan::append(b, value);
    return b;
}

inline void append_segment(Bytes& out, int marker, const Bytes& payload) {
    push(out, {0xFF, marker});
    metascan::put_u16be(out, static_cast<std::uint16_t>(payload.size() + 2));
    metascan::append(out, payload);
}

// A syntactically complete JPEG with APP0, optional APP13, a tiny SOS and
// entropy run.
inline Bytes make_jpeg(const Bytes* app13, const Bytes& entropy) {
    Bytes out;
    push(out, {0xFF, 0xD8});
    append_segment(out, 0xE0, jfif_app0_payload());
    if (app13)
        append_segment(out, 0xED, *app13);
    Bytes sos;
    push(sos, {0x01, 0x01, 0x00, 0x00, 0x3F, 0x00});
    append_segment(out, 0xDA, sos);
    metascan::append(out, entropy);
    push(out, {0xFF, 0xD9});
    return out;
}

// The `city.jpg` fixture: APP0 JFIF + APP13 carrying IPTC City="Test".
inline Bytes city_jpg() {
    Bytes app13 = app13_payload(iptc_dataset(2, 90, "Test"));
    Bytes entropy;
    push(entropy, {0x12, 0x34, 0x56, 0x78, 0x00, 0x11, 0x22});
    return make_jpeg(&app13, entropy);
}

inline Bytes clean_jpg() {
    Bytes entropy;
    push(entropy, {0xAB, 0xCD, 0xEF, 0x01, 0x02});
    return make_jpeg(nullptr, entropy);
}

// ID3v2.3 tag with one TIT2 frame (encoding 0, "Hi") followed by fake audio.
inline Bytes tit2_mp3() {
    Bytes frame;
    metascan::append(frame, std::string("TIT2"));
    metascan::put_u32be(frame, 3); // encoding byte + "Hi"
    metascan::put_u16be(frame, 0);
    push(frame, {0x00});
    metascan::append(frame, std::string("Hi"));

    Bytes out;
    metascan::append(out, std::string("ID3"));
    push(out, {0x03, 0x00, 0x00});
    metascan::append(out, metascan::id3::syncsafe_encode(static_cast<std::uint32_t>(frame.size())));
    metascan::append(out, frame);
    push(out, {0xFF, 0xFB, 0x90, 0x00, 0x01, 0x02, 0x03}); // stand-in audio frame
    return out;
}

inline Bytes clean_mp3() {
    Bytes out;
    push(out, {0xFF, 0xFB, 0x90, 0x00, 0x04, 0x05, 0x06, 0x07});
    return out;
}

inline void append_box(Bytes& out, const std::string& type, const Bytes& payload) {
    metascan::put_u32be(out, static_cast<std::uint32_t>(8 + payload.size()));
    metascan::append(out, type);
    metascan::append(out, payload);
}

// `tiny.mp4` fixture: ftyp + moov containing mvhd stub and udta.
inline Bytes tiny_mp4() {
    Bytes ftyp;
    metascan::append(ftyp, std::string("isom"));
    metascan::put_u32be(ftyp, 0x200);
    metascan::append(ftyp, std::string("isomiso2"));

    Bytes mvhd(100, 0);
    Bytes moov_payload;
    append_box(moov_payload, "mvhd", mvhd);
    Bytes udta_payload; // empty container
    append_box(moov_payload, "udta", udta_payload);

    Bytes mdat;
    push(mdat, {0xDE, 0xAD, 0xBE, 0xEF});

    Bytes out;
    append_box(out, "ftyp", ftyp);
    append_box(out, "moov", moov_payload);
    append_box(out, "mdat", mdat);
    return out;
}

inline Bytes no_moov_mp4() {
    Bytes ftyp;
    metascan::append(ftyp, std::string("isom"));
    Bytes out;
    append_box(out, "ftyp", ftyp);
    return out;
}

inline std::string random_printable(std::mt19937& rng, std::size_t max_len) {
    std::uniform_int_distribution<int> len_dist(1, static_cast<int>(max_len));
    std::uniform_int_distribution<int> ch_dist(0x20, 0x7E);
    std::string s;
    int n = len_dist(rng);
    for (int i = 0; i < n; ++i)
        s.push_back(static_cast<char>(ch_dist(rng)));
    return s;
}

} // namespace fixtures
