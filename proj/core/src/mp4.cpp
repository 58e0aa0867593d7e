#include "metascan/mp4.hpp"

#include "metascan/error.hpp"

#include <algorithm>

namespace metascan::mp4 {

namespace {

bool is_plain_container(const std::string& type) {
    return type == "moov" || type == "udta" || type == "ilst";
}

std::vector<Mp4Box> parse_boxes(ByteView bytes, bool in_ilst);

Mp4Box parse_box(ByteView bytes, std::size_t& pos, bool in_ilst) {
    if (pos + 8 > bytes.size())
        raise(Errc::Truncated, "box header truncated");
    std::uint64_t size = read_u32be(bytes, pos);
    std::string type = to_string(bytes.subspan(pos + 4, 4));
    std::size_t header = 8;
    if (size == 1) {
        if (pos + 16 > bytes.size())
            raise(Errc::Truncated, "largesize truncated");
        size = read_u64be(bytes, pos + 8);
        header = 16;
        if (size < 16)
            raise(Errc::BadSize, "largesize smaller than header");
    } else if (size == 0) {
        size = bytes.size() - pos; // to end of file; normalized on write
    } else if (size < 8) {
        raise(Errc::BadSize, "box size in 2..7");
    }
    if (pos + size > bytes.size())
        raise(Errc::Truncated, "declared box size exceeds remaining bytes");

    Mp4Box box;
    box.box_type = type;
    ByteView body = bytes.subspan(pos + header, static_cast<std::size_t>(size) - header);
    if (is_plain_container(type) || in_ilst) {
        box.container = true;
        box.children = parse_boxes(body, type == "ilst");
    } else if (type == "meta") {
        if (body.size() < 4)
            raise(Errc::Truncated, "meta version/flags truncated");
        box.container = true;
        box.full_box_header.assign(body.begin(), body.begin() + 4);
        box.children = parse_boxes(body.subspan(4), false);
    } else {
        box.payload.assign(body.begin(), body.end());
    }
    pos += static_cast<std::size_t>(size);
    return box;
}

std::vector<Mp4Box> parse_boxes(ByteView bytes, bool in_ilst) {
    std::vector<Mp4Box> boxes;
    std::size_t pos = 0;
    while (pos < bytes.size())
        boxes.push_back(parse_box(bytes, pos, in_ilst));
    return boxes;
}

void serialize_box(const Mp4Box& box, Bytes& out) {
    Bytes body;
    append(body, box.full_box_header);
    if (box.container) {
        for (const Mp4Box& child : box.children)
            serialize_box(child, body);
    } else {
        append(body, box.payload);
    }

    std::uint64_t total = 8 + body.size();
    if (total <= 0xFFFFFFFFull) {
        put_u32be(out, static_cast<std::uint32_t>(total));
        append(out, box.box_type);
    } else {
        put_u32be(out, 1);
        append(out, box.box_type);
        put_u64be(out, total + 8);
    }
    append(out, body);
}

Mp4Box* find_child(std::vector<Mp4Box>& boxes, const std::string& type) {
    auto it = std::find_if(boxes.begin(), boxes.end(),
                           [&](const Mp4Box& b) { return b.box_type == type; });
    return it == boxes.end() ? nullptr : &*it;
}

const Mp4Box* find_child(const std::vector<Mp4Box>& boxes, const std::string& type) {
    auto it = std::find_if(boxes.begin(), boxes.end(),
                           [&](const Mp4Box& b) { return b.box_type == type; });
    return it == boxes.end() ? nullptr : &*it;
}

Mp4Box make_mdir_handler() {
    Mp4Box hdlr;
    hdlr.box_type = "hdlr";
    hdlr.payload.assign(8, 0); // version/flags + pre_defined
    append(hdlr.payload, std::string("mdir"));
    hdlr.payload.insert(hdlr.payload.end(), 12, 0);
    hdlr.payload.push_back(0); // empty name
    return hdlr;
}

Mp4Box make_data_atom(const std::string& value) {
    Mp4Box data;
    data.box_type = "data";
    put_u32be(data.payload, 1); // type indicator: UTF-8 text
    put_u32be(data.payload, 0); // locale
    append(data.payload, value);
    return data;
}

} // namespace

std::vector<Mp4Box> parse_mp4(ByteView bytes) { return parse_boxes(bytes, false); }

Bytes serialize_mp4(const std::vector<Mp4Box>& boxes) {
    Bytes out;
    for (const Mp4Box& box : boxes)
        serialize_box(box, out);
    return out;
}

std::vector<Mp4Box> set_mp4_metadata(std::vector<Mp4Box> boxes,
                                     const std::map<std::string, std::string>& fields) {
    Mp4Box* moov = find_child(boxes, "moov");
    if (!moov)
        raise(Errc::NoMoov, "input has no moov box");

    Mp4Box* udta = find_child(moov->children, "udta");
    if (!udta) {
        moov->children.push_back({.box_type = "udta", .container = true});
        udta = &moov->children.back();
    }
    Mp4Box* meta = find_child(udta->children, "meta");
    if (!meta) {
        Mp4Box fresh;
        fresh.box_type = "meta";
        fresh.container = true;
        fresh.full_box_header.assign(4, 0);
        fresh.children.push_back(make_mdir_handler());
        udta->children.push_back(std::move(fresh));
        meta = &udta->children.back();
    }
    Mp4Box* ilst = find_child(meta->children, "ilst");
    if (!ilst) {
        meta->children.push_back({.box_type = "ilst", .container = true});
        ilst = &meta->children.back();
    }

    for (const auto& [code, value] : fields) {
        Mp4Box item;
        item.box_type = code;
        item.container = true;
        item.children.push_back(make_data_atom(value));
        if (Mp4Box* existing = find_child(ilst->children, code))
            *existing = std::move(item);
        else
            ilst->children.push_back(std::move(item));
    }
    return boxes;
}

std::map<std::string, std::string> extract_mp4_metadata(const std::vector<Mp4Box>& boxes) {
    std::map<std::string, std::string> fields;
    const Mp4Box* moov = find_child(boxes, "moov");
    if (!moov)
        return fields;
    const Mp4Box* udta = find_child(moov->children, "udta");
    if (!udta)
        return fields;
    const Mp4Box* meta = find_child(udta->children, "meta");
    if (!meta)
        return fields;
    const Mp4Box* ilst = find_child(meta->children, "ilst");
    if (!ilst)
        return fields;

    for (const Mp4Box& item : ilst->children) {
        const Mp4Box* data = find_child(item.children, "data");
        if (!data || data->payload.size() < 8)
            continue;
        if (read_u32be(data->payload, 0) != 1)
            continue; // not UTF-8 text
        fields[item.box_type] = to_string(ByteView(data->payload).subspan(8));
    }
    return fields;
}

} // namespace metascan::mp4
