#include "metascan/payload.hpp"

#include "metascan/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace metascan::payload {

namespace {

using nlohmann::json;

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

bool valid_plan_id(const std::string& id) {
    if (id.empty() || id.size() > 8)
        return false;
    return std::all_of(id.begin(), id.end(),
                       [](unsigned char c) { return std::isalnum(c) != 0; });
}

std::string render(const PayloadVector& vec, const std::string& marker) {
    return replace_all(vec.body, kMarkerPlaceholder, marker);
}

const FieldDescriptor* find_field(const std::vector<FieldDescriptor>& catalog,
                                  const FieldKey& key) {
    for (const auto& field : catalog)
        if (field.key == key)
            return &field;
    return nullptr;
}

void add_entry(InjectionPlan& plan, const FieldDescriptor& field, const PayloadVector& vec) {
    std::string marker = make_marker(plan.plan_id, field.key);
    std::string rendered = render(vec, marker);
    if (field.max_length != 0 && rendered.size() > field.max_length) {
        plan.skipped.push_back({field.key, vec.id, "FieldTooLong"});
        return;
    }
    plan.entries.push_back({field.key, vec.id, std::move(rendered), std::move(marker)});
}

// Decodes HTML entities and \uXXXX escapes; used to recognize encoded
// reflections of a payload.
std::string decode_escapes(const std::string& body) {
    static const std::map<std::string, char> entities = {
        {"&lt;", '<'},  {"&gt;", '>'},   {"&quot;", '"'},
        {"&#39;", '\''}, {"&apos;", '\''}, {"&amp;", '&'},
    };
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (c == '&') {
            bool matched = false;
            for (const auto& [ent, ch] : entities) {
                if (body.compare(i, ent.size(), ent) == 0) {
                    out.push_back(ch);
                    i += ent.size();
                    matched = true;
                    break;
                }
            }
            if (matched)
                continue;
            // numeric references: &#60; &#x3C;
            if (i + 3 < body.size() && body[i + 1] == '#') {
                std::size_t j = i + 2;
                int base = 10;
                if (body[j] == 'x' || body[j] == 'X') {
                    base = 16;
                    ++j;
                }
                unsigned long value = 0;
                std::size_t start = j;
                while (j < body.size() && body[j] != ';') {
                    char d = body[j];
                    int digit;
                    if (d >= '0' && d <= '9')
                        digit = d - '0';
                    else if (base == 16 && d >= 'a' && d <= 'f')
                        digit = d - 'a' + 10;
                    else if (base == 16 && d >= 'A' && d <= 'F')
                        digit = d - 'A' + 10;
                    else
                        break;
                    value = value * static_cast<unsigned long>(base) + static_cast<unsigned long>(digit);
                    ++j;
                }
                if (j < body.size() && body[j] == ';' && j > start && value < 128) {
                    out.push_back(static_cast<char>(value));
                    i = j + 1;
                    continue;
                }
            }
        } else if (c == '\\' && i + 5 < body.size() && body[i + 1] == 'u') {
            unsigned value = 0;
            bool ok = true;
            for (std::size_t k = i + 2; k < i + 6; ++k) {
                char d = body[k];
                value <<= 4;
                if (d >= '0' && d <= '9')
                    value |= static_cast<unsigned>(d - '0');
                else if (d >= 'a' && d <= 'f')
                    value |= static_cast<unsigned>(d - 'a' + 10);
                else if (d >= 'A' && d <= 'F')
                    value |= static_cast<unsigned>(d - 'A' + 10);
                else
                    ok = false;
            }
            if (ok && value < 128) {
                out.push_back(static_cast<char>(value));
                i += 6;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

// The breakout characters whose encoding decides Encoded vs Raw.
const char kBreakoutChars[] = {'<', '>', '"', '\''};

std::vector<std::string> encoded_forms(char c) {
    switch (c) {
    case '<': return {"&lt;", "&#60;", "&#x3c;", "&#x3C;", "\\u003c", "\\u003C"};
    case '>': return {"&gt;", "&#62;", "&#x3e;", "&#x3E;", "\\u003e", "\\u003E"};
    case '"': return {"&quot;", "&#34;", "&#x22;", "\\u0022"};
    case '\'': return {"&#39;", "&apos;", "&#x27;", "\\u0027"};
    }
    return {};
}

// Marker reflected but payload transformed: Encoded only when every breakout
// character of the payload shows up in an encoded form near the marker.
bool encoded_near_marker(const std::string& body, const std::string& marker,
                         const std::string& payload) {
    std::size_t pos = body.find(marker);
    if (pos == std::string::npos)
        return false;
    std::size_t radius = payload.size() * 8 + 64;
    std::size_t begin = pos > radius ? pos - radius : 0;
    std::size_t end = std::min(body.size(), pos + marker.size() + radius);
    std::string window = body.substr(begin, end - begin);
    for (char c : kBreakoutChars) {
        if (payload.find(c) == std::string::npos)
            continue;
        bool found = false;
        for (const auto& form : encoded_forms(c))
            if (window.find(form) != std::string::npos) {
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    return true;
}

} // namespace

const char* reflect_status_name(ReflectStatus status) {
    switch (status) {
    case ReflectStatus::Absent: return "Absent";
    case ReflectStatus::Encoded: return "Encoded";
    case ReflectStatus::Raw: return "Raw";
    }
    return "?";
}

std::vector<PayloadVector> load_vectors(const std::string& catalog_text) {
    std::vector<PayloadVector> vectors;
    std::set<std::string> seen;
    std::istringstream in(catalog_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object() || !record.contains("id")
            || !record.contains("body") || !record["id"].is_string()
            || !record["body"].is_string() || record["body"].get<std::string>().empty())
            raise(Errc::MalformedRecord, "vector catalog line " + std::to_string(line_no));
        PayloadVector vec;
        vec.id = record["id"].get<std::string>();
        vec.body = record["body"].get<std::string>();
        if (vec.id.empty())
            raise(Errc::MalformedRecord, "empty id at line " + std::to_string(line_no));
        if (record.contains("tags"))
            for (const auto& tag : record["tags"])
                vec.tags.insert(tag.get<std::string>());
        if (!seen.insert(vec.id).second)
            raise(Errc::DuplicateId, vec.id);
        vectors.push_back(std::move(vec));
    }
    return vectors;
}

std::vector<FieldDescriptor> load_fields(const std::string& catalog_text) {
    std::vector<FieldDescriptor> fields;
    std::istringstream in(catalog_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object() || !record.contains("key")
            || !record["key"].is_string())
            raise(Errc::MalformedRecord, "field catalog line " + std::to_string(line_no));
        FieldDescriptor field;
        field.key = record["key"].get<std::string>();
        field.display_name = record.value("display_name", field.key);
        field.max_length = record.value("max_length", std::size_t{0});
        fields.push_back(std::move(field));
    }
    return fields;
}

std::vector<FieldDescriptor> default_fields(MediaFormat format) {
    // JPEG limits follow the IPTC-IIM application record tables.
    switch (format) {
    case MediaFormat::Jpeg:
        return {
            {"iptc:2:5", "Object Name", 64},
            {"iptc:2:25", "Keywords", 64},
            {"iptc:2:40", "Special Instructions", 256},
            {"iptc:2:80", "By-line", 32},
            {"iptc:2:85", "By-line Title", 32},
            {"iptc:2:90", "City", 32},
            {"iptc:2:92", "Sublocation", 32},
            {"iptc:2:95", "Province/State", 32},
            {"iptc:2:101", "Country/Primary Location Name", 64},
            {"iptc:2:105", "Headline", 256},
            {"iptc:2:110", "Credit", 32},
            {"iptc:2:115", "Source", 32},
            {"iptc:2:116", "Copyright Notice", 128},
            {"iptc:2:120", "Caption/Abstract", 2000},
            {"iptc:2:122", "Writer/Editor", 32},
        };
    case MediaFormat::Mp3:
        return {
            {"id3:TIT2", "Title", 0},
            {"id3:TPE1", "Artist", 0},
            {"id3:TALB", "Album", 0},
            {"id3:COMM", "Comment", 0},
            {"id3:TCON", "Genre", 0},
        };
    case MediaFormat::Mp4:
        // keys carry UTF-8 (C2 A9); the wire fourcc uses the bare A9 byte
        return {
            {"mp4:\xC2\xA9" "nam", "Title", 0},
            {"mp4:\xC2\xA9" "ART", "Artist", 0},
            {"mp4:\xC2\xA9" "alb", "Album", 0},
            {"mp4:\xC2\xA9" "cmt", "Comment", 0},
        };
    }
    return {};
}

std::string make_marker(const std::string& plan_id, const FieldKey& field) {
    if (!valid_plan_id(plan_id))
        raise(Errc::BadPlanId, plan_id);
    std::string canonical = field;
    std::replace(canonical.begin(), canonical.end(), ':', '.');
    return "MA" + plan_id + "-" + canonical;
}

InjectionPlan build_plan(MediaFormat format, const std::vector<FieldKey>& selected_fields,
                         const std::vector<FieldDescriptor>& field_catalog,
                         const std::vector<PayloadVector>& vectors, PlanMode mode,
                         const std::string& plan_id) {
    if (vectors.empty())
        raise(Errc::EmptyVectorSet, "no payload vectors");
    if (!valid_plan_id(plan_id))
        raise(Errc::BadPlanId, plan_id);

    std::vector<const FieldDescriptor*> targets;
    if (selected_fields.empty()) {
        for (const auto& field : field_catalog)
            targets.push_back(&field);
    } else {
        for (const auto& key : selected_fields) {
            const FieldDescriptor* field = find_field(field_catalog, key);
            if (!field)
                raise(Errc::UnknownField, key);
            targets.push_back(field);
        }
    }

    InjectionPlan plan;
    plan.plan_id = plan_id;
    plan.format = format;

    for (const FieldDescriptor* field : targets) {
        if (mode == PlanMode::SameVectorAllFields) {
            add_entry(plan, *field, vectors.front());
            continue;
        }
        // PerFieldAttributed: first vector whose rendered payload fits
        bool placed = false;
        for (const auto& vec : vectors) {
            std::string marker = make_marker(plan_id, field->key);
            std::string rendered = render(vec, marker);
            if (field->max_length == 0 || rendered.size() <= field->max_length) {
                plan.entries.push_back({field->key, vec.id, std::move(rendered), std::move(marker)});
                placed = true;
                break;
            }
            plan.skipped.push_back({field->key, vec.id, "FieldTooLong"});
        }
        (void)placed;
    }
    return plan;
}

std::vector<InjectionPlan> build_sweep(MediaFormat format,
                                       const std::vector<FieldKey>& selected_fields,
                                       const std::vector<FieldDescriptor>& field_catalog,
                                       const std::vector<PayloadVector>& vectors,
                                       const std::string& plan_id) {
    if (vectors.empty())
        raise(Errc::EmptyVectorSet, "no payload vectors");
    std::vector<InjectionPlan> plans;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        std::string sweep_id = plan_id + std::to_string(i);
        if (!valid_plan_id(sweep_id))
            raise(Errc::BadPlanId, sweep_id);
        plans.push_back(build_plan(format, selected_fields, field_catalog, {vectors[i]},
                                   PlanMode::SameVectorAllFields, sweep_id));
    }
    return plans;
}

std::pair<Bytes, std::vector<InjectionRecord>> apply_plan(ByteView media_bytes,
                                                          const InjectionPlan& plan) {
    std::vector<InjectionRecord> records;
    if (plan.entries.empty())
        return {Bytes(media_bytes.begin(), media_bytes.end()), records};

    std::map<FieldKey, std::string> fields;
    for (const auto& entry : plan.entries) {
        fields[entry.field] = entry.rendered_payload;
        records.push_back({entry.field, entry.vector_id, entry.rendered_payload, entry.marker, ""});
    }
    Bytes injected = set_metadata(media_bytes, plan.format, fields);
    return {std::move(injected), std::move(records)};
}

std::vector<std::pair<InjectionRecord, ReflectStatus>>
reflect_check(const std::string& response_body, const std::vector<InjectionRecord>& records) {
    std::vector<std::pair<InjectionRecord, ReflectStatus>> results;
    const std::string decoded = decode_escapes(response_body);
    for (const auto& record : records) {
        ReflectStatus status = ReflectStatus::Absent;
        if (response_body.find(record.rendered_payload) != std::string::npos)
            status = ReflectStatus::Raw;
        else if (decoded.find(record.rendered_payload) != std::string::npos)
            status = ReflectStatus::Encoded;
        else if (!record.marker.empty()
                 && record.rendered_payload.find(record.marker) != std::string::npos
                 && encoded_near_marker(response_body, record.marker, record.rendered_payload))
            status = ReflectStatus::Encoded;
        results.emplace_back(record, status);
    }
    return results;
}

} // namespace metascan::payload
