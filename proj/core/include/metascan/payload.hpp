#pragma once

#include "metascan/bytes.hpp"
#include "metascan/metadata.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace metascan::payload {

constexpr const char* kMarkerPlaceholder = "{{M}}";

struct PayloadVector {
    std::string id;
    std::string body; // may contain the "{{M}}" marker placeholder
    std::set<std::string> tags;
};

struct FieldDescriptor {
    FieldKey key;
    std::string display_name;
    std::size_t max_length = 0; // 0 = unlimited
};

enum class PlanMode { SameVectorAllFields, PerFieldAttributed, FullSweep };

struct PlanEntry {
    FieldKey field;
    std::string vector_id;
    std::string rendered_payload;
    std::string marker;
};

struct SkippedEntry {
    FieldKey field;
    std::string vector_id;
    std::string reason;
};

struct InjectionPlan {
    std::string plan_id;
    MediaFormat format = MediaFormat::Jpeg;
    std::vector<PlanEntry> entries;
    std::vector<SkippedEntry> skipped;
};

struct InjectionRecord {
    FieldKey field;
    std::string vector_id;
    std::string rendered_payload;
    std::string marker;
    std::string output_file;
};

enum class ReflectStatus { Absent, Encoded, Raw };

const char* reflect_status_name(ReflectStatus status);

/// Catalog files are JSON lines, one record per line:
///   {"id": "...", "body": "...", "tags": ["..."]}
std::vector<PayloadVector> load_vectors(const std::string& catalog_text);

/// Same framing: {"key": "...", "display_name": "...", "max_length": N}
/// max_length 0 means unlimited.
std::vector<FieldDescriptor> load_fields(const std::string& catalog_text);

/// Bundled default field catalog for a format.
std::vector<FieldDescriptor> default_fields(MediaFormat format);

std::string make_marker(const std::string& plan_id, const FieldKey& field);

InjectionPlan build_plan(MediaFormat format,
                         const std::vector<FieldKey>& selected_fields, // empty = ALL
                         const std::vector<FieldDescriptor>& field_catalog,
                         const std::vector<PayloadVector>& vectors,
                         PlanMode mode, const std::string& plan_id);

/// FullSweep: one plan per vector, plan ids suffixed with the vector index.
std::vector<InjectionPlan> build_sweep(MediaFormat format,
                                       const std::vector<FieldKey>& selected_fields,
                                       const std::vector<FieldDescriptor>& field_catalog,
                                       const std::vector<PayloadVector>& vectors,
                                       const std::string& plan_id);

std::pair<Bytes, std::vector<InjectionRecord>> apply_plan(ByteView media_bytes,
                                                          const InjectionPlan& plan);

std::vector<std::pair<InjectionRecord, ReflectStatus>>
reflect_check(const std::string& response_body, const std::vector<InjectionRecord>& records);

} // namespace metascan::payload
