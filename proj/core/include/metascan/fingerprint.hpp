#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace metascan::fingerprint {

struct ProbeSpec {
    std::string probe_id;
    std::string path; // relative to the host, begins with '/'
    std::vector<std::string> expect_markers; // any-of, case-sensitive substring
    bool is_core = false;
    std::string extension_name; // set when !is_core
};

struct ProbeResult {
    std::string probe_id;
    std::optional<int> status; // nullopt = transport failure
    std::string body_excerpt;  // first 64 KiB, only meaningful for 200
    std::string final_url;
};

struct ExtensionCatalogEntry {
    std::string name;
    std::string identifier_path; // component identifier or literal path
    std::string manifest_file;   // empty for literal-path entries (Sigplus)
    std::string marker;
};

struct Detection {
    std::string host;
    std::string base_path = "/";
    bool core_detected = false;
    std::set<std::string> extensions;
    std::vector<std::pair<std::string, std::string>> evidence; // probe_id, reason
};

std::vector<ExtensionCatalogEntry> default_extension_catalog();
std::vector<ExtensionCatalogEntry> load_extension_catalog(const std::string& catalog_text);

std::vector<ProbeSpec> core_probe_set(const std::string& base_path);
std::vector<ProbeSpec> extension_probe_set(const std::vector<ExtensionCatalogEntry>& catalog,
                                           const std::string& base_path);

std::string discover_base_path(const std::vector<std::string>& redirect_chain);

Detection evaluate(const std::string& host, const std::string& base_path,
                   const std::vector<ProbeResult>& results,
                   const std::vector<ProbeSpec>& probes);

} // namespace metascan::fingerprint
