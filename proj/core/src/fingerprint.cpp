#include "metascan/fingerprint.hpp"

#include "metascan/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace metascan::fingerprint {

namespace {

bool valid_base_path(const std::string& base) {
    return !base.empty() && base.front() == '/' && base.back() == '/';
}

std::string join(const std::string& base, const std::string& rel) {
    // base ends with '/', rel must not start with one
    return base + rel;
}

std::string component_short_name(const std::string& identifier) {
    if (identifier.rfind("com_", 0) == 0)
        return identifier.substr(4);
    return identifier;
}

} // namespace

std::vector<ExtensionCatalogEntry> default_extension_catalog() {
    return {
        {"Akeeba Backup", "com_akeeba", "", "Akeeba"},
        {"AcyMailing", "com_acymailing", "", "AcyMailing"},
        {"Advanced Module Manager", "com_advancedmodules", "", "Advanced Module Manager"},
        {"JEvents", "com_jevents", "", "JEvents"},
        {"eXtplorer", "com_extplorer", "", "eXtplorer"},
        {"Phoca Gallery", "com_phocagallery", "", "Phoca Gallery"},
        {"Community Builder", "com_comprofiler", "", "Community Builder"},
        {"Ark Editor", "com_arkeditor", "", "Ark Editor"},
        {"Ozio Gallery", "com_oziogallery3", "", "Ozio Gallery"},
        {"Sigplus", "/media/sigplus/js/initialization.js", "", "sigplus"},
    };
}

std::vector<ExtensionCatalogEntry> load_extension_catalog(const std::string& catalog_text) {
    std::vector<ExtensionCatalogEntry> catalog;
    std::istringstream in(catalog_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object())
            raise(Errc::MalformedRecord, "extension catalog line " + std::to_string(line_no));
        ExtensionCatalogEntry entry;
        entry.name = record.at("name").get<std::string>();
        entry.identifier_path = record.at("identifier_path").get<std::string>();
        entry.manifest_file = record.value("manifest_file", "");
        entry.marker = record.at("marker").get<std::string>();
        catalog.push_back(std::move(entry));
    }
    return catalog;
}

std::vector<ProbeSpec> core_probe_set(const std::string& base_path) {
    if (!valid_base_path(base_path))
        raise(Errc::BadBasePath, base_path);
    return {
        {"core:robots", join(base_path, "robots.txt"), {"Joomla!"}, true, ""},
        {"core:webconfig", join(base_path, "web.config.txt"), {"joomla"}, true, ""},
        {"core:manifest", join(base_path, "administrator/manifests/files/joomla.xml"),
         {"<name>files_joomla</name>"}, true, ""},
        {"core:language", join(base_path, "language/en-GB/en-GB.xml"), {"Joomla"}, true, ""},
    };
}

std::vector<ProbeSpec> extension_probe_set(const std::vector<ExtensionCatalogEntry>& catalog,
                                           const std::string& base_path) {
    if (!valid_base_path(base_path))
        raise(Errc::BadBasePath, base_path);
    std::vector<ProbeSpec> probes;
    for (const auto& entry : catalog) {
        if (entry.identifier_path.rfind("com_", 0) == 0) {
            std::string dir = "administrator/components/" + entry.identifier_path + "/";
            std::string manifest = entry.manifest_file.empty()
                                       ? component_short_name(entry.identifier_path) + ".xml"
                                       : entry.manifest_file;
            probes.push_back({"ext:" + entry.identifier_path + ":" + manifest,
                              join(base_path, dir + manifest), {entry.marker}, false, entry.name});
            if (entry.manifest_file.empty() && manifest != "manifest.xml")
                probes.push_back({"ext:" + entry.identifier_path + ":manifest.xml",
                                  join(base_path, dir + "manifest.xml"), {entry.marker}, false,
                                  entry.name});
        } else {
            // literal-path entries (Sigplus)
            std::string rel = entry.identifier_path;
            if (!rel.empty() && rel.front() == '/')
                rel.erase(0, 1);
            probes.push_back({"ext:" + entry.name, join(base_path, rel), {entry.marker}, false,
                              entry.name});
        }
    }
    return probes;
}

std::string discover_base_path(const std::vector<std::string>& redirect_chain) {
    std::string final_url = redirect_chain.empty() ? "/" : redirect_chain.back();

    // strip scheme://host[:port]
    std::string path = final_url;
    std::size_t scheme = path.find("://");
    if (scheme != std::string::npos) {
        std::size_t slash = path.find('/', scheme + 3);
        path = slash == std::string::npos ? "/" : path.substr(slash);
    }
    std::size_t stop = path.find_first_of("?#");
    if (stop != std::string::npos)
        path = path.substr(0, stop);
    if (path.empty() || path.front() != '/')
        path = "/" + path;

    // directory component: a trailing file segment (or any segment not
    // terminated by '/') contributes its parent directory
    std::size_t last_slash = path.find_last_of('/');
    path = path.substr(0, last_slash + 1);
    return path;
}

Detection evaluate(const std::string& host, const std::string& base_path,
                   const std::vector<ProbeResult>& results,
                   const std::vector<ProbeSpec>& probes) {
    Detection detection;
    detection.host = host;
    detection.base_path = base_path;

    for (const auto& result : results) {
        auto spec = std::find_if(probes.begin(), probes.end(), [&](const ProbeSpec& p) {
            return p.probe_id == result.probe_id;
        });
        if (spec == probes.end())
            raise(Errc::UnknownProbeId, result.probe_id);
        if (!result.status || *result.status != 200)
            continue;
        // soft-404 defense: a 200 without any marker is a miss
        auto marker = std::find_if(spec->expect_markers.begin(), spec->expect_markers.end(),
                                   [&](const std::string& m) {
                                       return result.body_excerpt.find(m) != std::string::npos;
                                   });
        if (marker == spec->expect_markers.end())
            continue;
        detection.core_detected = true;
        if (!spec->is_core)
            detection.extensions.insert(spec->extension_name);
        detection.evidence.emplace_back(result.probe_id, "matched \"" + *marker + "\"");
    }
    return detection;
}

} // namespace metascan::fingerprint
