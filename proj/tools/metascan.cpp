// metascan: security-audit toolkit for media-metadata XSS testing,
// Joomla fingerprinting, and source-tree source/sink scanning.

#include "metascan/crawler.hpp"
#include "metascan/data.hpp"
#include "metascan/error.hpp"
#include "metascan/fingerprint.hpp"
#include "metascan/metadata.hpp"
#include "metascan/payload.hpp"
#include "metascan/report.hpp"
#include "metascan/scan.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using namespace metascan;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFindings = 2;
constexpr int kExitUsage = 64;

struct CommonPaths {
    std::string data_dir;
    std::string resolve(const std::string& override_path, const std::string& bundled) const {
        if (!override_path.empty())
            return override_path;
        return (fs::path(data_dir) / bundled).string();
    }
};

void write_file(const std::string& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(Errc::IoError, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(Errc::IoError, "cannot write " + path);
    out << text;
}

report::OutputFormat parse_output_format(const std::string& name) {
    if (name == "jsonl")
        return report::OutputFormat::JsonLines;
    if (name == "csv")
        return report::OutputFormat::Csv;
    if (name == "pretty")
        return report::OutputFormat::Pretty;
    raise(Errc::IoError, "unknown output format: " + name);
}

std::vector<FieldKey> parse_field_selection(const std::string& fields) {
    std::vector<FieldKey> keys;
    if (fields == "all")
        return keys; // empty selection = ALL
    std::istringstream in(fields);
    std::string key;
    while (std::getline(in, key, ','))
        if (!key.empty())
            keys.push_back(key);
    return keys;
}

std::string record_to_json(const payload::InjectionRecord& record) {
    ordered_json row;
    row["field"] = record.field;
    row["vector_id"] = record.vector_id;
    row["rendered_payload"] = record.rendered_payload;
    row["marker"] = record.marker;
    row["output_file"] = record.output_file;
    return row.dump();
}

payload::InjectionRecord record_from_json(const json& row) {
    payload::InjectionRecord record;
    record.field = row.at("field").get<std::string>();
    record.vector_id = row.at("vector_id").get<std::string>();
    record.rendered_payload = row.at("rendered_payload").get<std::string>();
    record.marker = row.value("marker", "");
    record.output_file = row.value("output_file", "");
    return record;
}

std::vector<payload::FieldDescriptor> load_field_catalog(const CommonPaths& paths,
                                                         const std::string& override_path,
                                                         MediaFormat format) {
    std::string bundled = std::string("fields_") + format_name(format) + ".jsonl";
    return payload::load_fields(data::read_file(paths.resolve(override_path, bundled)));
}

int cmd_inject(const CommonPaths& paths, const std::string& in_file, const std::string& format_s,
               const std::string& fields, const std::string& mode_s,
               const std::string& vectors_path, const std::string& field_catalog_path,
               const std::string& plan_id, const std::string& out_dir) {
    MediaFormat format = parse_format_name(format_s);
    auto vectors = payload::load_vectors(data::read_file(paths.resolve(vectors_path, "vectors.jsonl")));
    auto field_catalog = load_field_catalog(paths, field_catalog_path, format);
    auto selection = parse_field_selection(fields);

    std::ifstream media_in(in_file, std::ios::binary);
    if (!media_in)
        raise(Errc::IoError, "cannot read " + in_file);
    Bytes media((std::istreambuf_iterator<char>(media_in)), std::istreambuf_iterator<char>());

    std::vector<payload::InjectionPlan> plans;
    if (mode_s == "same")
        plans.push_back(payload::build_plan(format, selection, field_catalog, vectors,
                                            payload::PlanMode::SameVectorAllFields, plan_id));
    else if (mode_s == "attributed")
        plans.push_back(payload::build_plan(format, selection, field_catalog, vectors,
                                            payload::PlanMode::PerFieldAttributed, plan_id));
    else if (mode_s == "sweep")
        plans = payload::build_sweep(format, selection, field_catalog, vectors, plan_id);
    else
        raise(Errc::IoError, "unknown mode: " + mode_s);

    fs::create_directories(out_dir);
    std::string stem = fs::path(in_file).stem().string();
    std::string ext = fs::path(in_file).extension().string();

    std::ostringstream records_out;
    std::size_t total_records = 0;
    std::size_t total_skipped = 0;
    for (const auto& plan : plans) {
        auto [injected, records] = payload::apply_plan(media, plan);
        std::string out_file =
            (fs::path(out_dir) / (stem + "_" + plan.plan_id + ext)).string();
        write_file(out_file, injected);
        for (auto& record : records) {
            record.output_file = out_file;
            records_out << record_to_json(record) << "\n";
        }
        total_records += records.size();
        total_skipped += plan.skipped.size();
        for (const auto& skipped : plan.skipped)
            std::cerr << "skipped " << skipped.field << " x " << skipped.vector_id << ": "
                      << skipped.reason << "\n";
    }
    std::string records_path = (fs::path(out_dir) / "records.jsonl").string();
    write_text(records_path, records_out.str());
    std::cout << plans.size() << " file(s) written, " << total_records << " injection(s), "
              << total_skipped << " skipped; records in " << records_path << "\n";
    return kExitOk;
}

int cmd_fields(const CommonPaths& paths, const std::string& format_s,
               const std::string& catalog_path) {
    MediaFormat format = parse_format_name(format_s);
    for (const auto& field : load_field_catalog(paths, catalog_path, format)) {
        std::cout << field.key << "\t" << field.display_name << "\t";
        if (field.max_length == 0)
            std::cout << "unlimited";
        else
            std::cout << field.max_length;
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_vectors(const CommonPaths& paths, const std::string& catalog_path) {
    auto vectors =
        payload::load_vectors(data::read_file(paths.resolve(catalog_path, "vectors.jsonl")));
    for (const auto& vec : vectors)
        std::cout << vec.id << "\t" << vec.body << "\n";
    std::cerr << vectors.size() << " vectors\n";
    return kExitOk;
}

int cmd_fingerprint(const CommonPaths& paths, const std::string& targets_path,
                    const std::string& extensions_path, const std::string& out_path,
                    const crawler::FetchPolicy& policy, int concurrency) {
    auto catalog = fingerprint::load_extension_catalog(
        data::read_file(paths.resolve(extensions_path, "extensions.jsonl")));

    std::vector<std::string> targets;
    std::istringstream in(data::read_file(targets_path));
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.erase(0, 1);
        if (!line.empty())
            targets.push_back(line);
    }

    crawler::Crawler crawl(policy);
    auto outcomes = crawl.run_scan(targets, catalog, concurrency);

    std::vector<report::SiteRecord> records;
    for (const auto& outcome : outcomes) {
        report::SiteRecord record;
        record.host = outcome.host;
        if (outcome.detection) {
            record.core_detected = outcome.detection->core_detected;
            record.extensions = outcome.detection->extensions;
        } else {
            record.error = outcome.error;
        }
        records.push_back(std::move(record));
    }
    std::string text = report::emit_sites(records, report::OutputFormat::JsonLines);
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return kExitOk;
}

int cmd_scan_src(const CommonPaths&, const std::string& root, const std::string& rules_path,
                 const std::string& format_s) {
    scan::ScanRuleSet rules = rules_path.empty() ? scan::default_rules()
                                                 : scan::load_rules(data::read_file(rules_path));
    auto findings = scan::scan_tree(root, rules);
    std::cout << report::emit_findings(findings, parse_output_format(format_s));
    return findings.empty() ? kExitOk : kExitFindings;
}

int cmd_reflect_check(const std::string& records_path, const std::string& response_path) {
    std::vector<payload::InjectionRecord> records;
    std::istringstream in(data::read_file(records_path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded())
            raise(Errc::MalformedRecord, "records line " + std::to_string(line_no));
        records.push_back(record_from_json(row));
    }
    std::string body = data::read_file(response_path);

    bool any_raw = false;
    for (const auto& [record, status] : payload::reflect_check(body, records)) {
        ordered_json row;
        row["field"] = record.field;
        row["vector_id"] = record.vector_id;
        row["status"] = payload::reflect_status_name(status);
        std::cout << row.dump() << "\n";
        if (status == payload::ReflectStatus::Raw)
            any_raw = true;
    }
    return any_raw ? kExitFindings : kExitOk;
}

int cmd_aggregate(const std::string& in_path, const std::string& format_s,
                  std::uint64_t hosts_total) {
    std::vector<report::SiteRecord> records;
    std::istringstream in(data::read_file(in_path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded())
            raise(Errc::MalformedRecord, "report line " + std::to_string(line_no));
        report::SiteRecord record;
        record.host = row.value("host", "");
        record.core_detected = row.value("core_detected", false);
        if (row.contains("extensions"))
            for (const auto& name : row["extensions"])
                record.extensions.insert(name.get<std::string>());
        record.error = row.value("error", "");
        records.push_back(std::move(record));
    }
    if (hosts_total == 0)
        hosts_total = records.size();
    auto summary = report::aggregate(records, hosts_total);
    std::cout << report::emit_report(summary, parse_output_format(format_s));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Media-metadata XSS forging, Joomla fingerprinting, and "
                 "source/sink scanning toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all subcommand help");

    CommonPaths paths;
    paths.data_dir = data::default_data_dir();
    app.add_option("--data-dir", paths.data_dir,
                   "Directory holding bundled catalog files")
        ->capture_default_str();

    // inject
    auto* inject = app.add_subcommand("inject", "Write XSS test vectors into media metadata");
    std::string in_file, format_s = "jpg", fields = "all", mode_s = "attributed";
    std::string vectors_path, field_catalog_path, plan_id = "p1", out_dir = "out";
    inject->add_option("--in", in_file, "Input media file")->required();
    inject->add_option("--format", format_s, "Media format: jpg, mp3, mp4")
        ->capture_default_str();
    inject->add_option("--fields", fields, "Comma-separated field keys, or 'all'")
        ->capture_default_str();
    inject->add_option("--mode", mode_s, "same, attributed, or sweep")->capture_default_str();
    inject->add_option("--vectors", vectors_path, "Vector catalog file (default: bundled)");
    inject->add_option("--field-catalog", field_catalog_path,
                       "Field catalog file (default: bundled)");
    inject->add_option("--plan-id", plan_id, "Plan identifier, [A-Za-z0-9]{1,8}")
        ->capture_default_str();
    inject->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

    // fields / vectors
    auto* fields_cmd = app.add_subcommand("fields", "List the field catalog for a format");
    std::string fields_format = "jpg", fields_catalog;
    fields_cmd->add_option("--format", fields_format, "Media format: jpg, mp3, mp4")
        ->capture_default_str();
    fields_cmd->add_option("--catalog", fields_catalog, "Field catalog file (default: bundled)");

    auto* vectors_cmd = app.add_subcommand("vectors", "List the vector catalog");
    std::string vectors_catalog;
    vectors_cmd->add_option("--catalog", vectors_catalog, "Vector catalog file (default: bundled)");

    // fingerprint
    auto* fp = app.add_subcommand("fingerprint", "Probe hosts for Joomla core and extensions");
    std::string targets_path, extensions_path, fp_out;
    crawler::FetchPolicy policy;
    int concurrency = 8;
    long delay_ms = static_cast<long>(policy.per_host_delay.count());
    fp->add_option("--targets", targets_path, "Target list file, one host per line")->required();
    fp->add_option("--extensions", extensions_path, "Extension catalog file (default: bundled)");
    fp->add_option("--out", fp_out, "Report output path (default: stdout)");
    fp->add_option("--user-agent", policy.user_agent, "User-Agent header")
        ->capture_default_str();
    fp->add_option("--connect-timeout", policy.connect_timeout_s, "Connect timeout, seconds")
        ->capture_default_str();
    fp->add_option("--read-timeout", policy.read_timeout_s, "Read timeout, seconds")
        ->capture_default_str();
    fp->add_option("--max-retries", policy.max_retries, "Retries beyond the first attempt")
        ->capture_default_str();
    fp->add_option("--max-redirects", policy.max_redirects, "Redirects followed per request")
        ->capture_default_str();
    fp->add_option("--per-host-delay", delay_ms, "Gap between requests to one host, ms")
        ->capture_default_str();
    fp->add_option("--max-body", policy.max_body, "Body capture cap, bytes")
        ->capture_default_str();
    fp->add_option("--concurrency", concurrency, "Hosts probed in parallel")
        ->capture_default_str();

    // scan-src
    auto* scan_cmd = app.add_subcommand("scan-src", "Scan a source tree for XSS/SQL candidates");
    std::string scan_root, rules_path, scan_format = "pretty";
    scan_cmd->add_option("--root", scan_root, "Source tree root")->required();
    scan_cmd->add_option("--rules", rules_path, "Rule config JSON (default: built-in rules)");
    scan_cmd->add_option("--format", scan_format, "Output format: jsonl, csv, pretty")
        ->capture_default_str();

    // reflect-check
    auto* reflect = app.add_subcommand("reflect-check",
                                       "Classify payload reflections in a response body");
    std::string records_path, response_path;
    reflect->add_option("--records", records_path, "Injection records file (JSON lines)")
        ->required();
    reflect->add_option("--response", response_path, "HTTP response body file")->required();

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "Aggregate a fingerprint report");
    std::string agg_in, agg_format = "pretty";
    std::uint64_t hosts_total = 0;
    agg->add_option("--in", agg_in, "Site report file (JSON lines)")->required();
    agg->add_option("--format", agg_format, "Output format: jsonl, csv, pretty")
        ->capture_default_str();
    agg->add_option("--hosts-total", hosts_total,
                    "Total hosts targeted (default: number of records)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*inject)
            return cmd_inject(paths, in_file, format_s, fields, mode_s, vectors_path,
                              field_catalog_path, plan_id, out_dir);
        if (*fields_cmd)
            return cmd_fields(paths, fields_format, fields_catalog);
        if (*vectors_cmd)
            return cmd_vectors(paths, vectors_catalog);
        if (*fp) {
            policy.per_host_delay = std::chrono::milliseconds(delay_ms);
            return cmd_fingerprint(paths, targets_path, extensions_path, fp_out, policy,
                                   concurrency);
        }
        if (*scan_cmd)
            return cmd_scan_src(paths, scan_root, rules_path, scan_format);
        if (*reflect)
            return cmd_reflect_check(records_path, response_path);
        if (*agg)
            return cmd_aggregate(agg_in, agg_format, hosts_total);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
