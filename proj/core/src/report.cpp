#include "metascan/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace metascan::report {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string one_decimal(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << value;
    return out.str();
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string join_extensions(const std::set<std::string>& extensions) {
    std::string out;
    for (const auto& name : extensions) {
        if (!out.empty())
            out += ";";
        out += name;
    }
    return out;
}

} // namespace

double share_percent(std::uint64_t count, std::uint64_t denom) {
    if (denom == 0)
        return 0.0;
    // integer half-up rounding to one decimal
    std::uint64_t tenths = (count * 2000 + denom) / (2 * denom);
    return static_cast<double>(tenths) / 10.0;
}

AggregateReport aggregate(const std::vector<SiteRecord>& records, std::uint64_t hosts_total) {
    AggregateReport report;
    report.hosts_total = hosts_total;

    std::map<std::string, std::uint64_t> counts;
    for (const auto& record : records) {
        if (!record.error.empty())
            continue;
        ++report.hosts_reachable;
        if (!record.core_detected)
            continue;
        ++report.joomla_total;
        if (!record.extensions.empty())
            ++report.joomla_with_any_extension;
        for (const auto& name : record.extensions)
            ++counts[name];
    }

    for (const auto& [name, count] : counts)
        report.per_extension.push_back(
            {name, count, share_percent(count, report.joomla_with_any_extension)});
    std::sort(report.per_extension.begin(), report.per_extension.end(),
              [](const ExtensionShare& a, const ExtensionShare& b) {
                  if (a.share_percent != b.share_percent)
                      return a.share_percent > b.share_percent;
                  return a.name < b.name;
              });

    report.core_share_of_reachable = share_percent(report.joomla_total, report.hosts_reachable);
    report.extension_share_of_joomla =
        share_percent(report.joomla_with_any_extension, report.joomla_total);
    return report;
}

std::string emit_report(const AggregateReport& report, OutputFormat format) {
    switch (format) {
    case OutputFormat::JsonLines: {
        std::ostringstream out;
        ordered_json summary;
        summary["row"] = "summary";
        summary["hosts_total"] = report.hosts_total;
        summary["hosts_reachable"] = report.hosts_reachable;
        summary["joomla_total"] = report.joomla_total;
        summary["joomla_with_any_extension"] = report.joomla_with_any_extension;
        summary["core_share_of_reachable"] = one_decimal(report.core_share_of_reachable);
        summary["extension_share_of_joomla"] = one_decimal(report.extension_share_of_joomla);
        out << summary.dump() << "\n";
        for (const auto& ext : report.per_extension) {
            ordered_json row;
            row["row"] = "extension";
            row["name"] = ext.name;
            row["count"] = ext.count;
            row["share_percent"] = one_decimal(ext.share_percent);
            out << row.dump() << "\n";
        }
        return out.str();
    }
    case OutputFormat::Csv: {
        std::ostringstream out;
        out << "extension,count,share_percent\r\n";
        for (const auto& ext : report.per_extension)
            out << csv_quote(ext.name) << "," << ext.count << ","
                << one_decimal(ext.share_percent) << "\r\n";
        return out.str();
    }
    case OutputFormat::Pretty: {
        std::ostringstream out;
        out << "Hosts total:                " << report.hosts_total << "\n";
        out << "Hosts reachable:            " << report.hosts_reachable << "\n";
        out << "Joomla installations:       " << report.joomla_total << " ("
            << one_decimal(report.core_share_of_reachable) << "% of reachable)\n";
        out << "Joomla with any extension:  " << report.joomla_with_any_extension << " ("
            << one_decimal(report.extension_share_of_joomla) << "% of Joomla)\n\n";
        std::size_t name_width = 12;
        for (const auto& ext : report.per_extension)
            name_width = std::max(name_width, ext.name.size());
        out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Extension"
            << std::setw(14) << "Installations" << "%\n";
        for (const auto& ext : report.per_extension)
            out << std::left << std::setw(static_cast<int>(name_width) + 2) << ext.name
                << std::setw(14) << ext.count << one_decimal(ext.share_percent) << "\n";
        return out.str();
    }
    }
    return "";
}

std::string emit_findings(const std::vector<scan::ScanFinding>& findings, OutputFormat format) {
    switch (format) {
    case OutputFormat::JsonLines: {
        std::ostringstream out;
        for (const auto& finding : findings) {
            ordered_json row;
            row["file"] = finding.file;
            row["line"] = finding.line;
            row["column"] = finding.column;
            row["kind"] = scan::finding_kind_name(finding.kind);
            row["symbol"] = finding.pattern_or_symbol;
            row["excerpt"] = finding.excerpt;
            out << row.dump() << "\n";
        }
        return out.str();
    }
    case OutputFormat::Csv: {
        std::ostringstream out;
        out << "file,line,column,kind,symbol,excerpt\r\n";
        for (const auto& finding : findings)
            out << csv_quote(finding.file) << "," << finding.line << "," << finding.column << ","
                << scan::finding_kind_name(finding.kind) << ","
                << csv_quote(finding.pattern_or_symbol) << "," << csv_quote(finding.excerpt)
                << "\r\n";
        return out.str();
    }
    case OutputFormat::Pretty: {
        std::ostringstream out;
        for (const auto& finding : findings)
            out << finding.file << ":" << finding.line << ":" << finding.column << ": "
                << scan::finding_kind_name(finding.kind) << " " << finding.pattern_or_symbol
                << "\n    " << finding.excerpt << "\n";
        return out.str();
    }
    }
    return "";
}

std::string emit_sites(const std::vector<SiteRecord>& records, OutputFormat format) {
    switch (format) {
    case OutputFormat::JsonLines: {
        std::ostringstream out;
        for (const auto& record : records) {
            ordered_json row;
            row["host"] = record.host;
            row["core_detected"] = record.core_detected;
            row["extensions"] = record.extensions;
            row["error"] = record.error;
            out << row.dump() << "\n";
        }
        return out.str();
    }
    case OutputFormat::Csv: {
        std::ostringstream out;
        out << "host,core_detected,extensions,error\r\n";
        for (const auto& record : records)
            out << csv_quote(record.host) << "," << (record.core_detected ? "true" : "false")
                << "," << csv_quote(join_extensions(record.extensions)) << ","
                << csv_quote(record.error) << "\r\n";
        return out.str();
    }
    case OutputFormat::Pretty: {
        std::ostringstream out;
        for (const auto& record : records) {
            out << record.host << ": ";
            if (!record.error.empty())
                out << "error (" << record.error << ")";
            else if (!record.core_detected)
                out << "no Joomla detected";
            else
                out << "Joomla detected"
                    << (record.extensions.empty() ? "" : "; extensions: "
                        + join_extensions(record.extensions));
            out << "\n";
        }
        return out.str();
    }
    }
    return "";
}

} // namespace metascan::report
