#pragma once

#include "metascan/scan.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace metascan::report {

struct SiteRecord {
    std::string host;
    bool core_detected = false;
    std::set<std::string> extensions;
    std::string error; // non-empty implies no detection
};

struct ExtensionShare {
    std::string name;
    std::uint64_t count = 0;
    double share_percent = 0.0; // one decimal, half-up
};

struct AggregateReport {
    std::uint64_t hosts_total = 0;
    std::uint64_t hosts_reachable = 0;
    std::uint64_t joomla_total = 0;
    std::uint64_t joomla_with_any_extension = 0;
    std::vector<ExtensionShare> per_extension; // share descending, name ascending
    double core_share_of_reachable = 0.0;      // joomla_total / hosts_reachable
    double extension_share_of_joomla = 0.0;    // with-extension share of Joomla installs
};

enum class OutputFormat { JsonLines, Csv, Pretty };

/// count / denom as a percentage rounded half-up to one decimal.
double share_percent(std::uint64_t count, std::uint64_t denom);

AggregateReport aggregate(const std::vector<SiteRecord>& records, std::uint64_t hosts_total);

std::string emit_report(const AggregateReport& report, OutputFormat format);
std::string emit_findings(const std::vector<scan::ScanFinding>& findings, OutputFormat format);
std::string emit_sites(const std::vector<SiteRecord>& records, OutputFormat format);

} // namespace metascan::report
