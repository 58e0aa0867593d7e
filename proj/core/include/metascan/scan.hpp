#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace metascan::scan {

enum class FindingKind { DomSource, DomSink, UnescapedOutput, UnescapedSql };

const char* finding_kind_name(FindingKind kind);

struct ScanFinding {
    std::string file;
    int line = 1;   // 1-based
    int column = 1; // 1-based
    FindingKind kind = FindingKind::DomSource;
    std::string pattern_or_symbol;
    std::string excerpt; // matched line, trimmed
};

struct ScanRuleSet {
    std::vector<std::pair<std::string, std::string>> source_patterns; // name, regex
    std::vector<std::pair<std::string, std::string>> sink_patterns;
    std::set<std::string> escape_wrappers;
    std::set<std::string> sql_quote_wrappers;
};

ScanRuleSet default_rules();

/// Loads an override rule set from a JSON config; missing sections keep the
/// defaults.
ScanRuleSet load_rules(const std::string& config_text);

std::vector<ScanFinding> scan_js(const std::string& text, const ScanRuleSet& rules,
                                 const std::string& file = "");
std::vector<ScanFinding> scan_php_output(const std::string& text, const ScanRuleSet& rules,
                                         const std::string& file = "");
std::vector<ScanFinding> scan_php_sql(const std::string& text, const ScanRuleSet& rules,
                                      const std::string& file = "");

std::vector<ScanFinding> scan_tree(const std::string& root, const ScanRuleSet& rules);

} // namespace metascan::scan
