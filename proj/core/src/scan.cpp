#include "metascan/scan.hpp"

#include "metascan/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <tuple>

namespace metascan::scan {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct DedupKey {
    std::string file;
    FindingKind kind;
    std::string symbol;

    bool operator<(const DedupKey& other) const {
        return std::tie(file, kind, symbol) < std::tie(other.file, other.kind, other.symbol);
    }
};

class Deduper {
public:
    bool insert(const std::string& file, FindingKind kind, const std::string& symbol) {
        return seen_.insert({file, kind, symbol}).second;
    }

private:
    std::set<DedupKey> seen_;
};

// PHP variable, optionally with property access: $var, $this->keyword
const std::regex kPhpVar(R"(\$[A-Za-z_]\w*(->[A-Za-z_]\w*)*)");

const std::regex kSqlString(R"("(?:[^"\\]|\\.)*")");

bool starts_with_sql_keyword(const std::string& literal) {
    static const std::regex keyword(R"(^\s*(select|insert|update|delete|union)\b)",
                                    std::regex::icase);
    return std::regex_search(literal, keyword);
}

// True when `pos` inside `stmt` sits within a call to one of `wrappers`.
bool inside_wrapper_call(const std::string& stmt, std::size_t pos,
                         const std::set<std::string>& wrappers) {
    std::vector<std::string> call_stack;
    std::string ident;
    for (std::size_t i = 0; i < pos && i < stmt.size(); ++i) {
        char c = stmt[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'
            || (c == '-' && i + 1 < stmt.size() && stmt[i + 1] == '>')
            || (c == '>' && i > 0 && stmt[i - 1] == '-')) {
            ident.push_back(c);
        } else if (c == '(') {
            call_stack.push_back(ident);
            ident.clear();
        } else if (c == ')') {
            if (!call_stack.empty())
                call_stack.pop_back();
            ident.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            ident.clear();
        }
    }
    return std::any_of(call_stack.begin(), call_stack.end(),
                       [&](const std::string& name) { return wrappers.count(name) > 0; });
}

bool quoted_on_statement(const std::string& line, const std::string& var,
                         const std::set<std::string>& wrappers) {
    for (const auto& wrapper : wrappers) {
        std::size_t pos = 0;
        while ((pos = line.find(wrapper, pos)) != std::string::npos) {
            std::size_t after = pos + wrapper.size();
            std::size_t open = line.find_first_not_of(" \t", after);
            if (open != std::string::npos && line[open] == '(') {
                std::size_t close = line.find(')', open);
                std::string args = line.substr(open, close == std::string::npos
                                                         ? std::string::npos
                                                         : close - open + 1);
                if (args.find(var) != std::string::npos)
                    return true;
            }
            pos = after;
        }
    }
    return false;
}

bool looks_binary(const std::string& text) {
    return text.find('\0') != std::string::npos;
}

} // namespace

const char* finding_kind_name(FindingKind kind) {
    switch (kind) {
    case FindingKind::DomSource: return "DomSource";
    case FindingKind::DomSink: return "DomSink";
    case FindingKind::UnescapedOutput: return "UnescapedOutput";
    case FindingKind::UnescapedSql: return "UnescapedSql";
    }
    return "?";
}

ScanRuleSet default_rules() {
    ScanRuleSet rules;
    rules.source_patterns = {
        {"document.location", R"(document\.location)"},
        {"window.location", R"(window\.location)"},
        {"location-member", R"((?:^|[^.\w])location\.(?:href|search|hash|pathname))"},
        {"document.URL", R"(document\.URL\b)"},
        {"documentURI", R"(\.documentURI\b)"},
        {"document.referrer", R"(document\.referrer\b)"},
        {"window.name", R"(window\.name\b)"},
        {"document.cookie", R"(document\.cookie\b)"},
        {"storage-read", R"((?:localStorage|sessionStorage)\.getItem\s*\()"},
    };
    rules.sink_patterns = {
        {"document.write", R"(document\.(?:write|writeln)\s*\()"},
        {"innerHTML-assignment", R"(\.(?:innerHTML|outerHTML)\s*=)"},
        {"eval", R"(\beval\s*\()"},
        {"timer-string", R"(\b(?:setTimeout|setInterval)\s*\(\s*["'])"},
        {"insertAdjacentHTML", R"(\.insertAdjacentHTML\s*\()"},
        {"location-assignment", R"((?:^|[^.\w])location(?:\.href|\.hash)?\s*=[^=])"},
        {"url-attribute-assignment", R"(\.(?:src|href)\s*=[^=])"},
    };
    rules.escape_wrappers = {"htmlentities", "htmlspecialchars", "addslashes", "$this->escape"};
    rules.sql_quote_wrappers = {"$db->quote", "$db->quoteName", "intval"};
    return rules;
}

ScanRuleSet load_rules(const std::string& config_text) {
    ScanRuleSet rules = default_rules();
    nlohmann::json config = nlohmann::json::parse(config_text, nullptr, false);
    if (config.is_discarded() || !config.is_object())
        raise(Errc::MalformedRecord, "rule config is not a JSON object");
    auto load_patterns = [&](const char* section,
                             std::vector<std::pair<std::string, std::string>>& out) {
        if (!config.contains(section))
            return;
        out.clear();
        for (const auto& entry : config[section])
            out.emplace_back(entry.at("name").get<std::string>(),
                             entry.at("pattern").get<std::string>());
    };
    load_patterns("source_patterns", rules.source_patterns);
    load_patterns("sink_patterns", rules.sink_patterns);
    auto load_set = [&](const char* section, std::set<std::string>& out) {
        if (!config.contains(section))
            return;
        out.clear();
        for (const auto& entry : config[section])
            out.insert(entry.get<std::string>());
    };
    load_set("escape_wrappers", rules.escape_wrappers);
    load_set("sql_quote_wrappers", rules.sql_quote_wrappers);
    return rules;
}

std::vector<ScanFinding> scan_js(const std::string& text, const ScanRuleSet& rules,
                                 const std::string& file) {
    std::vector<ScanFinding> findings;
    Deduper dedup;

    auto apply = [&](const std::vector<std::pair<std::string, std::string>>& patterns,
                     FindingKind kind) {
        for (const auto& [name, pattern] : patterns) {
            std::regex re;
            try {
                re = std::regex(pattern);
            } catch (const std::regex_error&) {
                continue; // bad user pattern; scanning stays total
            }
            std::istringstream in(text);
            std::string line;
            int line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                std::smatch match;
                if (!std::regex_search(line, match, re))
                    continue;
                if (!dedup.insert(file, kind, name))
                    break;
                findings.push_back({file, line_no, static_cast<int>(match.position(0)) + 1,
                                    kind, name, trim(line)});
                break;
            }
        }
    };
    apply(rules.source_patterns, FindingKind::DomSource);
    apply(rules.sink_patterns, FindingKind::DomSink);
    return findings;
}

std::vector<ScanFinding> scan_php_output(const std::string& text, const ScanRuleSet& rules,
                                         const std::string& file) {
    static const std::regex kEcho(R"(\b(echo|print)\b)");
    std::vector<ScanFinding> findings;
    Deduper dedup;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::smatch echo_match;
        std::string rest = line;
        std::size_t offset = 0;
        while (std::regex_search(rest, echo_match, kEcho)) {
            std::size_t stmt_begin = offset + static_cast<std::size_t>(echo_match.position(0))
                + echo_match.length(0);
            std::size_t stmt_end = line.find(';', stmt_begin);
            if (stmt_end == std::string::npos)
                stmt_end = line.size();
            std::string stmt = line.substr(stmt_begin, stmt_end - stmt_begin);

            auto begin = std::sregex_iterator(stmt.begin(), stmt.end(), kPhpVar);
            for (auto it = begin; it != std::sregex_iterator(); ++it) {
                std::string symbol = it->str();
                std::size_t var_pos = static_cast<std::size_t>(it->position(0));
                if (inside_wrapper_call(stmt, var_pos, rules.escape_wrappers))
                    continue;
                if (!dedup.insert(file, FindingKind::UnescapedOutput, symbol))
                    continue;
                findings.push_back({file, line_no,
                                    static_cast<int>(stmt_begin + var_pos) + 1,
                                    FindingKind::UnescapedOutput, symbol, trim(line)});
            }
            offset = stmt_end;
            if (offset >= line.size())
                break;
            rest = line.substr(offset);
        }
    }
    return findings;
}

std::vector<ScanFinding> scan_php_sql(const std::string& text, const ScanRuleSet& rules,
                                      const std::string& file) {
    std::vector<ScanFinding> findings;
    Deduper dedup;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto begin = std::sregex_iterator(line.begin(), line.end(), kSqlString);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::string literal = it->str();
            std::string content = literal.substr(1, literal.size() - 2);
            if (!starts_with_sql_keyword(content))
                continue;
            auto vars = std::sregex_iterator(content.begin(), content.end(), kPhpVar);
            for (auto v = vars; v != std::sregex_iterator(); ++v) {
                std::string symbol = v->str();
                if (quoted_on_statement(line, symbol, rules.sql_quote_wrappers))
                    continue;
                if (!dedup.insert(file, FindingKind::UnescapedSql, symbol))
                    continue;
                int column = static_cast<int>(it->position(0) + 1 + v->position(0)) + 1;
                findings.push_back({file, line_no, column, FindingKind::UnescapedSql, symbol,
                                    trim(line)});
            }
        }
    }
    return findings;
}

std::vector<ScanFinding> scan_tree(const std::string& root, const ScanRuleSet& rules) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        raise(Errc::IoError, "scan root is not a readable directory: " + root);

    std::vector<ScanFinding> findings;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec)
            raise(Errc::IoError, "cannot walk " + root + ": " + ec.message());
        if (!it->is_regular_file())
            continue;
        std::string ext = it->path().extension().string();
        if (ext != ".js" && ext != ".php")
            continue;
        std::ifstream in(it->path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (looks_binary(text)) {
            std::cerr << "warning: skipping binary-looking file " << it->path() << "\n";
            continue;
        }
        std::string file = it->path().string();
        if (ext == ".js") {
            auto f = scan_js(text, rules, file);
            findings.insert(findings.end(), f.begin(), f.end());
        } else {
            auto out = scan_php_output(text, rules, file);
            findings.insert(findings.end(), out.begin(), out.end());
            auto sql = scan_php_sql(text, rules, file);
            findings.insert(findings.end(), sql.begin(), sql.end());
        }
    }
    std::sort(findings.begin(), findings.end(), [](const ScanFinding& a, const ScanFinding& b) {
        return std::tie(a.file, a.line, a.column) < std::tie(b.file, b.line, b.column);
    });
    return findings;
}

} // namespace metascan::scan
