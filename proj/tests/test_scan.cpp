#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metascan/error.hpp"
#include "metascan/scan.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

using namespace metascan;
using namespace metascan::scan;

namespace fs = std::filesystem;

namespace {

bool has_finding(const std::vector<ScanFinding>& findings, FindingKind kind,
                 const std::string& symbol) {
    return std::any_of(findings.begin(), findings.end(), [&](const ScanFinding& f) {
        return f.kind == kind && f.pattern_or_symbol == symbol;
    });
}

struct TempTree {
    fs::path root;

    TempTree() {
        root = fs::temp_directory_path() / ("scan-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter_++));
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }

    void write(const std::string& rel, const std::string& text) {
        fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
    }

    static inline int counter_ = 0;
};

} // namespace

TEST_CASE("scan_js: DOM sources detected") {
    auto rules = default_rules();
    std::string text = "var q = document.location.search;\n"
                       "var h = location.hash;\n";
    auto findings = scan_js(text, rules, "a.js");
    CHECK(has_finding(findings, FindingKind::DomSource, "document.location"));
    CHECK(has_finding(findings, FindingKind::DomSource, "location-member"));
}

TEST_CASE("scan_js: DOM sinks detected") {
    auto rules = default_rules();
    std::string text = "document.write(q);\n"
                       "el.innerHTML = q;\n"
                       "eval(q);\n"
                       "setTimeout(\"run()\", 10);\n";
    auto findings = scan_js(text, rules, "b.js");
    CHECK(has_finding(findings, FindingKind::DomSink, "document.write"));
    CHECK(has_finding(findings, FindingKind::DomSink, "innerHTML-assignment"));
    CHECK(has_finding(findings, FindingKind::DomSink, "eval"));
    CHECK(has_finding(findings, FindingKind::DomSink, "timer-string"));
}

TEST_CASE("scan_js: sigplus-style source plus sink pair") {
    auto rules = default_rules();
    std::string text = "var params = window.location.hash;\n"
                       "container.innerHTML = decodeURIComponent(params);\n";
    auto findings = scan_js(text, rules, "initialization.js");
    CHECK(has_finding(findings, FindingKind::DomSource, "window.location"));
    CHECK(has_finding(findings, FindingKind::DomSink, "innerHTML-assignment"));
}

TEST_CASE("scan_js: function callback setTimeout is not a sink") {
    auto rules = default_rules();
    auto findings = scan_js("setTimeout(function() { tick(); }, 10);\n", rules, "c.js");
    CHECK(!has_finding(findings, FindingKind::DomSink, "timer-string"));
}

TEST_CASE("scan_js: one finding per (file, kind, pattern)") {
    auto rules = default_rules();
    std::string text = "x = document.location;\n"
                       "y = document.location;\n"
                       "z = document.location;\n";
    auto findings = scan_js(text, rules, "d.js");
    int count = 0;
    for (const auto& f : findings)
        if (f.pattern_or_symbol == "document.location")
            ++count;
    CHECK(count == 1);
}

TEST_CASE("scan_js: line and column are 1-based and point at the match") {
    auto rules = default_rules();
    auto findings = scan_js("\n  q = document.cookie;\n", rules, "e.js");
    REQUIRE(has_finding(findings, FindingKind::DomSource, "document.cookie"));
    for (const auto& f : findings)
        if (f.pattern_or_symbol == "document.cookie") {
            CHECK(f.line == 2);
            CHECK(f.column == 7);
        }
}

TEST_CASE("scan_php_output: unescaped echo of a template variable") {
    auto rules = default_rules();
    auto findings = scan_php_output("<?php echo $this->keyword; ?>\n", rules, "f.php");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::UnescapedOutput);
    CHECK(findings[0].pattern_or_symbol == "$this->keyword");
}

TEST_CASE("scan_php_output: escaped output is not flagged") {
    auto rules = default_rules();
    CHECK(scan_php_output("echo htmlspecialchars($name);\n", rules, "g.php").empty());
    CHECK(scan_php_output("echo htmlentities($this->keyword);\n", rules, "g.php").empty());
    CHECK(scan_php_output("echo addslashes($q);\n", rules, "g.php").empty());
}

TEST_CASE("scan_php_output: mixed escaped and bare on one statement") {
    auto rules = default_rules();
    auto findings = scan_php_output("echo htmlspecialchars($a) . $b;\n", rules, "h.php");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].pattern_or_symbol == "$b");
}

TEST_CASE("scan_php_output: print counts as output") {
    auto rules = default_rules();
    auto findings = scan_php_output("print $row->title;\n", rules, "i.php");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].pattern_or_symbol == "$row->title");
}

TEST_CASE("scan_php_sql: interpolated variable in a query literal") {
    auto rules = default_rules();
    std::string text =
        "$query = \"SELECT catid FROM #__jevents_icsfile WHERE ics_id=$ics_id\";\n";
    auto findings = scan_php_sql(text, rules, "j.php");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::UnescapedSql);
    CHECK(findings[0].pattern_or_symbol == "$ics_id");
}

TEST_CASE("scan_php_sql: quoted variables are not flagged") {
    auto rules = default_rules();
    std::string text = "$query = \"SELECT * FROM t WHERE id=\" . $db->quote($id);\n";
    CHECK(scan_php_sql(text, rules, "k.php").empty());
    std::string cast = "$q = \"SELECT * FROM t WHERE id=$id\" ; intval($id);\n";
    CHECK(scan_php_sql(cast, rules, "k.php").empty());
}

TEST_CASE("scan_php_sql: non-SQL string literals are ignored") {
    auto rules = default_rules();
    CHECK(scan_php_sql("$msg = \"Hello $name\";\n", rules, "l.php").empty());
}

TEST_CASE("scan_php_sql: each SQL keyword recognized case-insensitively") {
    auto rules = default_rules();
    for (const std::string& kw : {"select", "INSERT INTO", "update t set", "DELETE FROM t",
                                  "union"}) {
        std::string text = "$q = \"" + kw + " x WHERE a=$v\";\n";
        CHECK(scan_php_sql(text, rules, "m.php").size() == 1);
    }
}

TEST_CASE("load_rules: overrides replace sections, others keep defaults") {
    std::string config = R"({
        "sink_patterns": [{"name": "only-eval", "pattern": "\\beval\\s*\\("}],
        "escape_wrappers": ["myEscape"]
    })";
    auto rules = load_rules(config);
    REQUIRE(rules.sink_patterns.size() == 1);
    CHECK(rules.sink_patterns[0].first == "only-eval");
    CHECK(rules.source_patterns == default_rules().source_patterns);
    CHECK(rules.escape_wrappers == std::set<std::string>{"myEscape"});

    auto findings = scan_php_output("echo myEscape($x);\n", rules, "n.php");
    CHECK(findings.empty());
}

TEST_CASE("load_rules: malformed config rejected") {
    CHECK_THROWS_AS(load_rules("not json"), Error);
    CHECK_THROWS_AS(load_rules("[1, 2]"), Error);
}

TEST_CASE("scan_tree: walks, filters by extension, sorts, skips binary") {
    TempTree tree;
    tree.write("media/widget.js", "a.innerHTML = document.location.hash;\n");
    tree.write("tmpl/default.php", "<?php echo $this->keyword; ?>\n");
    tree.write("lib/query.php",
               "$q = \"SELECT id FROM #__t WHERE k=$k\";\n");
    tree.write("README.txt", "document.write(ignored)\n");
    tree.write("bin/blob.js", std::string("document.write(\0)\xFF", 18));

    auto findings = scan_tree(tree.root.string(), default_rules());
    CHECK(has_finding(findings, FindingKind::DomSource, "document.location"));
    CHECK(has_finding(findings, FindingKind::DomSink, "innerHTML-assignment"));
    CHECK(has_finding(findings, FindingKind::UnescapedOutput, "$this->keyword"));
    CHECK(has_finding(findings, FindingKind::UnescapedSql, "$k"));
    for (const auto& f : findings) {
        CHECK(f.file.find("README.txt") == std::string::npos);
        CHECK(f.file.find("blob.js") == std::string::npos);
    }
    CHECK(std::is_sorted(findings.begin(), findings.end(),
                         [](const ScanFinding& a, const ScanFinding& b) {
                             return std::tie(a.file, a.line, a.column)
                                    < std::tie(b.file, b.line, b.column);
                         }));
}

TEST_CASE("scan_tree: missing root raises IoError") {
    try {
        scan_tree("/nonexistent/path/here", default_rules());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IoError);
    }
}
