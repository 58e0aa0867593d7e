#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metascan/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

using namespace metascan;
using namespace metascan::report;

namespace {

// Reference implementation of half-up rounding to tenths of a percent:
// quotient and remainder computed separately, round up when the fractional
// part is at least one half.
double oracle_share(std::uint64_t count, std::uint64_t denom) {
    if (denom == 0)
        return 0.0;
    std::uint64_t tenths = count * 1000 / denom;
    std::uint64_t rem = count * 1000 % denom;
    if (2 * rem >= denom)
        ++tenths;
    return static_cast<double>(tenths) / 10.0;
}

std::vector<SiteRecord> sample_records() {
    std::vector<SiteRecord> records;
    // 10 reachable, 4 Joomla, 2 with extensions
    for (int i = 0; i < 6; ++i)
        records.push_back({"plain" + std::to_string(i), false, {}, ""});
    records.push_back({"j1", true, {}, ""});
    records.push_back({"j2", true, {}, ""});
    records.push_back({"j3", true, {"JEvents"}, ""});
    records.push_back({"j4", true, {"JEvents", "Sigplus"}, ""});
    records.push_back({"down1", false, {}, "HostUnreachable"});
    records.push_back({"down2", true, {"Akeeba Backup"}, "ExhaustedRetries"});
    return records;
}

} // namespace

TEST_CASE("share_percent: published survey figures") {
    CHECK(share_percent(4646, 7797) == doctest::Approx(59.6));
    CHECK(share_percent(7797, 19047) == doctest::Approx(40.9));
    CHECK(share_percent(19047, 932000) == doctest::Approx(2.0));
}

TEST_CASE("share_percent: boundary behaviour") {
    CHECK(share_percent(0, 100) == 0.0);
    CHECK(share_percent(100, 100) == 100.0);
    CHECK(share_percent(1, 0) == 0.0);
    // 0.05% rounds half-up to 0.1%
    CHECK(share_percent(1, 2000) == doctest::Approx(0.1));
    // 0.04999...% stays at 0.0%
    CHECK(share_percent(1, 2001) == doctest::Approx(0.0));
}

TEST_CASE("share_percent: agrees with the exact-decimal oracle") {
    for (std::uint64_t denom : {1ULL, 3ULL, 7ULL, 64ULL, 7797ULL, 19047ULL, 932000ULL})
        for (std::uint64_t count : {0ULL, 1ULL, 2ULL, 3ULL, 5ULL, 50ULL, 4646ULL})
            if (count <= denom)
                CHECK(share_percent(count, denom) == doctest::Approx(oracle_share(count, denom)));
}

TEST_CASE("aggregate: counts, denominators, sort order") {
    auto report = aggregate(sample_records(), 20);
    CHECK(report.hosts_total == 20);
    CHECK(report.hosts_reachable == 10);
    CHECK(report.joomla_total == 4);
    CHECK(report.joomla_with_any_extension == 2);
    CHECK(report.core_share_of_reachable == doctest::Approx(40.0));
    CHECK(report.extension_share_of_joomla == doctest::Approx(50.0));

    // JEvents on 2 of 2 extension-bearing installs, Sigplus on 1 of 2.
    // The errored Akeeba record must not count.
    REQUIRE(report.per_extension.size() == 2);
    CHECK(report.per_extension[0].name == "JEvents");
    CHECK(report.per_extension[0].count == 2);
    CHECK(report.per_extension[0].share_percent == doctest::Approx(100.0));
    CHECK(report.per_extension[1].name == "Sigplus");
    CHECK(report.per_extension[1].share_percent == doctest::Approx(50.0));
}

TEST_CASE("aggregate: equal shares tie-break by name ascending") {
    std::vector<SiteRecord> records = {
        {"a", true, {"Zed", "Alpha"}, ""},
    };
    auto report = aggregate(records, 1);
    REQUIRE(report.per_extension.size() == 2);
    CHECK(report.per_extension[0].name == "Alpha");
    CHECK(report.per_extension[1].name == "Zed");
}

TEST_CASE("aggregate: empty input") {
    auto report = aggregate({}, 0);
    CHECK(report.hosts_reachable == 0);
    CHECK(report.core_share_of_reachable == 0.0);
    CHECK(report.per_extension.empty());
}

TEST_CASE("emit_report: JSON lines parse back to the same numbers") {
    auto report = aggregate(sample_records(), 20);
    std::istringstream in(emit_report(report, OutputFormat::JsonLines));
    std::string line;
    REQUIRE(std::getline(in, line));
    auto summary = nlohmann::json::parse(line);
    CHECK(summary["row"] == "summary");
    CHECK(summary["hosts_reachable"] == 10);
    CHECK(summary["core_share_of_reachable"] == "40.0");
    CHECK(summary["extension_share_of_joomla"] == "50.0");

    int rows = 0;
    while (std::getline(in, line)) {
        auto row = nlohmann::json::parse(line);
        CHECK(row["row"] == "extension");
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("emit_report: CSV uses CRLF, header, quoting") {
    AggregateReport report;
    report.per_extension = {{"Has, comma", 3, 1.5}, {"Has \"quote\"", 1, 0.5}};
    std::string csv = emit_report(report, OutputFormat::Csv);
    CHECK(csv.rfind("extension,count,share_percent\r\n", 0) == 0);
    CHECK(csv.find("\"Has, comma\",3,1.5\r\n") != std::string::npos);
    CHECK(csv.find("\"Has \"\"quote\"\"\",1,0.5\r\n") != std::string::npos);
}

TEST_CASE("emit_report: pretty includes the headline numbers") {
    auto report = aggregate(sample_records(), 20);
    std::string pretty = emit_report(report, OutputFormat::Pretty);
    CHECK(pretty.find("Joomla installations:       4 (40.0% of reachable)") != std::string::npos);
    CHECK(pretty.find("JEvents") != std::string::npos);
}

TEST_CASE("emit_findings: all three formats") {
    std::vector<scan::ScanFinding> findings = {
        {"a.php", 3, 7, scan::FindingKind::UnescapedOutput, "$this->keyword",
         "echo $this->keyword;"},
    };
    auto jsonl = emit_findings(findings, OutputFormat::JsonLines);
    auto row = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
    CHECK(row["file"] == "a.php");
    CHECK(row["line"] == 3);
    CHECK(row["kind"] == "UnescapedOutput");

    auto csv = emit_findings(findings, OutputFormat::Csv);
    CHECK(csv.find("a.php,3,7,UnescapedOutput,$this->keyword,echo $this->keyword;\r\n")
          != std::string::npos);

    auto pretty = emit_findings(findings, OutputFormat::Pretty);
    CHECK(pretty.find("a.php:3:7: UnescapedOutput $this->keyword") != std::string::npos);
}

TEST_CASE("emit_sites: extension list joined with semicolons in CSV") {
    std::vector<SiteRecord> records = {{"j4", true, {"JEvents", "Sigplus"}, ""}};
    auto csv = emit_sites(records, OutputFormat::Csv);
    CHECK(csv.find("j4,true,JEvents;Sigplus,\r\n") != std::string::npos);

    auto pretty = emit_sites(records, OutputFormat::Pretty);
    CHECK(pretty.find("Joomla detected; extensions: JEvents;Sigplus") != std::string::npos);
}
