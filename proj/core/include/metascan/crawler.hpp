#pragma once

#include "metascan/fingerprint.hpp"

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace metascan::crawler {

struct FetchPolicy {
    std::string user_agent =
        "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 "
        "(KHTML, like Gecko) Chrome/74.0.3729.169 Safari/537.36";
    double connect_timeout_s = 10.0;
    double read_timeout_s = 20.0;
    int max_retries = 10; // total attempts beyond the first
    int max_redirects = 10;
    std::chrono::milliseconds per_host_delay{500};
    std::size_t max_body = 65536;
};

struct FetchOutcome {
    std::optional<int> status; // nullopt = transport failure
    std::vector<std::string> redirect_chain;
    std::string body_excerpt;
    int attempts = 0;
    std::chrono::milliseconds elapsed{0};
};

struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = 0;
    std::string path_and_query; // begins with '/'

    std::string origin() const;
    std::string full() const { return origin() + path_and_query; }
};

ParsedUrl parse_url(const std::string& url);

struct ScanOutcome {
    std::string host;
    std::optional<fingerprint::Detection> detection;
    std::string error; // empty on success
};

/// HTTP fetch layer with the crawl network policy: fixed user agent,
/// connect/read timeouts, bounded retries on transport failures and
/// 502/503/504, bounded redirect following, per-host request spacing.
class Crawler {
public:
    explicit Crawler(FetchPolicy policy);

    FetchOutcome fetch(const std::string& url);

    std::pair<fingerprint::Detection, std::vector<fingerprint::ProbeResult>>
    probe_host(const std::string& host,
               const std::vector<fingerprint::ExtensionCatalogEntry>& catalog);

    std::vector<ScanOutcome>
    run_scan(const std::vector<std::string>& targets,
             const std::vector<fingerprint::ExtensionCatalogEntry>& catalog,
             int concurrency_limit);

    const FetchPolicy& policy() const { return policy_; }

private:
    void wait_for_host_budget(const std::string& host);

    FetchPolicy policy_;
    std::mutex budget_mutex_;
    std::map<std::string, std::chrono::steady_clock::time_point> next_allowed_;
};

} // namespace metascan::crawler
