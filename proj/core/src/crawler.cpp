#include "metascan/crawler.hpp"

#include "metascan/error.hpp"

#ifdef METASCAN_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <thread>

namespace metascan::crawler {

namespace {

bool is_retryable_status(int status) {
    return status == 502 || status == 503 || status == 504;
}

bool is_redirect_status(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

std::string resolve_location(const ParsedUrl& current, const std::string& location) {
    if (location.rfind("http://", 0) == 0 || location.rfind("https://", 0) == 0)
        return location;
    if (!location.empty() && location.front() == '/')
        return current.origin() + location;
    // relative to the current directory
    std::string dir = current.path_and_query;
    std::size_t stop = dir.find_first_of("?#");
    if (stop != std::string::npos)
        dir = dir.substr(0, stop);
    dir = dir.substr(0, dir.find_last_of('/') + 1);
    return current.origin() + dir + location;
}

void set_timeouts(httplib::Client& client, const FetchPolicy& policy) {
    auto connect_ms = static_cast<time_t>(policy.connect_timeout_s * 1000);
    auto read_ms = static_cast<time_t>(policy.read_timeout_s * 1000);
    client.set_connection_timeout(connect_ms / 1000, connect_ms % 1000 * 1000);
    client.set_read_timeout(read_ms / 1000, read_ms % 1000 * 1000);
    client.set_follow_location(false); // redirects handled here, chain recorded
}

} // namespace

std::string ParsedUrl::origin() const {
    std::string out = scheme + "://" + host;
    bool default_port = (scheme == "http" && port == 80) || (scheme == "https" && port == 443);
    if (!default_port)
        out += ":" + std::to_string(port);
    return out;
}

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl parsed;
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        raise(Errc::InvalidUrl, url);
    parsed.scheme = url.substr(0, scheme_end);
    if (parsed.scheme != "http" && parsed.scheme != "https")
        raise(Errc::InvalidUrl, "unsupported scheme in " + url);

    std::size_t host_begin = scheme_end + 3;
    std::size_t path_begin = url.find('/', host_begin);
    std::string authority = url.substr(host_begin, path_begin == std::string::npos
                                                      ? std::string::npos
                                                      : path_begin - host_begin);
    if (authority.empty())
        raise(Errc::InvalidUrl, url);
    std::size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        parsed.host = authority.substr(0, colon);
        try {
            parsed.port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            raise(Errc::InvalidUrl, "bad port in " + url);
        }
    } else {
        parsed.host = authority;
        parsed.port = parsed.scheme == "https" ? 443 : 80;
    }
    parsed.path_and_query = path_begin == std::string::npos ? "/" : url.substr(path_begin);
    return parsed;
}

Crawler::Crawler(FetchPolicy policy) : policy_(std::move(policy)) {}

void Crawler::wait_for_host_budget(const std::string& host) {
    std::chrono::steady_clock::time_point wait_until;
    {
        std::lock_guard lock(budget_mutex_);
        auto now = std::chrono::steady_clock::now();
        auto it = next_allowed_.find(host);
        wait_until = it == next_allowed_.end() ? now : std::max(it->second, now);
        next_allowed_[host] = wait_until + policy_.per_host_delay;
    }
    std::this_thread::sleep_until(wait_until);
}

FetchOutcome Crawler::fetch(const std::string& url) {
    ParsedUrl start = parse_url(url);
    auto begin_time = std::chrono::steady_clock::now();

    FetchOutcome outcome;
    std::string last_failure = "transport failure";
    const int max_attempts = 1 + policy_.max_retries;

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        outcome.attempts = attempt;
        outcome.redirect_chain = {start.full()};
        ParsedUrl current = start;
        bool transport_failed = false;

        for (int hop = 0;; ++hop) {
            wait_for_host_budget(current.host);
            httplib::Client client(current.origin());
            set_timeouts(client, policy_);
            httplib::Headers headers{{"User-Agent", policy_.user_agent}};
            auto response = client.Get(current.path_and_query, headers);
            if (!response) {
                last_failure = httplib::to_string(response.error());
                transport_failed = true;
                break;
            }
            if (is_redirect_status(response->status) && response->has_header("Location")) {
                if (hop >= policy_.max_redirects)
                    raise(Errc::TooManyRedirects, url);
                current = parse_url(
                    resolve_location(current, response->get_header_value("Location")));
                outcome.redirect_chain.push_back(current.full());
                continue;
            }
            outcome.status = response->status;
            outcome.body_excerpt = response->body.substr(0, policy_.max_body);
            break;
        }

        auto done = std::chrono::steady_clock::now();
        outcome.elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(done - begin_time);
        if (transport_failed || (outcome.status && is_retryable_status(*outcome.status))) {
            if (outcome.status)
                last_failure = "status " + std::to_string(*outcome.status);
            outcome.status.reset();
            outcome.body_excerpt.clear();
            continue;
        }
        return outcome;
    }
    raise(Errc::ExhaustedRetries,
          url + " (" + std::to_string(max_attempts) + " attempts, last: " + last_failure + ")");
}

std::pair<fingerprint::Detection, std::vector<fingerprint::ProbeResult>>
Crawler::probe_host(const std::string& host,
                    const std::vector<fingerprint::ExtensionCatalogEntry>& catalog) {
    std::string origin = host;
    if (origin.find("://") == std::string::npos)
        origin = "http://" + origin;
    ParsedUrl base = parse_url(origin);

    FetchOutcome baseline;
    try {
        baseline = fetch(base.full());
    } catch (const Error& e) {
        if (e.code() == Errc::ExhaustedRetries)
            raise(Errc::HostUnreachable, host);
        throw;
    }

    std::string base_path = fingerprint::discover_base_path(baseline.redirect_chain);
    // cross-host redirects adopt the final host as the effective target
    ParsedUrl effective = parse_url(baseline.redirect_chain.back());

    auto probes = fingerprint::core_probe_set(base_path);
    auto ext = fingerprint::extension_probe_set(catalog, base_path);
    probes.insert(probes.end(), ext.begin(), ext.end());

    std::vector<fingerprint::ProbeResult> results;
    for (const auto& probe : probes) {
        fingerprint::ProbeResult result;
        result.probe_id = probe.probe_id;
        try {
            FetchOutcome fetched = fetch(effective.origin() + probe.path);
            result.status = fetched.status;
            result.final_url = fetched.redirect_chain.back();
            if (fetched.status == 200)
                result.body_excerpt = std::move(fetched.body_excerpt);
        } catch (const Error&) {
            // probe-level failure counts as a miss, never aborts the host
        }
        results.push_back(std::move(result));
    }

    auto detection = fingerprint::evaluate(base.host, base_path, results, probes);
    if (effective.host != base.host)
        detection.evidence.emplace_back("baseline", "redirected to " + effective.origin());
    return {std::move(detection), std::move(results)};
}

std::vector<ScanOutcome>
Crawler::run_scan(const std::vector<std::string>& targets,
                  const std::vector<fingerprint::ExtensionCatalogEntry>& catalog,
                  int concurrency_limit) {
    std::vector<ScanOutcome> results(targets.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t index = next.fetch_add(1);
            if (index >= targets.size())
                return;
            ScanOutcome& out = results[index];
            out.host = targets[index];
            try {
                out.detection = probe_host(targets[index], catalog).first;
            } catch (const std::exception& e) {
                out.error = e.what();
            }
        }
    };

    std::size_t workers = std::min<std::size_t>(
        targets.size(), static_cast<std::size_t>(std::max(1, concurrency_limit)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i)
        pool.emplace_back(worker);
    for (auto& thread : pool)
        thread.join();
    return results;
}

} // namespace metascan::crawler
