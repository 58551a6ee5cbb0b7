#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/record.hpp"

namespace citefilter {

enum class CatalogStatus { found, not_found };

// One catalog lookup result. 404s are cached too (negative caching), so the
// uncovered share of a corpus is fetched at most once.
struct CatalogEntry {
    Doi doi;
    std::int64_t reader_count = 0;
    std::string fetched_at;  // ISO 8601 UTC
    CatalogStatus status = CatalogStatus::not_found;
};

namespace detail {

inline std::string utc_now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

// Append-only on-disk cache, one JSON entry per line keyed by canonical DOI.
// Writes are flushed per entry; a torn final line from a crash is skipped on
// load, so earlier entries survive intact. Entries are immutable once
// written (first entry for a DOI wins on load).
class ReadershipCache {
public:
    explicit ReadershipCache(const std::filesystem::path& dir) : path_(dir / "cache.jsonl") {
        std::filesystem::create_directories(dir);
        load();
        bool torn_tail = false;  // file ends mid-line after a crash
        {
            std::ifstream in(path_, std::ios::binary);
            if (in && in.seekg(0, std::ios::end) && in.tellg() > 0) {
                in.seekg(-1, std::ios::end);
                torn_tail = in.get() != '\n';
            }
        }
        out_.open(path_, std::ios::app);
        if (!out_) throw FileUnreadable(path_.string());
        if (torn_tail) out_ << '\n';  // seal the fragment so appends stay parseable
    }

    std::optional<CatalogEntry> lookup(const Doi& doi) const {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(doi.value());
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void store(const CatalogEntry& entry) {
        std::lock_guard lock(mutex_);
        if (!entries_.emplace(entry.doi.value(), entry).second) return;
        nlohmann::ordered_json j{{"doi", entry.doi.value()},
                                 {"status", entry.status == CatalogStatus::found ? "found" : "not_found"},
                                 {"readers", entry.reader_count},
                                 {"fetched_at", entry.fetched_at}};
        out_ << j.dump() << '\n';
        out_.flush();
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

    const std::filesystem::path& file() const { return path_; }

private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
            if (j.is_discarded() || !j.is_object() || !j.contains("doi")) continue;  // torn line
            try {
                CatalogEntry e;
                e.doi = Doi(j.at("doi").get<std::string>());
                e.status = j.value("status", "not_found") == "found" ? CatalogStatus::found
                                                                     : CatalogStatus::not_found;
                e.reader_count = j.value("readers", std::int64_t{0});
                e.fetched_at = j.value("fetched_at", "");
                entries_.emplace(e.doi.value(), std::move(e));
            } catch (const Error&) {
                continue;
            }
        }
    }

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CatalogEntry> entries_;
    std::ofstream out_;
};

// Retry/rate policy for the catalog API.
struct RatePolicy {
    double requests_per_sec = 10.0;
    int max_in_flight = 4;
    int max_retries = 3;                          // attempts after the first
    std::chrono::milliseconds base_backoff{100};  // doubles per retry
};

// Spaces request starts at least 1/rate apart, so no window of one second
// ever holds more than `requests_per_sec` starts. acquire() blocks until the
// caller's slot and records it for test probes.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_sec)
        : interval_(requests_per_sec > 0
                        ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(1.0 / requests_per_sec))
                        : std::chrono::steady_clock::duration::zero()) {}

    std::chrono::steady_clock::time_point acquire() {
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard lock(mutex_);
            const auto now = std::chrono::steady_clock::now();
            slot = next_ < now ? now : next_;
            next_ = slot + interval_;
            slots_.push_back(slot);
        }
        std::this_thread::sleep_until(slot);
        return slot;
    }

    std::vector<std::chrono::steady_clock::time_point> slots() const {
        std::lock_guard lock(mutex_);
        return slots_;
    }

private:
    std::chrono::steady_clock::duration interval_;
    mutable std::mutex mutex_;
    std::chrono::steady_clock::time_point next_{};
    std::vector<std::chrono::steady_clock::time_point> slots_;
};

// Batch enrichment accounting.
struct EnrichReport {
    std::int64_t cache_hits = 0;
    std::int64_t requests = 0;
    std::int64_t found = 0;
    std::int64_t not_found = 0;
    std::int64_t failures = 0;
    std::vector<std::pair<Doi, std::string>> errors;
};

// HTTP client for a Mendeley-style catalog: GET <base>/catalog?doi=<doi>
// with a bearer token from CITEFILTER_API_TOKEN. Results persist in a
// ReadershipCache; transient failures retry with bounded exponential
// backoff.
class CatalogClient {
public:
    CatalogClient(std::string base_url, ReadershipCache& cache, RatePolicy policy = {},
                  std::optional<std::string> token = std::nullopt)
        : base_url_(std::move(base_url)),
          cache_(cache),
          policy_(policy),
          limiter_(policy.requests_per_sec) {
        if (token) {
            token_ = *token;
        } else if (const char* env = std::getenv("CITEFILTER_API_TOKEN")) {
            token_ = env;
        }
    }

    // Cache hit returns without network traffic; a miss performs one lookup
    // and persists the result, negative-caching 404s.
    CatalogEntry fetch_readership(const Doi& doi) {
        if (auto cached = cache_.lookup(doi)) return *cached;
        CatalogEntry entry = fetch_remote(doi);
        cache_.store(entry);
        return entry;
    }

    // Fills every record's readership from the catalog (not_found -> absent),
    // preserving order. Per-record failures land in the report; the batch
    // never aborts for one DOI. Idempotent given a warm cache.
    EnrichReport enrich_corpus(std::span<PublicationRecord> records) {
        EnrichReport report;
        std::mutex report_mutex;
        std::atomic<std::size_t> cursor{0};

        const int n_workers =
            static_cast<int>(std::min<std::size_t>(records.size(),
                                                   static_cast<std::size_t>(std::max(1, policy_.max_in_flight))));
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= records.size()) return;
                    auto& record = records[i];
                    try {
                        const bool was_cached = cache_.lookup(record.id).has_value();
                        const CatalogEntry entry = fetch_readership(record.id);
                        std::lock_guard lock(report_mutex);
                        if (was_cached)
                            ++report.cache_hits;
                        else
                            ++report.requests;
                        if (entry.status == CatalogStatus::found) {
                            record.readership = entry.reader_count;
                            ++report.found;
                        } else {
                            record.readership = std::nullopt;
                            ++report.not_found;
                        }
                    } catch (const Error& e) {
                        std::lock_guard lock(report_mutex);
                        ++report.requests;
                        ++report.failures;
                        report.errors.emplace_back(record.id, e.what());
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        return report;
    }

    const RateLimiter& limiter() const { return limiter_; }

private:
    CatalogEntry fetch_remote(const Doi& doi) {
        std::string last_error;
        for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(policy_.base_backoff * (1 << (attempt - 1)));
            limiter_.acquire();

            httplib::Client client(base_url_);
            client.set_connection_timeout(std::chrono::seconds(10));
            client.set_read_timeout(std::chrono::seconds(10));
            httplib::Headers headers;
            if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
            auto res = client.Get(
                "/catalog?doi=" + httplib::detail::encode_query_param(doi.value()), headers);

            if (!res) {
                last_error = httplib::to_string(res.error());
                continue;  // transient transport failure
            }
            if (res->status == 200) {
                nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
                if (j.is_discarded() || !j.contains("reader_count"))
                    throw NetworkError("catalog returned an unparseable body for " + doi.value());
                return {doi, j.at("reader_count").get<std::int64_t>(),
                        detail::utc_now_iso8601(), CatalogStatus::found};
            }
            if (res->status == 404)
                return {doi, 0, detail::utc_now_iso8601(), CatalogStatus::not_found};
            if (res->status == 401 || res->status == 403)
                throw AuthFailure("catalog rejected the API token (HTTP " +
                                  std::to_string(res->status) + ")");
            if (res->status == 429) {
                last_error = "HTTP 429";
                continue;
            }
            if (res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            throw NetworkError("unexpected catalog response HTTP " +
                               std::to_string(res->status) + " for " + doi.value());
        }
        if (last_error == "HTTP 429")
            throw RateLimited("catalog rate limit persisted after " +
                              std::to_string(policy_.max_retries) + " retries");
        throw NetworkError("catalog unreachable for " + doi.value() + ": " + last_error);
    }

    std::string base_url_;
    ReadershipCache& cache_;
    RatePolicy policy_;
    RateLimiter limiter_;
    std::string token_;
};

}  // namespace citefilter
