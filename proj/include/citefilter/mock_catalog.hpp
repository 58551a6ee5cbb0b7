#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"

namespace citefilter {

// In-process catalog stand-in for tests and offline runs. Serves
// GET /catalog?doi=<doi> from a fixture map and instruments every request:
// arrival times, in-flight concurrency high-water mark, and a total counter.
class MockCatalogServer {
public:
    MockCatalogServer() {
        server_.Get("/catalog", [this](const httplib::Request& req, httplib::Response& res) {
            const auto arrived = std::chrono::steady_clock::now();
            const int in_flight = ++in_flight_;
            {
                std::lock_guard lock(mutex_);
                arrivals_.push_back(arrived);
                if (in_flight > max_in_flight_) max_in_flight_ = in_flight;
            }
            ++total_requests_;

            handle(req, res);

            if (latency_ > std::chrono::milliseconds::zero()) std::this_thread::sleep_for(latency_);
            --in_flight_;
        });
    }

    ~MockCatalogServer() { stop(); }

    void set_reader_count(const Doi& doi, std::int64_t count) {
        std::lock_guard lock(mutex_);
        fixture_[doi.value()] = count;
    }

    void require_token(std::string token) {
        std::lock_guard lock(mutex_);
        required_token_ = std::move(token);
    }

    // The next `n` requests answer with `status` before normal service resumes.
    void fail_next(int n, int status) {
        std::lock_guard lock(mutex_);
        failures_left_ = n;
        failure_status_ = status;
    }

    void set_latency(std::chrono::milliseconds ms) { latency_ = ms; }

    void start() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw NetworkError("mock catalog could not bind a port");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int port() const { return port_; }

    std::int64_t total_requests() const { return total_requests_.load(); }

    int max_in_flight() const {
        std::lock_guard lock(mutex_);
        return max_in_flight_;
    }

    std::vector<std::chrono::steady_clock::time_point> arrivals() const {
        std::lock_guard lock(mutex_);
        return arrivals_;
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mutex_);
        if (failures_left_ > 0) {
            --failures_left_;
            res.status = failure_status_;
            return;
        }
        if (!required_token_.empty() &&
            req.get_header_value("Authorization") != "Bearer " + required_token_) {
            res.status = 401;
            return;
        }
        if (!req.has_param("doi")) {
            res.status = 400;
            return;
        }
        auto it = fixture_.find(req.get_param_value("doi"));
        if (it == fixture_.end()) {
            res.status = 404;
            return;
        }
        nlohmann::json j{{"doi", it->first}, {"reader_count", it->second}};
        res.set_content(j.dump(), "application/json");
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;

    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::int64_t> fixture_;
    std::string required_token_;
    int failures_left_ = 0;
    int failure_status_ = 500;
    std::chrono::milliseconds latency_{0};

    std::atomic<std::int64_t> total_requests_{0};
    std::atomic<int> in_flight_{0};
    int max_in_flight_ = 0;
    std::vector<std::chrono::steady_clock::time_point> arrivals_;
};

}  // namespace citefilter
