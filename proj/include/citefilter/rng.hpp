#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>

namespace citefilter {

namespace rng {

// splitmix64 finalizer; the workhorse behind all derived streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives an independent substream key from a master seed and labels.
// Curves, cells, and records each get their own stream, so results are
// deterministic regardless of evaluation order or thread schedule.
inline std::uint64_t derive(std::uint64_t key) { return mix64(key); }

template <typename... Rest>
inline std::uint64_t derive(std::uint64_t key, std::uint64_t label, Rest... rest) {
    return derive(mix64(key ^ mix64(label)), rest...);
}

// Counter-based stream: stateless apart from the counter, cheap to fork.
class Stream {
public:
    explicit Stream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1); safe as a quantile-function argument.
    double next_open_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal pair (Box-Muller).
    std::pair<double, double> next_normal_pair() {
        const double u1 = next_open_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double next_normal() { return next_normal_pair().first; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

}  // namespace rng

}  // namespace citefilter
