#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "citefilter/errors.hpp"

namespace citefilter {

// Negative binomial with mean mu and size (dispersion) r: variance
// mu + mu^2/r, so smaller r means heavier overdispersion. The CDF is
// tabulated once, and sampling is a binary search per draw.
class NegBinomialTable {
public:
    NegBinomialTable(double mu, double r, bool zero_truncated = false, double tail = 1e-12) {
        if (!(mu > 0.0) || !(r > 0.0)) throw BadSpec("negative binomial needs mu > 0 and r > 0");
        const double q = mu / (r + mu);               // failure probability
        double pmf = std::exp(r * std::log1p(-q));    // P(X = 0) = (1-q)^r
        const double zero_mass = pmf;
        const double norm = zero_truncated ? 1.0 - zero_mass : 1.0;
        if (zero_truncated && !(norm > 0.0))
            throw BadSpec("zero-truncated negative binomial has no mass above 0");

        first_value_ = zero_truncated ? 1 : 0;
        std::int64_t k = 0;
        if (zero_truncated) {  // skip the zero bucket: the first entry is P(X = 1)
            pmf *= r * q;
            k = 1;
        }
        double cum = pmf / norm;
        cdf_.push_back(std::min(cum, 1.0));
        while (cum < 1.0 - tail && k < max_support) {
            pmf *= (static_cast<double>(k) + r) / (static_cast<double>(k) + 1.0) * q;
            ++k;
            cum += pmf / norm;
            cdf_.push_back(std::min(cum, 1.0));
        }
    }

    // Smallest k with CDF(k) >= u.
    std::int64_t quantile(double u) const {
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) it = std::prev(cdf_.end());
        return first_value_ + (it - cdf_.begin());
    }

    std::int64_t support_size() const { return static_cast<std::int64_t>(cdf_.size()); }

    static constexpr std::int64_t max_support = 1 << 22;

private:
    std::vector<double> cdf_;  // cdf_[i] = P(X <= first_value_ + i)
    std::int64_t first_value_ = 0;
};

// P(X = 0) for NB(mu, r).
inline double neg_binomial_zero_mass(double mu, double r) {
    return std::exp(r * std::log1p(-mu / (r + mu)));
}

// Mean of the zero-truncated NB(mu, r): mu / (1 - P(X=0)).
inline double zero_truncated_mean(double mu, double r) {
    return mu / (1.0 - neg_binomial_zero_mass(mu, r));
}

// Finds mu such that coverage * zero_truncated_mean(mu, r) equals
// `target_mean`, i.e. the untruncated parameter whose covered-only draws
// average out to the requested all-publications mean. Bisection; the
// truncated mean is strictly increasing in mu and tends to 1 as mu -> 0.
inline double calibrate_zero_truncated_mu(double target_mean, double coverage, double r) {
    if (!(coverage > 0.0) || coverage > 1.0)
        throw BadSpec("coverage must lie in (0,1] to calibrate readership");
    const double covered_mean = target_mean / coverage;
    if (covered_mean <= 1.0)
        throw BadSpec("readership target " + std::to_string(target_mean) +
                      " is unreachable at coverage " + std::to_string(coverage) +
                      " (covered publications have at least one reader)");
    double lo = 1e-9, hi = covered_mean;
    while (zero_truncated_mean(hi, r) < covered_mean) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (zero_truncated_mean(mid, r) < covered_mean ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace citefilter
