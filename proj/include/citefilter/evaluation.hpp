#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/indicators.hpp"
#include "citefilter/percentile.hpp"
#include "citefilter/record.hpp"
#include "citefilter/rng.hpp"

namespace citefilter {

// A ranking signal: a value per analysis-set publication, higher = selected
// earlier. Absent readership maps to 0 at construction time.
struct RankingSignal {
    std::string name;
    std::unordered_map<Doi, double, DoiHash> value_of;
};

inline RankingSignal readership_signal(std::span<const PublicationRecord> records) {
    RankingSignal s{.name = "RS", .value_of = {}};
    for (const auto& r : records)
        if (r.in_analysis_set)
            s.value_of.emplace(r.id, static_cast<double>(r.readership.value_or(0)));
    return s;
}

inline RankingSignal jcs_signal(std::span<const PublicationRecord> records,
                                const JournalStatsMap& stats,
                                JcsWindow window = JcsWindow::whole_window) {
    RankingSignal s{.name = "JCS", .value_of = {}};
    for (const auto& r : records)
        if (r.in_analysis_set) s.value_of.emplace(r.id, jcs_of(stats, r, window));
    return s;
}

// Self-test signal: the label-defining citation counts themselves.
inline RankingSignal citation_signal(std::span<const PublicationRecord> records) {
    RankingSignal s{.name = "citations", .value_of = {}};
    for (const auto& r : records)
        if (r.in_analysis_set) s.value_of.emplace(r.id, static_cast<double>(r.citations));
    return s;
}

struct PrPoint {
    std::int64_t k = 0;  // selection size
    double recall = 0.0;
    double precision = 0.0;
};

// Precision-recall curve of one signal against the highly-cited labels,
// evaluated at every prefix of the descending ranking. With repetitions > 1
// the points are the pointwise mean over independently re-randomized tie
// orders.
struct PrCurve {
    std::string signal_name;
    std::vector<PrPoint> points;  // k = 1..n, full resolution
    std::int64_t h_total = 0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    int repetitions = 1;
};

namespace detail {

struct RankedItem {
    double value = 0.0;
    std::uint64_t tiebreak = 0;
    std::uint32_t index = 0;
    bool relevant = false;
};

}  // namespace detail

// Ranks the analysis set by `signal` descending, ties sorted randomly from a
// substream keyed by (seed, signal name, repetition), and scans every prefix.
// Tiebreak draws are keyed by DOI, so a strictly increasing transform of the
// signal values leaves the curve bit-identical.
inline PrCurve pr_curve(std::span<const PublicationRecord> records, const LabelMap& labels,
                        const RankingSignal& signal, std::uint64_t seed, int repetitions = 1) {
    if (repetitions < 1) throw BadSpec("repetitions must be >= 1");

    std::vector<detail::RankedItem> items;
    std::vector<std::uint64_t> doi_keys;
    for (const auto& r : records) {
        if (!r.in_analysis_set) continue;
        auto value_it = signal.value_of.find(r.id);
        if (value_it == signal.value_of.end())
            throw Error("signal \"" + signal.name + "\" undefined for " + r.id.value());
        auto label_it = labels.find(r.id);
        if (label_it == labels.end()) throw Error("no label for " + r.id.value());
        items.push_back({value_it->second, 0, static_cast<std::uint32_t>(items.size()),
                         label_it->second.is_highly_cited});
        doi_keys.push_back(rng::hash_label(r.id.value()));
    }
    if (items.empty()) throw EmptyAnalysisSet();
    const std::int64_t n = static_cast<std::int64_t>(items.size());
    const std::int64_t h_total =
        std::count_if(items.begin(), items.end(), [](const auto& it) { return it.relevant; });
    if (h_total == 0) throw NoPositives();

    PrCurve curve{.signal_name = signal.name,
                  .points = std::vector<PrPoint>(static_cast<std::size_t>(n)),
                  .h_total = h_total,
                  .n = n,
                  .seed = seed,
                  .repetitions = repetitions};
    std::vector<double> precision_sum(items.size(), 0.0), recall_sum(items.size(), 0.0);

    for (int rep = 0; rep < repetitions; ++rep) {
        const std::uint64_t stream =
            rng::derive(seed, rng::hash_label(signal.name), static_cast<std::uint64_t>(rep));
        for (std::size_t i = 0; i < items.size(); ++i)
            items[i].tiebreak = rng::mix64(stream ^ doi_keys[items[i].index]);
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
            if (a.value != b.value) return a.value > b.value;
            if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
            return a.index < b.index;
        });
        std::int64_t hits = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            hits += items[i].relevant ? 1 : 0;
            precision_sum[i] += static_cast<double>(hits) / static_cast<double>(i + 1);
            recall_sum[i] += static_cast<double>(hits) / static_cast<double>(h_total);
        }
    }

    for (std::size_t i = 0; i < items.size(); ++i) {
        curve.points[i] = {static_cast<std::int64_t>(i + 1),
                           recall_sum[i] / repetitions,
                           precision_sum[i] / repetitions};
    }
    return curve;
}

// Precision at the smallest selection whose recall reaches r (step
// interpolation, no smoothing between prefixes).
inline double precision_at_recall(const PrCurve& curve, double r) {
    if (!(r > 0.0) || r > 1.0) throw BadRecall(r);
    auto it = std::lower_bound(curve.points.begin(), curve.points.end(), r,
                               [](const PrPoint& p, double target) { return p.recall < target; });
    if (it == curve.points.end()) it = std::prev(curve.points.end());  // recall tops out at 1
    return it->precision;
}

// Share of a selection that is not highly cited, in percent. Written as a
// difference of scaled terms so round-percentage inputs map to exact outputs.
inline double error_rate(double precision) { return 100.0 - 100.0 * precision; }

// Per-grid-point comparison of several signals' curves. A signal dominates
// the whole spectrum iff its precision is >= every other's at every grid
// point.
struct DominanceReport {
    std::vector<double> grid;
    std::vector<std::string> signal_names;
    std::vector<std::vector<double>> precision;  // [grid point][signal]
    std::vector<std::string> winner;             // name of the strictly best signal, or "tie"

    bool dominates(std::size_t a, std::size_t b) const {
        for (const auto& row : precision)
            if (row[a] < row[b]) return false;
        return true;
    }
};

inline std::vector<double> default_recall_grid() {
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

inline DominanceReport compare_signals(std::span<const PrCurve> curves,
                                       std::vector<double> grid = default_recall_grid()) {
    if (curves.size() < 2) throw BadSpec("compare_signals needs at least two signals");
    DominanceReport report;
    report.grid = std::move(grid);
    for (const auto& c : curves) report.signal_names.push_back(c.signal_name);
    for (double r : report.grid) {
        std::vector<double> row;
        for (const auto& c : curves) row.push_back(precision_at_recall(c, r));
        auto best = std::max_element(row.begin(), row.end());
        const bool tie = std::count(row.begin(), row.end(), *best) > 1;
        report.winner.push_back(tie ? "tie"
                                    : report.signal_names[static_cast<std::size_t>(
                                          best - row.begin())]);
        report.precision.push_back(std::move(row));
    }
    return report;
}

inline DominanceReport compare_signals(std::span<const PublicationRecord> records,
                                       const LabelMap& labels,
                                       std::span<const RankingSignal> signals, std::uint64_t seed,
                                       std::vector<double> grid = default_recall_grid(),
                                       int repetitions = 1) {
    std::vector<PrCurve> curves;
    curves.reserve(signals.size());
    for (const auto& s : signals) curves.push_back(pr_curve(records, labels, s, seed, repetitions));
    return compare_signals(curves, std::move(grid));
}

}  // namespace citefilter
