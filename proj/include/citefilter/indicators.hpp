#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "citefilter/errors.hpp"
#include "citefilter/record.hpp"

namespace citefilter {

enum class GroupDimension { year, field, year_field, all };

// One Table-1/Table-2-shaped aggregate row. MRS and MCS denominators are P
// (all publications in the group), not the covered subset; absent readership
// contributes 0 to TRS. A publication is covered iff it has at least one
// reader, so a cached reader count of 0 does not count as coverage.
struct GroupSummary {
    std::string group;
    std::int64_t p = 0;
    std::int64_t covered = 0;
    double coverage_share = 0.0;
    std::int64_t trs = 0;
    double mrs = 0.0;
    std::int64_t tcs = 0;
    double mcs = 0.0;
};

namespace detail {

struct Accumulator {
    std::int64_t p = 0, covered = 0, trs = 0, tcs = 0;

    void add(const PublicationRecord& r) {
        ++p;
        if (r.readership && *r.readership >= 1) ++covered;
        trs += r.readership.value_or(0);
        tcs += r.citations;
    }

    GroupSummary finish(std::string group) const {
        GroupSummary s;
        s.group = std::move(group);
        s.p = p;
        s.covered = covered;
        s.coverage_share = p > 0 ? static_cast<double>(covered) / static_cast<double>(p) : 0.0;
        s.trs = trs;
        s.mrs = p > 0 ? static_cast<double>(trs) / static_cast<double>(p) : 0.0;
        s.tcs = tcs;
        s.mcs = p > 0 ? static_cast<double>(tcs) / static_cast<double>(p) : 0.0;
        return s;
    }
};

}  // namespace detail

// Builds a summary row from pre-aggregated totals, for callers that already
// hold group counts rather than records.
inline GroupSummary summary_from_totals(std::string group, std::int64_t p, std::int64_t covered,
                                        std::int64_t trs, std::int64_t tcs) {
    if (p < 0 || covered < 0 || covered > p || trs < 0 || tcs < 0)
        throw BadSpec("inconsistent group totals");
    detail::Accumulator acc;
    acc.p = p;
    acc.covered = covered;
    acc.trs = trs;
    acc.tcs = tcs;
    return acc.finish(std::move(group));
}

// Aggregates the analysis set along one dimension. Emits the "all" row
// first, then one row per non-empty group in sorted order. Per-field rows
// whole-count multi-field publications (a publication contributes fully to
// every field it belongs to), so field rows are not additive when
// multi-field records exist; year rows always are.
inline std::vector<GroupSummary> summarize(std::span<const PublicationRecord> records,
                                           GroupDimension dim) {
    detail::Accumulator all;
    std::map<std::string, detail::Accumulator> groups;

    for (const auto& r : records) {
        if (!r.in_analysis_set) continue;
        all.add(r);
        switch (dim) {
            case GroupDimension::all:
                break;
            case GroupDimension::year:
                groups[std::to_string(r.pub_year)].add(r);
                break;
            case GroupDimension::field:
                for (const auto& f : r.field_memberships) groups[f.field_id].add(r);
                break;
            case GroupDimension::year_field:
                for (const auto& f : r.field_memberships)
                    groups[f.field_id + "/" + std::to_string(r.pub_year)].add(r);
                break;
        }
    }
    if (all.p == 0) throw EmptyCorpus();

    std::vector<GroupSummary> out;
    out.push_back(all.finish("all"));
    for (const auto& [key, acc] : groups) out.push_back(acc.finish(key));
    return out;
}

// Per-journal aggregate over the whole citation window.
struct JournalStats {
    std::string journal_id;
    std::int64_t n_pubs = 0;
    std::int64_t total_citations = 0;
    double jcs = 0.0;  // total_citations / n_pubs
};

enum class JcsWindow { whole_window, per_year };

using JournalStatsMap = std::unordered_map<std::string, JournalStats>;

namespace detail {

inline std::string jcs_key(const std::string& journal_id, int year, JcsWindow window) {
    return window == JcsWindow::whole_window ? journal_id
                                             : journal_id + "@" + std::to_string(year);
}

}  // namespace detail

// JCS over all reference-universe outputs of each journal, DOI-covered or
// not. One value per journal for the whole window by default; the per-year
// variant keys stats by journal and publication year.
inline JournalStatsMap journal_citation_scores(std::span<const PublicationRecord> records,
                                               JcsWindow window = JcsWindow::whole_window) {
    JournalStatsMap stats;
    for (const auto& r : records) {
        if (!r.in_reference_universe) continue;
        auto& s = stats[detail::jcs_key(r.journal_id, r.pub_year, window)];
        s.journal_id = r.journal_id;
        ++s.n_pubs;
        s.total_citations += r.citations;
    }
    for (auto& [_, s] : stats)
        s.jcs = static_cast<double>(s.total_citations) / static_cast<double>(s.n_pubs);
    return stats;
}

// Looks up the JCS a record joins to; MissingJournal cannot fire when the
// stats were computed over a universe containing the analysis set.
inline double jcs_of(const JournalStatsMap& stats, const PublicationRecord& r,
                     JcsWindow window = JcsWindow::whole_window) {
    auto it = stats.find(detail::jcs_key(r.journal_id, r.pub_year, window));
    if (it == stats.end()) throw MissingJournal(r.journal_id);
    return it->second.jcs;
}

}  // namespace citefilter
