#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/record.hpp"

namespace citefilter {

// Fractional membership in the top-k% class, field-weight-averaged, plus the
// binary label obtained by treating any positive membership as full
// membership.
struct HighlyCitedLabel {
    Doi doi;
    double membership = 0.0;  // in [0,1]
    bool is_highly_cited = false;
};

using LabelMap = std::unordered_map<Doi, HighlyCitedLabel, DoiHash>;

// Fractional top-`fraction` memberships for one field x year cell.
//
// With t = fraction * n target slots and the counts sorted descending, a tie
// class occupying rank positions [a, b] (1-indexed) gives each member
// clamp((t - (a-1)) / (b - a + 1), 0, 1): classes fully above the boundary
// get 1, the straddling class splits its slot share evenly, and the
// memberships always sum to t. Returned in input order.
inline std::vector<double> cell_memberships(std::span<const std::int64_t> citation_counts,
                                            double fraction) {
    if (!(fraction > 0.0) || !(fraction < 1.0)) throw BadFraction(fraction);
    const std::size_t n = citation_counts.size();
    if (n == 0) throw BadSpec("cell_memberships: empty cell");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return citation_counts[a] > citation_counts[b];
    });

    const double t = fraction * static_cast<double>(n);
    std::vector<double> memberships(n, 0.0);
    std::size_t class_begin = 0;
    while (class_begin < n) {
        std::size_t class_end = class_begin + 1;  // past-the-end of the tie class
        while (class_end < n &&
               citation_counts[order[class_end]] == citation_counts[order[class_begin]])
            ++class_end;
        const double share = (t - static_cast<double>(class_begin)) /
                             static_cast<double>(class_end - class_begin);
        const double m = std::clamp(share, 0.0, 1.0);
        if (m == 0.0) break;  // all later classes rank below the boundary
        for (std::size_t i = class_begin; i < class_end; ++i) memberships[order[i]] = m;
        class_begin = class_end;
    }
    return memberships;
}

// Labels every reference-universe record. Memberships are computed
// independently per (field, year) cell; a publication's overall membership is
// the field-weighted average of its cell memberships, and it is highly cited
// iff that aggregate is positive. A cell with a single record is degenerate
// but defined (membership = fraction).
inline LabelMap label_corpus(std::span<const PublicationRecord> records, double fraction) {
    if (!(fraction > 0.0) || !(fraction < 1.0)) throw BadFraction(fraction);

    struct CellMember {
        std::size_t record_index;
        double weight;
    };
    struct Cell {
        std::vector<std::int64_t> counts;
        std::vector<CellMember> members;
    };
    std::unordered_map<std::string, Cell> cells;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!r.in_reference_universe) continue;
        for (const auto& f : r.field_memberships) {
            auto& cell = cells[f.field_id + "@" + std::to_string(r.pub_year)];
            cell.counts.push_back(r.citations);
            cell.members.push_back({i, f.weight});
        }
    }

    std::vector<double> overall(records.size(), 0.0);
    for (auto& [_, cell] : cells) {
        auto memberships = cell_memberships(cell.counts, fraction);
        for (std::size_t i = 0; i < cell.members.size(); ++i)
            overall[cell.members[i].record_index] += cell.members[i].weight * memberships[i];
    }

    LabelMap labels;
    labels.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!r.in_reference_universe) continue;
        labels.emplace(r.id, HighlyCitedLabel{r.id, overall[i], overall[i] > 0.0});
    }
    return labels;
}

inline LabelMap label_corpus(std::span<const PublicationRecord> records,
                             const CorpusConfig& config) {
    return label_corpus(records, config.top_fraction);
}

// Cells smaller than 1/fraction cannot host a full slot; they still get
// memberships by the same formula but are worth surfacing in run output.
inline std::size_t count_small_cells(std::span<const PublicationRecord> records,
                                     double fraction) {
    std::unordered_map<std::string, std::size_t> sizes;
    for (const auto& r : records) {
        if (!r.in_reference_universe) continue;
        for (const auto& f : r.field_memberships)
            ++sizes[f.field_id + "@" + std::to_string(r.pub_year)];
    }
    std::size_t small = 0;
    for (const auto& [_, n] : sizes)
        if (static_cast<double>(n) * fraction < 1.0) ++small;
    return small;
}

}  // namespace citefilter
