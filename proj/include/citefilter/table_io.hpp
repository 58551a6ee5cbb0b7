#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "citefilter/corpus_io.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/evaluation.hpp"
#include "citefilter/indicators.hpp"
#include "citefilter/percentile.hpp"

namespace citefilter {

namespace detail {

inline std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

inline std::string shortest(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    double parsed = 0.0;
    std::sscanf(buf, "%lg", &parsed);
    if (parsed == x) {
        for (int p = 1; p < 17; ++p) {
            std::snprintf(buf, sizeof buf, "%.*g", p, x);
            std::sscanf(buf, "%lg", &parsed);
            if (parsed == x) break;
        }
    }
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FileUnreadable(path.string());
    return out;
}

}  // namespace detail

// Summary table, Table-1 column roles: group, P, Cov, Cov_pct, TRS, MRS, TCS, MCS.
inline void write_summaries(std::ostream& out, const std::vector<GroupSummary>& rows) {
    out << "group\tP\tCov\tCov_pct\tTRS\tMRS\tTCS\tMCS\n";
    for (const auto& s : rows) {
        out << s.group << '\t' << s.p << '\t' << s.covered << '\t'
            << detail::fixed(100.0 * s.coverage_share, 4) << '\t' << s.trs << '\t'
            << detail::fixed(s.mrs, 4) << '\t' << s.tcs << '\t' << detail::fixed(s.mcs, 4)
            << '\n';
    }
}

inline void write_summaries(const std::filesystem::path& path,
                            const std::vector<GroupSummary>& rows) {
    auto out = detail::open_out(path);
    write_summaries(out, rows);
}

inline void write_labels(std::ostream& out, const LabelMap& labels) {
    std::vector<const HighlyCitedLabel*> sorted;
    sorted.reserve(labels.size());
    for (const auto& [_, label] : labels) sorted.push_back(&label);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->doi < b->doi; });
    out << "doi\tmembership\thighly_cited\n";
    for (const auto* l : sorted)
        out << l->doi.value() << '\t' << detail::shortest(l->membership) << '\t'
            << (l->is_highly_cited ? 1 : 0) << '\n';
}

inline void write_labels(const std::filesystem::path& path, const LabelMap& labels) {
    auto out = detail::open_out(path);
    write_labels(out, labels);
}

inline LabelMap read_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable(path.string());
    LabelMap labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;  // header
        const auto cells = detail::split(line, '\t');
        if (cells.size() < 2) throw SchemaViolation(line_no, "label row needs doi and membership");
        try {
            HighlyCitedLabel l;
            l.doi = Doi(cells[0]);
            l.membership = std::stod(cells[1]);
            l.is_highly_cited = l.membership > 0.0;
            labels.emplace(l.doi, std::move(l));
        } catch (const std::exception& e) {
            throw SchemaViolation(line_no, e.what());
        }
    }
    return labels;
}

// Curve export: signal, k, recall, precision. Full resolution on request;
// otherwise downsampled to the first prefix reaching each of `grid` evenly
// spaced recall levels, plus k=1 and k=n, to bound file sizes.
inline void write_curve(std::ostream& out, const PrCurve& curve, int grid = 1000,
                        bool full_resolution = false, bool header = true) {
    if (header) out << "signal\tk\trecall\tprecision\n";
    auto emit = [&](const PrPoint& p) {
        out << curve.signal_name << '\t' << p.k << '\t' << detail::shortest(p.recall) << '\t'
            << detail::shortest(p.precision) << '\n';
    };
    if (full_resolution || static_cast<std::int64_t>(grid) >= curve.n) {
        for (const auto& p : curve.points) emit(p);
        return;
    }
    std::int64_t last_emitted = 0;
    auto emit_once = [&](std::size_t idx) {
        const auto& p = curve.points[idx];
        if (p.k <= last_emitted) return;
        emit(p);
        last_emitted = p.k;
    };
    emit_once(0);
    std::size_t i = 0;
    for (int g = 1; g <= grid; ++g) {
        const double target = static_cast<double>(g) / grid;
        while (i + 1 < curve.points.size() && curve.points[i].recall < target) ++i;
        emit_once(i);
    }
    emit_once(curve.points.size() - 1);
}

inline void write_curves(const std::filesystem::path& path, const std::vector<PrCurve>& curves,
                         int grid = 1000, bool full_resolution = false) {
    auto out = detail::open_out(path);
    bool header = true;
    for (const auto& c : curves) {
        write_curve(out, c, grid, full_resolution, header);
        header = false;
    }
}

// Dominance report: recall grid point, one precision column per signal, winner.
inline void write_dominance(std::ostream& out, const DominanceReport& report) {
    out << "recall_grid_point";
    for (const auto& name : report.signal_names) out << '\t' << "precision_" << name;
    out << "\twinner\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        out << detail::shortest(report.grid[i]);
        for (double p : report.precision[i]) out << '\t' << detail::shortest(p);
        out << '\t' << report.winner[i] << '\n';
    }
}

inline void write_dominance(const std::filesystem::path& path, const DominanceReport& report) {
    auto out = detail::open_out(path);
    write_dominance(out, report);
}

}  // namespace citefilter
