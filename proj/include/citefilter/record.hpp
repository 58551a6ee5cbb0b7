#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"

namespace citefilter {

enum class DocType { article, review };

inline const char* to_string(DocType t) { return t == DocType::article ? "article" : "review"; }

inline std::optional<DocType> parse_doc_type(std::string_view s) {
    if (s == "article") return DocType::article;
    if (s == "review") return DocType::review;
    return std::nullopt;
}

// One subject-category membership of a publication.
struct FieldShare {
    std::string field_id;
    double weight = 1.0;  // in (0,1]

    friend bool operator==(const FieldShare&, const FieldShare&) = default;
};

// One scholarly output. Immutable after construction by convention; all
// pipeline stages copy rather than mutate shared state.
struct PublicationRecord {
    Doi id;
    int pub_year = 0;
    DocType doc_type = DocType::article;
    std::string journal_id;
    std::vector<FieldShare> field_memberships;
    std::int64_t citations = 0;
    std::optional<std::int64_t> readership;  // absent = not found in the catalog
    bool in_reference_universe = true;       // participates in top-k% labeling
    bool in_analysis_set = true;             // participates in PR evaluation and summaries

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

// Throws SchemaViolation (line 0) if the record breaks an invariant.
inline void validate(const PublicationRecord& r) {
    if (r.field_memberships.empty())
        throw SchemaViolation(0, "record " + r.id.value() + ": no field memberships");
    double sum = 0.0;
    for (const auto& f : r.field_memberships) {
        if (f.field_id.empty())
            throw SchemaViolation(0, "record " + r.id.value() + ": empty field id");
        if (!(f.weight > 0.0) || f.weight > 1.0)
            throw SchemaViolation(0, "record " + r.id.value() + ": field weight out of (0,1]");
        sum += f.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SchemaViolation(0, "record " + r.id.value() + ": field weights sum to " +
                                     std::to_string(sum) + ", expected 1");
    if (r.citations < 0)
        throw SchemaViolation(0, "record " + r.id.value() + ": negative citation count");
    if (r.readership && *r.readership < 0)
        throw SchemaViolation(0, "record " + r.id.value() + ": negative readership count");
    if (r.in_analysis_set && !r.in_reference_universe)
        throw SchemaViolation(0, "record " + r.id.value() +
                                     ": in the analysis set but not in the reference universe");
}

// Corpus-wide configuration: citation window, readership snapshot date,
// top-k fraction for labeling, and the field classification in use.
struct CorpusConfig {
    int window_start = 2004;
    int window_end = 2014;
    std::string readership_snapshot_date = "2015-02-09";
    double top_fraction = 0.10;
    std::string field_scheme = "leiden-2013";
};

inline void validate(const CorpusConfig& c) {
    if (!(c.top_fraction > 0.0) || !(c.top_fraction < 1.0)) throw BadFraction(c.top_fraction);
    if (c.window_start > c.window_end)
        throw BadSpec("citation window start " + std::to_string(c.window_start) +
                      " exceeds end " + std::to_string(c.window_end));
}

}  // namespace citefilter
