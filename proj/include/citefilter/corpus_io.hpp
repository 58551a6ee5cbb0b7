#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "citefilter/errors.hpp"
#include "citefilter/record.hpp"

namespace citefilter {

struct LineIssue {
    std::size_t line = 0;
    std::string reason;
};

// Per-ingest accounting. Every input line is either emitted or shows up in
// exactly one exclusion counter, so emitted + duplicates + filtered_doc_type
// + invalid == lines.
struct IngestReport {
    std::int64_t lines = 0;  // record lines seen (header and blank lines excluded)
    std::int64_t emitted = 0;
    std::int64_t duplicates = 0;
    std::int64_t filtered_doc_type = 0;
    std::int64_t invalid = 0;
    std::int64_t unknown_keys = 0;
    std::vector<LineIssue> issues;  // capped; `invalid` holds the true count

    static constexpr std::size_t max_recorded_issues = 1000;

    void note_issue(std::size_t line, std::string reason) {
        ++invalid;
        if (issues.size() < max_recorded_issues) issues.push_back({line, std::move(reason)});
    }
};

namespace detail {

inline const std::unordered_set<std::string>& known_record_keys() {
    static const std::unordered_set<std::string> keys = {
        "doi", "year", "doc_type", "journal", "fields",
        "citations", "readers", "in_universe", "in_analysis"};
    return keys;
}

// Builds a validated record from parsed pieces; shared by the JSONL and
// tabular paths. `doc_type_raw` outside {article, review} is signalled by
// returning false with `filtered` set.
struct ParsedLine {
    PublicationRecord record;
    bool filtered_doc_type = false;
};

inline PublicationRecord finish_record(Doi doi, int year, DocType doc_type, std::string journal,
                                       std::vector<FieldShare> fields, std::int64_t citations,
                                       std::optional<std::int64_t> readers,
                                       std::optional<bool> in_universe,
                                       std::optional<bool> in_analysis, std::size_t line_no) {
    // Categories listed without weights get equal shares.
    std::size_t unweighted = 0;
    for (const auto& f : fields)
        if (f.weight < 0) ++unweighted;
    if (unweighted == fields.size()) {
        for (auto& f : fields) f.weight = 1.0 / static_cast<double>(fields.size());
    } else if (unweighted != 0) {
        throw SchemaViolation(line_no, "fields mix weighted and unweighted entries");
    }

    PublicationRecord r;
    r.id = std::move(doi);
    r.pub_year = year;
    r.doc_type = doc_type;
    r.journal_id = std::move(journal);
    r.field_memberships = std::move(fields);
    r.citations = citations;
    r.readership = readers;
    r.in_reference_universe = in_universe.value_or(true);
    r.in_analysis_set = in_analysis.value_or(r.in_reference_universe);
    try {
        validate(r);
    } catch (const SchemaViolation& e) {
        throw SchemaViolation(line_no, e.what());
    }
    return r;
}

inline ParsedLine parse_json_line(const std::string& text, std::size_t line_no,
                                  IngestReport& report) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw SchemaViolation(line_no, "not a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known_record_keys().count(key)) ++report.unknown_keys;
    for (const char* key : {"doi", "year", "doc_type", "journal", "fields", "citations"})
        if (!j.contains(key)) throw SchemaViolation(line_no, std::string("missing key \"") + key + "\"");

    std::string doc_type_raw = j.at("doc_type").is_string() ? j.at("doc_type").get<std::string>() : "";
    auto doc_type = parse_doc_type(doc_type_raw);
    if (!doc_type) return {.record = {}, .filtered_doc_type = true};

    if (!j.at("fields").is_array() || j.at("fields").empty())
        throw SchemaViolation(line_no, "\"fields\" must be a non-empty list");
    std::vector<FieldShare> fields;
    for (const auto& f : j.at("fields")) {
        if (f.is_string()) {
            fields.push_back({f.get<std::string>(), -1.0});
        } else if (f.is_object() && f.contains("id")) {
            fields.push_back({f.at("id").get<std::string>(),
                              f.contains("weight") ? f.at("weight").get<double>() : -1.0});
        } else {
            throw SchemaViolation(line_no, "field entry must be a string or {id, weight?}");
        }
    }

    Doi doi;
    try {
        doi = canonicalize_doi(j.at("doi").get<std::string>());
    } catch (const MalformedDoi& e) {
        throw SchemaViolation(line_no, e.what());
    } catch (const nlohmann::json::exception&) {
        throw SchemaViolation(line_no, "\"doi\" must be a string");
    }

    try {
        std::optional<std::int64_t> readers;
        if (j.contains("readers") && !j.at("readers").is_null())
            readers = j.at("readers").get<std::int64_t>();
        std::optional<bool> in_universe, in_analysis;
        if (j.contains("in_universe")) in_universe = j.at("in_universe").get<bool>();
        if (j.contains("in_analysis")) in_analysis = j.at("in_analysis").get<bool>();
        return {.record = finish_record(std::move(doi), j.at("year").get<int>(), *doc_type,
                                        j.at("journal").get<std::string>(), std::move(fields),
                                        j.at("citations").get<std::int64_t>(), readers,
                                        in_universe, in_analysis, line_no),
                .filtered_doc_type = false};
    } catch (const nlohmann::json::exception& e) {
        throw SchemaViolation(line_no, std::string("bad value type: ") + e.what());
    }
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::optional<bool> parse_bool_cell(const std::string& v, std::size_t line_no) {
    if (v.empty()) return std::nullopt;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw SchemaViolation(line_no, "bad boolean \"" + v + "\"");
}

// Tabular variant: header row names the same keys; `fields` cells hold
// "id:weight;id:weight" (or bare ids for equal weights).
class TabularParser {
public:
    TabularParser(const std::string& header_line) {
        sep_ = header_line.find('\t') != std::string::npos ? '\t' : ',';
        auto names = split(header_line, sep_);
        for (std::size_t i = 0; i < names.size(); ++i) {
            std::string name = trim_copy(names[i]);
            columns_.push_back(name);
            if (!known_record_keys().count(name)) ++unknown_columns_;
        }
        for (const char* key : {"doi", "year", "doc_type", "journal", "fields", "citations"})
            if (std::find(columns_.begin(), columns_.end(), key) == columns_.end())
                throw SchemaViolation(1, std::string("header lacks required column \"") + key + "\"");
    }

    std::size_t unknown_columns() const { return unknown_columns_; }

    ParsedLine parse(const std::string& line, std::size_t line_no, IngestReport& report) const {
        auto cells = split(line, sep_);
        if (cells.size() != columns_.size())
            throw SchemaViolation(line_no, "expected " + std::to_string(columns_.size()) +
                                               " columns, got " + std::to_string(cells.size()));
        report.unknown_keys += unknown_columns_;

        std::string doi_raw, doc_type_raw, journal, fields_raw, readers_raw, universe_raw, analysis_raw;
        std::string year_raw, citations_raw;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            const std::string v = trim_copy(cells[i]);
            const std::string& c = columns_[i];
            if (c == "doi") doi_raw = v;
            else if (c == "year") year_raw = v;
            else if (c == "doc_type") doc_type_raw = v;
            else if (c == "journal") journal = v;
            else if (c == "fields") fields_raw = v;
            else if (c == "citations") citations_raw = v;
            else if (c == "readers") readers_raw = v;
            else if (c == "in_universe") universe_raw = v;
            else if (c == "in_analysis") analysis_raw = v;
        }

        auto doc_type = parse_doc_type(doc_type_raw);
        if (!doc_type) return {.record = {}, .filtered_doc_type = true};

        std::vector<FieldShare> fields;
        for (const auto& part : split(fields_raw, ';')) {
            if (part.empty()) continue;
            std::size_t colon = part.rfind(':');
            if (colon == std::string::npos) {
                fields.push_back({trim_copy(part), -1.0});
            } else {
                try {
                    fields.push_back({trim_copy(part.substr(0, colon)), std::stod(part.substr(colon + 1))});
                } catch (const std::exception&) {
                    throw SchemaViolation(line_no, "bad field weight in \"" + part + "\"");
                }
            }
        }
        if (fields.empty()) throw SchemaViolation(line_no, "\"fields\" must be a non-empty list");

        Doi doi;
        try {
            doi = canonicalize_doi(doi_raw);
        } catch (const MalformedDoi& e) {
            throw SchemaViolation(line_no, e.what());
        }
        try {
            std::optional<std::int64_t> readers;
            if (!readers_raw.empty()) readers = std::stoll(readers_raw);
            return {.record = finish_record(std::move(doi), std::stoi(year_raw), *doc_type,
                                            std::move(journal), std::move(fields),
                                            std::stoll(citations_raw), readers,
                                            parse_bool_cell(universe_raw, line_no),
                                            parse_bool_cell(analysis_raw, line_no), line_no),
                    .filtered_doc_type = false};
        } catch (const SchemaViolation&) {
            throw;
        } catch (const std::exception&) {
            throw SchemaViolation(line_no, "bad numeric cell");
        }
    }

private:
    char sep_ = '\t';
    std::vector<std::string> columns_;
    std::size_t unknown_columns_ = 0;
};

}  // namespace detail

// Reads line-delimited records (JSONL, or a tabular variant with a header
// row). Lines failing validation are counted and reported, never silently
// dropped; duplicate DOIs collapse to the first occurrence.
inline std::pair<std::vector<PublicationRecord>, IngestReport> ingest_corpus(std::istream& in) {
    std::vector<PublicationRecord> records;
    IngestReport report;
    std::unordered_set<std::string> seen;

    std::string line;
    std::size_t line_no = 0;
    bool format_known = false, json_format = true;
    std::optional<detail::TabularParser> tabular;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim_copy(line).empty()) continue;
        if (!format_known) {
            json_format = line.front() == '{';
            format_known = true;
            if (!json_format) {
                tabular.emplace(line);  // header row
                continue;
            }
        }
        ++report.lines;
        try {
            auto parsed = json_format ? detail::parse_json_line(line, line_no, report)
                                      : tabular->parse(line, line_no, report);
            if (parsed.filtered_doc_type) {
                ++report.filtered_doc_type;
                continue;
            }
            if (!seen.insert(parsed.record.id.value()).second) {
                ++report.duplicates;
                continue;
            }
            records.push_back(std::move(parsed.record));
            ++report.emitted;
        } catch (const SchemaViolation& e) {
            report.note_issue(line_no, e.what());
        }
    }
    return {std::move(records), std::move(report)};
}

inline std::pair<std::vector<PublicationRecord>, IngestReport> ingest_corpus(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable(path.string());
    return ingest_corpus(in);
}

inline nlohmann::ordered_json record_to_json(const PublicationRecord& r) {
    nlohmann::ordered_json j;
    j["doi"] = r.id.value();
    j["year"] = r.pub_year;
    j["doc_type"] = to_string(r.doc_type);
    j["journal"] = r.journal_id;
    auto fields = nlohmann::ordered_json::array();
    for (const auto& f : r.field_memberships)
        fields.push_back({{"id", f.field_id}, {"weight", f.weight}});
    j["fields"] = std::move(fields);
    j["citations"] = r.citations;
    if (r.readership) j["readers"] = *r.readership;
    j["in_universe"] = r.in_reference_universe;
    j["in_analysis"] = r.in_analysis_set;
    return j;
}

inline void write_corpus(const std::vector<PublicationRecord>& records, std::ostream& out) {
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

inline void write_corpus(const std::vector<PublicationRecord>& records,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FileUnreadable(path.string());
    write_corpus(records, out);
}

}  // namespace citefilter
