#include <catch2/catch_amalgamated.hpp>

#include <citefilter/corpus_io.hpp>

#include <sstream>

#include "support/tmpdir.hpp"

using namespace citefilter;

namespace {

std::string line(const std::string& doi, const std::string& extra = "") {
    return R"({"doi": ")" + doi +
           R"(", "year": 2008, "doc_type": "article", "journal": "j1", )"
           R"("fields": [{"id": "f1", "weight": 1.0}], "citations": 3)" +
           (extra.empty() ? "" : ", " + extra) + "}";
}

}  // namespace

TEST_CASE("duplicate DOIs collapse, first wins") {
    std::istringstream in(line("10.1/a", R"("readers": 5)") + "\n" + line("10.1/b") + "\n" +
                          line("10.1/a", R"("readers": 99)") + "\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 2);
    CHECK(report.duplicates == 1);
    CHECK(records[0].id.value() == "10.1/a");
    CHECK(records[0].readership == 5);  // first occurrence kept
    CHECK(report.lines == 3);
    CHECK(report.emitted == 2);
}

TEST_CASE("non-article non-review lines are filtered, not errors") {
    std::istringstream in(
        line("10.1/a") + "\n" +
        R"({"doi": "10.1/e", "year": 2008, "doc_type": "editorial", "journal": "j1",)"
        R"( "fields": ["f1"], "citations": 0})" +
        "\n" + line("10.1/b") + "\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.size() == 2);
    CHECK(report.filtered_doc_type == 1);
    CHECK(report.invalid == 0);
}

TEST_CASE("empty file yields empty corpus and zero-line report") {
    std::istringstream in("");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.empty());
    CHECK(report.lines == 0);
}

TEST_CASE("line accounting: emitted + exclusions = lines") {
    std::istringstream in(line("10.1/a") + "\n" + line("10.1/a") + "\n" +
                          R"({"doi": "10.1/c", "year": 2008, "doc_type": "letter",)"
                          R"( "journal": "j", "fields": ["f"], "citations": 0})" +
                          "\n" + "{\"doi\": \"oops\"}\n" + line("10.1/d") + "\n" +
                          "{not json}\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(report.lines == 6);
    CHECK(report.emitted == 2);
    CHECK(report.duplicates == 1);
    CHECK(report.filtered_doc_type == 1);
    CHECK(report.invalid == 2);
    CHECK(report.emitted + report.duplicates + report.filtered_doc_type + report.invalid ==
          report.lines);
    REQUIRE(report.issues.size() == 2);
    CHECK(report.issues[0].line == 4);
    CHECK(report.issues[1].line == 6);
}

TEST_CASE("unknown keys counted, not fatal") {
    std::istringstream in(line("10.1/a", R"("altmetric": 7, "tweets": 3)") + "\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.size() == 1);
    CHECK(report.unknown_keys == 2);
}

TEST_CASE("DOIs canonicalized on ingest") {
    std::istringstream in(line("https://doi.org/10.1/UPPER") + "\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].id.value() == "10.1/upper");
}

TEST_CASE("unweighted field lists get equal shares") {
    std::istringstream in(
        R"({"doi": "10.1/a", "year": 2008, "doc_type": "review", "journal": "j",)"
        R"( "fields": ["f1", "f2"], "citations": 0})"
        "\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].field_memberships.size() == 2);
    CHECK(records[0].field_memberships[0].weight == Catch::Approx(0.5));
    CHECK(records[0].field_memberships[1].weight == Catch::Approx(0.5));
}

TEST_CASE("weights must sum to one") {
    std::istringstream in(
        line("10.1/a") + "\n" +
        R"({"doi": "10.1/bad", "year": 2008, "doc_type": "article", "journal": "j",)"
        R"( "fields": [{"id": "f1", "weight": 0.5}, {"id": "f2", "weight": 0.2}], "citations": 0})" +
        "\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.size() == 1);
    CHECK(report.invalid == 1);
}

TEST_CASE("analysis set must be inside the labeling universe") {
    std::istringstream in(line("10.1/a", R"("in_universe": false, "in_analysis": true)") + "\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.empty());
    CHECK(report.invalid == 1);
}

TEST_CASE("in_analysis defaults to in_universe") {
    std::istringstream in(line("10.1/a", R"("in_universe": false)") + "\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].in_reference_universe);
    CHECK_FALSE(records[0].in_analysis_set);
}

TEST_CASE("tabular variant with header row") {
    std::istringstream in(
        "doi\tyear\tdoc_type\tjournal\tfields\tcitations\treaders\n"
        "10.1/a\t2008\tarticle\tj1\tf1:0.5;f2:0.5\t3\t7\n"
        "10.1/b\t2009\treview\tj2\tf1\t0\t\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].field_memberships.size() == 2);
    CHECK(records[0].readership == 7);
    CHECK_FALSE(records[1].readership.has_value());
    CHECK(records[1].doc_type == DocType::review);
}

TEST_CASE("comma-separated tabular accepted") {
    std::istringstream in(
        "doi,year,doc_type,journal,fields,citations\n"
        "10.1/a,2008,article,j1,f1,3\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].citations == 3);
}

TEST_CASE("round trip is stable") {
    std::istringstream in(
        line("10.1/a", R"("readers": 5)") + "\n" + line("10.1/b") + "\n" +
        R"({"doi": "10.1/c", "year": 2010, "doc_type": "review", "journal": "j2",)"
        R"( "fields": [{"id": "f1", "weight": 0.25}, {"id": "f2", "weight": 0.75}],)"
        R"( "citations": 9, "in_universe": true, "in_analysis": false})" +
        "\n");
    auto [records, report] = ingest_corpus(in);
    REQUIRE(records.size() == 3);

    std::ostringstream out;
    write_corpus(records, out);
    std::istringstream in2(out.str());
    auto [records2, report2] = ingest_corpus(in2);
    CHECK(records2 == records);

    std::ostringstream out2;
    write_corpus(records2, out2);
    CHECK(out2.str() == out.str());
}

TEST_CASE("missing file raises FileUnreadable") {
    CHECK_THROWS_AS(ingest_corpus(std::filesystem::path("/nonexistent/corpus.jsonl")),
                    FileUnreadable);
}

TEST_CASE("file ingest matches stream ingest") {
    support::TmpDir tmp;
    const auto path = tmp / "c.jsonl";
    {
        std::ofstream out(path);
        out << line("10.1/a") << "\n" << line("10.1/b") << "\n";
    }
    auto [records, report] = ingest_corpus(path);
    CHECK(records.size() == 2);
    CHECK(report.emitted == 2);
}

TEST_CASE("negative citations rejected") {
    std::istringstream in(
        R"({"doi": "10.1/a", "year": 2008, "doc_type": "article", "journal": "j",)"
        R"( "fields": ["f"], "citations": -1})"
        "\n");
    auto [records, report] = ingest_corpus(in);
    CHECK(records.empty());
    CHECK(report.invalid == 1);
}
