#include <catch2/catch_amalgamated.hpp>

#include <citefilter/indicators.hpp>

#include <cmath>

#include "support/fixture_tables.hpp"

using namespace citefilter;

namespace {

PublicationRecord make(const std::string& doi, int year, const std::string& journal,
                       std::int64_t citations, std::optional<std::int64_t> readers,
                       std::vector<FieldShare> fields = {{"f1", 1.0}}) {
    PublicationRecord r;
    r.id = Doi(doi);
    r.pub_year = year;
    r.doc_type = DocType::article;
    r.journal_id = journal;
    r.field_memberships = std::move(fields);
    r.citations = citations;
    r.readership = readers;
    return r;
}

void check_row(const support::AggregateRow& row) {
    const auto s = summary_from_totals(row.group, row.p, row.covered, row.trs, row.tcs);
    INFO("group " << row.group);
    CHECK(support::matches_printed(100.0 * s.coverage_share, row.cov_pct));
    CHECK(support::matches_printed(s.mrs, row.mrs));
    CHECK(support::matches_printed(s.mcs, row.mcs));
    // printed 2-decimal means stay consistent with the totals
    CHECK(std::abs(support::round2(s.mcs) * static_cast<double>(s.p) -
                   static_cast<double>(s.tcs)) < 0.005 * static_cast<double>(s.p) + 0.5);
}

}  // namespace

TEST_CASE("by-year reference rows reproduce from their totals") {
    for (const auto& row : support::rows_by_year()) check_row(row);
}

TEST_CASE("by-field reference rows reproduce from their totals") {
    for (const auto& row : support::rows_by_field()) check_row(row);
}

TEST_CASE("spot values from the by-year table") {
    CHECK(support::round2(summary_from_totals("2004", 540924, 458114, 6129245, 15724035).mrs) ==
          Catch::Approx(11.33));
    CHECK(support::round2(summary_from_totals("2004", 540924, 458114, 6129245, 15724035).mcs) ==
          Catch::Approx(29.07));
    const auto all = summary_from_totals("all", 9152360, 7917494, 102051962, 132246959);
    CHECK(support::round2(all.mrs) == Catch::Approx(11.15));
    CHECK(support::matches_printed(all.mcs, 14.44));
    CHECK(support::round2(100.0 * all.coverage_share) == Catch::Approx(86.51));
    CHECK(support::round2(summary_from_totals("life_earth", 1512173, 1407153, 28189119,
                                              26668168)
                              .mrs) == Catch::Approx(18.64));
}

TEST_CASE("single uncited uncovered record") {
    auto records = std::vector{make("10.1/a", 2008, "j", 0, std::nullopt)};
    auto rows = summarize(records, GroupDimension::all);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].p == 1);
    CHECK(rows[0].covered == 0);
    CHECK(rows[0].coverage_share == 0.0);
    CHECK(rows[0].mcs == 0.0);
    CHECK(rows[0].mrs == 0.0);
}

TEST_CASE("a cached reader count of zero is not coverage") {
    auto records = std::vector{make("10.1/a", 2008, "j", 0, 0),
                               make("10.1/b", 2008, "j", 0, 1)};
    auto rows = summarize(records, GroupDimension::all);
    CHECK(rows[0].covered == 1);
    CHECK(rows[0].coverage_share == Catch::Approx(0.5));
}

TEST_CASE("per-year groups are additive into the all row") {
    std::vector<PublicationRecord> records;
    for (int i = 0; i < 20; ++i)
        records.push_back(make("10.1/y" + std::to_string(i), 2004 + i % 3, "j" + std::to_string(i % 2),
                               i, i % 4 == 0 ? std::optional<std::int64_t>{} : std::optional<std::int64_t>{i}));
    auto rows = summarize(records, GroupDimension::year);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].group == "all");  // emitted first
    std::int64_t p = 0, trs = 0, tcs = 0, covered = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        p += rows[i].p;
        trs += rows[i].trs;
        tcs += rows[i].tcs;
        covered += rows[i].covered;
    }
    CHECK(p == rows[0].p);
    CHECK(trs == rows[0].trs);
    CHECK(tcs == rows[0].tcs);
    CHECK(covered == rows[0].covered);
    CHECK(rows[1].group == "2004");
    CHECK(rows[2].group == "2005");
    CHECK(rows[3].group == "2006");
}

TEST_CASE("field rows whole-count multi-field publications") {
    auto records = std::vector{
        make("10.1/a", 2008, "j", 4, 2, {{"f1", 0.5}, {"f2", 0.5}}),
        make("10.1/b", 2008, "j", 2, std::nullopt, {{"f1", 1.0}}),
    };
    auto rows = summarize(records, GroupDimension::field);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].p == 2);  // all row counts each publication once
    CHECK(rows[1].group == "f1");
    CHECK(rows[1].p == 2);
    CHECK(rows[1].tcs == 6);
    CHECK(rows[2].group == "f2");
    CHECK(rows[2].p == 1);  // full contribution, not weight 0.5
    CHECK(rows[2].tcs == 4);
}

TEST_CASE("only the analysis set contributes to summaries") {
    auto in = make("10.1/a", 2008, "j", 10, 5);
    auto out = make("10.1/b", 2008, "j", 99, 99);
    out.in_analysis_set = false;
    auto records = std::vector{in, out};
    auto rows = summarize(records, GroupDimension::all);
    CHECK(rows[0].p == 1);
    CHECK(rows[0].tcs == 10);
}

TEST_CASE("empty analysis set raises EmptyCorpus") {
    std::vector<PublicationRecord> none;
    CHECK_THROWS_AS(summarize(none, GroupDimension::year), EmptyCorpus);
    auto r = make("10.1/a", 2008, "j", 1, 1);
    r.in_analysis_set = false;
    auto records = std::vector{r};
    CHECK_THROWS_AS(summarize(records, GroupDimension::year), EmptyCorpus);
    CHECK_THROWS_WITH(summarize(records, GroupDimension::year),
                      Catch::Matchers::ContainsSubstring("empty analysis set"));
}

TEST_CASE("year_field groups key on both") {
    auto records = std::vector{make("10.1/a", 2008, "j", 1, 1, {{"f1", 0.5}, {"f2", 0.5}}),
                               make("10.1/b", 2009, "j", 1, 1, {{"f1", 1.0}})};
    auto rows = summarize(records, GroupDimension::year_field);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].group == "f1/2008");
    CHECK(rows[2].group == "f1/2009");
    CHECK(rows[3].group == "f2/2008");
}

TEST_CASE("journal citation score is the plain mean") {
    auto records = std::vector{make("10.1/a", 2008, "j1", 10, {}), make("10.1/b", 2009, "j1", 0, {}),
                               make("10.1/c", 2010, "j1", 5, {}), make("10.1/d", 2008, "j2", 7, {})};
    auto stats = journal_citation_scores(records);
    CHECK(stats.at("j1").jcs == Catch::Approx(5.0));
    CHECK(stats.at("j1").n_pubs == 3);
    CHECK(stats.at("j2").jcs == Catch::Approx(7.0));  // single-pub journal
}

TEST_CASE("JCS averages the whole universe, not just the analysis set") {
    auto a = make("10.1/a", 2008, "j", 8, {});
    auto b = make("10.1/b", 2008, "j", 0, {});
    auto c = make("10.1/c", 2008, "j", 0, {});
    auto d = make("10.1/d", 2008, "j", 0, {});
    c.in_analysis_set = false;  // universe-only records still count
    d.in_analysis_set = false;
    auto records = std::vector{a, b, c, d};
    auto stats = journal_citation_scores(records);
    CHECK(stats.at("j").n_pubs == 4);
    CHECK(stats.at("j").jcs == Catch::Approx(2.0));  // 8/4, not 8/2
}

TEST_CASE("records outside the universe do not affect JCS") {
    auto a = make("10.1/a", 2008, "j", 8, {});
    auto b = make("10.1/b", 2008, "j", 100, {});
    b.in_reference_universe = false;
    b.in_analysis_set = false;
    auto records = std::vector{a, b};
    auto stats = journal_citation_scores(records);
    CHECK(stats.at("j").n_pubs == 1);
    CHECK(stats.at("j").jcs == Catch::Approx(8.0));
}

TEST_CASE("every record of a journal joins to the same JCS") {
    std::vector<PublicationRecord> records;
    for (int i = 0; i < 12; ++i)
        records.push_back(make("10.1/s" + std::to_string(i), 2004 + i % 5, "j" + std::to_string(i % 3),
                               i * i % 17, {}));
    auto stats = journal_citation_scores(records);
    for (const auto& r : records) {
        const double jcs = jcs_of(stats, r);
        for (const auto& other : records)
            if (other.journal_id == r.journal_id) CHECK(jcs_of(stats, other) == jcs);
    }
}

TEST_CASE("scaling citations scales JCS and keeps the journal ranking") {
    std::vector<PublicationRecord> base, scaled;
    for (int i = 0; i < 10; ++i) {
        base.push_back(make("10.1/s" + std::to_string(i), 2008, "j" + std::to_string(i % 4), 3 * i + 1, {}));
        scaled.push_back(base.back());
        scaled.back().citations *= 7;
    }
    auto s1 = journal_citation_scores(base);
    auto s2 = journal_citation_scores(scaled);
    for (const auto& [j, st] : s1) CHECK(s2.at(j).jcs == Catch::Approx(7.0 * st.jcs));
    for (const auto& a : base)
        for (const auto& b : base) {
            const bool lt1 = jcs_of(s1, a) < jcs_of(s1, b);
            const bool lt2 = jcs_of(s2, a) < jcs_of(s2, b);
            CHECK(lt1 == lt2);
        }
}

TEST_CASE("unknown journal raises MissingJournal") {
    auto records = std::vector{make("10.1/a", 2008, "j1", 1, {})};
    auto stats = journal_citation_scores(records);
    auto stranger = make("10.1/x", 2008, "j9", 1, {});
    CHECK_THROWS_AS(jcs_of(stats, stranger), MissingJournal);
}

TEST_CASE("per-year JCS variant keys on journal and year") {
    auto records = std::vector{make("10.1/a", 2008, "j", 10, {}), make("10.1/b", 2009, "j", 2, {})};
    auto whole = journal_citation_scores(records);
    auto yearly = journal_citation_scores(records, JcsWindow::per_year);
    CHECK(whole.at("j").jcs == Catch::Approx(6.0));
    CHECK(jcs_of(yearly, records[0], JcsWindow::per_year) == Catch::Approx(10.0));
    CHECK(jcs_of(yearly, records[1], JcsWindow::per_year) == Catch::Approx(2.0));
}

TEST_CASE("inconsistent totals rejected") {
    CHECK_THROWS_AS(summary_from_totals("g", 5, 6, 0, 0), BadSpec);
    CHECK_THROWS_AS(summary_from_totals("g", -1, 0, 0, 0), BadSpec);
}
