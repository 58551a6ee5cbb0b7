// citefilter: corpus analytics for citation/readership indicators.
// Subcommands: ingest, fetch, summarize, label, evaluate, synth.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <citefilter/citefilter.hpp>

namespace fs = std::filesystem;
using namespace citefilter;

namespace {

struct Options {
    std::string input;
    std::string output_dir = ".";
    std::string labels_path;
    std::string catalog_url;
    std::string cache_dir = ".citefilter-cache";
    std::string group_by;
    std::string preset = "five-field";
    std::string spec_path;
    std::vector<std::string> signals;
    std::uint64_t seed = 0;
    double fraction = 0.10;
    int repetitions = 1;
    int grid = 1000;
    bool plot = false;
    bool full_curves = false;
};

RunManifest start_manifest(const std::string& subcommand, const Options& opt) {
    RunManifest m;
    m.subcommand = subcommand;
    m.started_at = detail::utc_now_iso8601();
    if (!opt.input.empty()) m.inputs["input"] = opt.input;
    if (!opt.labels_path.empty()) m.inputs["labels"] = opt.labels_path;
    m.config["output_dir"] = opt.output_dir;
    m.config["seed"] = opt.seed;
    m.config["fraction"] = opt.fraction;
    m.config["repetitions"] = opt.repetitions;
    m.config["grid"] = opt.grid;
    return m;
}

void finish_manifest(RunManifest& m, const Options& opt) {
    m.finished_at = detail::utc_now_iso8601();
    write_manifest(opt.output_dir, m);
}

std::vector<PublicationRecord> load_corpus(const Options& opt, RunManifest& m) {
    auto [records, report] = ingest_corpus(fs::path(opt.input));
    m.stats["lines_read"] = report.lines;
    m.stats["records"] = report.emitted;
    return records;
}

void write_series(const fs::path& path, const std::vector<GroupSummary>& rows) {
    auto out = detail::open_out(path);
    out << "group\tMRS\tMCS\n";
    for (const auto& s : rows)
        out << s.group << '\t' << detail::fixed(s.mrs, 4) << '\t' << detail::fixed(s.mcs, 4)
            << '\n';
}

int run_ingest(const Options& opt) {
    auto m = start_manifest("ingest", opt);
    auto [records, report] = ingest_corpus(fs::path(opt.input));
    fs::create_directories(opt.output_dir);
    const fs::path out_path = fs::path(opt.output_dir) / "corpus.jsonl";
    write_corpus(records, out_path);
    {
        std::ofstream rep(fs::path(opt.output_dir) / "ingest_report.json");
        nlohmann::ordered_json j;
        j["lines"] = report.lines;
        j["emitted"] = report.emitted;
        j["duplicates"] = report.duplicates;
        j["filtered_doc_type"] = report.filtered_doc_type;
        j["invalid"] = report.invalid;
        j["unknown_keys"] = report.unknown_keys;
        auto& issues = j["issues"] = nlohmann::ordered_json::array();
        for (const auto& issue : report.issues) {
            nlohmann::ordered_json item;
            item["line"] = issue.line;
            item["reason"] = issue.reason;
            issues.push_back(std::move(item));
        }
        rep << j.dump(2) << '\n';
    }
    m.outputs = {out_path.string(), (fs::path(opt.output_dir) / "ingest_report.json").string()};
    m.stats["lines_read"] = report.lines;
    m.stats["records"] = report.emitted;
    m.stats["duplicates"] = report.duplicates;
    m.stats["filtered_doc_type"] = report.filtered_doc_type;
    m.stats["invalid"] = report.invalid;
    finish_manifest(m, opt);
    std::cerr << "ingested " << report.emitted << " records from " << report.lines << " lines ("
              << report.duplicates << " duplicates, " << report.filtered_doc_type
              << " filtered by type, " << report.invalid << " invalid)\n";
    return 0;
}

int run_fetch(const Options& opt) {
    auto m = start_manifest("fetch", opt);
    if (opt.catalog_url.empty()) throw Error("fetch requires --catalog-url");
    auto records = load_corpus(opt, m);
    fs::create_directories(opt.output_dir);
    ReadershipCache cache{fs::path(opt.cache_dir)};
    CatalogClient client(opt.catalog_url, cache);
    auto report = client.enrich_corpus(records);
    const fs::path out_path = fs::path(opt.output_dir) / "corpus.jsonl";
    write_corpus(records, out_path);
    m.outputs = {out_path.string()};
    m.config["catalog_url"] = opt.catalog_url;
    m.config["cache_dir"] = opt.cache_dir;
    m.note_requests(report);
    finish_manifest(m, opt);
    std::cerr << "enriched " << records.size() << " records: " << report.cache_hits
              << " cache hits, " << report.requests << " requests, " << report.found << " found, "
              << report.not_found << " not found, " << report.failures << " failures\n";
    for (const auto& [doi, why] : report.errors)
        std::cerr << "  " << doi.value() << ": " << why << '\n';
    return report.failures == 0 ? 0 : 1;
}

GroupDimension parse_dimension(const std::string& name) {
    if (name == "year") return GroupDimension::year;
    if (name == "field") return GroupDimension::field;
    if (name == "year_field") return GroupDimension::year_field;
    if (name == "all") return GroupDimension::all;
    throw Error("unknown --group-by value: " + name);
}

int run_summarize(const Options& opt) {
    auto m = start_manifest("summarize", opt);
    auto records = load_corpus(opt, m);
    fs::create_directories(opt.output_dir);
    const fs::path dir(opt.output_dir);
    if (!opt.group_by.empty()) {
        auto rows = summarize(records, parse_dimension(opt.group_by));
        const auto path = dir / ("summary_by_" + opt.group_by + ".tsv");
        write_summaries(path, rows);
        m.outputs = {path.string()};
        m.config["group_by"] = opt.group_by;
    } else {
        auto by_year = summarize(records, GroupDimension::year);
        auto by_field = summarize(records, GroupDimension::field);
        write_summaries(dir / "summary_by_year.tsv", by_year);
        write_summaries(dir / "summary_by_field.tsv", by_field);
        write_series(dir / "mrs_mcs_by_year.tsv", by_year);
        write_series(dir / "mrs_mcs_by_field.tsv", by_field);
        for (const char* f : {"summary_by_year.tsv", "summary_by_field.tsv",
                              "mrs_mcs_by_year.tsv", "mrs_mcs_by_field.tsv"})
            m.outputs.push_back((dir / f).string());
    }
    finish_manifest(m, opt);
    return 0;
}

int run_label(const Options& opt) {
    auto m = start_manifest("label", opt);
    auto records = load_corpus(opt, m);
    fs::create_directories(opt.output_dir);
    auto labels = label_corpus(records, opt.fraction);
    const fs::path path = fs::path(opt.output_dir) / "labels.tsv";
    write_labels(path, labels);
    std::size_t highly_cited = 0;
    for (const auto& [_, l] : labels) highly_cited += l.is_highly_cited ? 1 : 0;
    m.outputs = {path.string()};
    m.stats["labels"] = labels.size();
    m.stats["highly_cited"] = highly_cited;
    m.stats["small_cells"] = count_small_cells(records, opt.fraction);
    finish_manifest(m, opt);
    std::cerr << "labeled " << labels.size() << " records, " << highly_cited
              << " highly cited\n";
    return 0;
}

int run_evaluate(const Options& opt) {
    auto m = start_manifest("evaluate", opt);
    auto records = load_corpus(opt, m);
    fs::create_directories(opt.output_dir);

    LabelMap labels;
    if (!opt.labels_path.empty()) {
        labels = read_labels(fs::path(opt.labels_path));
    } else {
        labels = label_corpus(records, opt.fraction);
    }

    auto signal_names = opt.signals;
    if (signal_names.empty()) signal_names = {"RS", "JCS"};
    JournalStatsMap journal_stats;
    std::vector<RankingSignal> signals;
    for (const auto& name : signal_names) {
        if (name == "RS") {
            signals.push_back(readership_signal(records));
        } else if (name == "JCS") {
            if (journal_stats.empty()) journal_stats = journal_citation_scores(records);
            signals.push_back(jcs_signal(records, journal_stats));
        } else if (name == "citations") {
            signals.push_back(citation_signal(records));
        } else {
            throw Error("unknown --signal value: " + name);
        }
    }

    std::vector<PrCurve> curves;
    curves.reserve(signals.size());
    for (const auto& sig : signals)
        curves.push_back(pr_curve(records, labels, sig, opt.seed, opt.repetitions));

    const fs::path dir(opt.output_dir);
    write_curves(dir / "pr_curves.tsv", curves, opt.grid, opt.full_curves);
    m.outputs = {(dir / "pr_curves.tsv").string()};
    if (curves.size() >= 2) {  // pairwise dominance needs something to compare
        std::vector<double> dominance_grid;  // fine enough to expose the recall extremes
        for (int i = 1; i < 50; ++i) dominance_grid.push_back(i / 50.0);
        write_dominance(dir / "dominance.tsv", compare_signals(curves, std::move(dominance_grid)));
        m.outputs.push_back((dir / "dominance.tsv").string());
    }
    if (opt.plot) {
        write_pr_svg(dir / "pr_curves.svg", curves);
        m.outputs.push_back((dir / "pr_curves.svg").string());
    }
    m.stats["n"] = curves.front().n;
    m.stats["h_total"] = curves.front().h_total;
    m.config["signals"] = signal_names;
    finish_manifest(m, opt);
    for (const auto& c : curves)
        std::cerr << c.signal_name << ": precision " << precision_at_recall(c, 0.5)
                  << " at recall 0.5\n";
    return 0;
}

int run_synth(const Options& opt) {
    auto m = start_manifest("synth", opt);
    SynthSpec spec;
    if (!opt.spec_path.empty()) {
        std::ifstream in(opt.spec_path);
        if (!in) throw FileUnreadable(opt.spec_path);
        auto j = nlohmann::json::parse(in);
        spec.seed = opt.seed;
        if (j.contains("year_start")) spec.year_start = j["year_start"].get<int>();
        if (j.contains("year_end")) spec.year_end = j["year_end"].get<int>();
        if (j.contains("coupling")) spec.coupling = j["coupling"].get<double>();
        if (j.contains("journal_effect")) spec.journal_effect = j["journal_effect"].get<double>();
        if (j.contains("dispersion")) spec.dispersion = j["dispersion"].get<double>();
        for (const auto& f : j.at("fields")) {
            SynthField sf;
            sf.field_id = f.at("field_id").get<std::string>();
            sf.n_journals = f.at("n_journals").get<int>();
            sf.n_pubs_per_year = f.at("n_pubs_per_year").get<int>();
            sf.mcs_target = f.at("mcs_target").get<double>();
            sf.mrs_target = f.at("mrs_target").get<double>();
            sf.coverage_target = f.at("coverage_target").get<double>();
            spec.fields.push_back(std::move(sf));
        }
        m.config["spec_file"] = opt.spec_path;
    } else if (opt.preset == "five-field") {
        spec = preset_five_field(opt.seed);
    } else {
        throw Error("unknown --preset value: " + opt.preset);
    }
    m.config["preset"] = opt.spec_path.empty() ? opt.preset : "custom";
    auto records = generate(spec);
    fs::create_directories(opt.output_dir);
    const fs::path out_path = fs::path(opt.output_dir) / "corpus.jsonl";
    write_corpus(records, out_path);
    m.outputs = {out_path.string()};
    m.stats["records"] = records.size();
    finish_manifest(m, opt);
    std::cerr << "generated " << records.size() << " records\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citation/readership corpus analytics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("citefilter ") + version);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", opt.input, "corpus file (JSONL or CSV/TSV)");
        if (needs_input) in->required();
        sub->add_option("--output-dir", opt.output_dir, "directory for outputs");
        sub->add_option("--seed", opt.seed, "root RNG seed");
        sub->add_option("--fraction", opt.fraction, "top fraction for labeling")
            ->check(CLI::Range(1e-9, 1.0));
        sub->add_option("--repetitions", opt.repetitions, "tie-break repetitions")
            ->check(CLI::PositiveNumber);
        sub->add_option("--grid", opt.grid, "recall grid size for curve export")
            ->check(CLI::PositiveNumber);
        sub->add_option("--catalog-url", opt.catalog_url, "catalog API base URL");
        sub->add_option("--cache-dir", opt.cache_dir, "readership cache directory");
        sub->add_flag("--plot", opt.plot, "emit SVG plots");
        return sub;
    };

    auto* ingest = add_common(app.add_subcommand("ingest", "validate and normalize a corpus"), true);
    auto* fetch = add_common(app.add_subcommand("fetch", "enrich records with catalog readership"), true);
    auto* summarize_cmd =
        add_common(app.add_subcommand("summarize", "indicator tables by year and field"), true);
    summarize_cmd->add_option("--group-by", opt.group_by, "single dimension: year|field|year_field|all");
    auto* label = add_common(app.add_subcommand("label", "top-percentile highly-cited labels"), true);
    auto* evaluate =
        add_common(app.add_subcommand("evaluate", "precision-recall curves for ranking signals"), true);
    evaluate->add_option("--labels", opt.labels_path, "precomputed labels file");
    evaluate->add_option("--signal", opt.signals, "signals to evaluate (RS, JCS, citations)");
    evaluate->add_flag("--full-curves", opt.full_curves, "export every prefix instead of grid");
    auto* synth = add_common(app.add_subcommand("synth", "generate a synthetic corpus"), false);
    synth->add_option("--preset", opt.preset, "named generator preset");
    synth->add_option("--spec", opt.spec_path, "generator spec JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ingest->parsed()) return run_ingest(opt);
        if (fetch->parsed()) return run_fetch(opt);
        if (summarize_cmd->parsed()) return run_summarize(opt);
        if (label->parsed()) return run_label(opt);
        if (evaluate->parsed()) return run_evaluate(opt);
        if (synth->parsed()) return run_synth(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
