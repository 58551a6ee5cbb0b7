// Runs the bundled mock catalog server with a fixture file, for manual
// end-to-end runs of `citefilter fetch` without a real API.
//
// Fixture format: one `<doi>\t<reader_count>` per line.

#include <csignal>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <citefilter/mock_catalog.hpp>

int main(int argc, char** argv) {
    CLI::App app{"mock readership catalog server"};
    std::string fixture_path;
    std::string token;
    int latency_ms = 0;
    app.add_option("--fixture", fixture_path, "tab-separated doi/reader_count file");
    app.add_option("--require-token", token, "reject requests lacking this bearer token");
    app.add_option("--latency-ms", latency_ms, "artificial per-request delay");
    CLI11_PARSE(app, argc, argv);

    citefilter::MockCatalogServer server;
    if (!token.empty()) server.require_token(token);
    if (latency_ms > 0) server.set_latency(std::chrono::milliseconds(latency_ms));

    if (!fixture_path.empty()) {
        std::ifstream in(fixture_path);
        if (!in) {
            std::cerr << "cannot read fixture " << fixture_path << '\n';
            return 1;
        }
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            const auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            server.set_reader_count(citefilter::Doi(line.substr(0, tab)),
                                    std::stoll(line.substr(tab + 1)));
            ++n;
        }
        std::cerr << "loaded " << n << " fixture entries\n";
    }

    server.start();
    std::cout << server.base_url() << std::endl;
    std::cerr << "serving; ctrl-c to stop\n";
    pause();
    return 0;
}
