#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "citefilter/catalog_client.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/version.hpp"

namespace citefilter {

// Every CLI run drops a manifest.json next to its outputs so a result can be
// traced back to the exact inputs, parameters, and request counts.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    std::string started_at;
    std::string finished_at;

    void note_requests(const EnrichReport& r) {
        stats["cache_hits"] = r.cache_hits;
        stats["requests"] = r.requests;
        stats["found"] = r.found;
        stats["not_found"] = r.not_found;
        stats["failures"] = r.failures;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = "citefilter";
        j["version"] = version;
        j["subcommand"] = subcommand;
        j["started_at"] = started_at;
        j["finished_at"] = finished_at;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        j["config"] = config;
        j["stats"] = stats;
        return j;
    }
};

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw FileUnreadable((dir / "manifest.json").string());
    out << m.to_json().dump(2) << '\n';
}

inline nlohmann::ordered_json read_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw FileUnreadable((dir / "manifest.json").string());
    return nlohmann::ordered_json::parse(in);
}

}  // namespace citefilter
