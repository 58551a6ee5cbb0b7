#pragma once

#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "citefilter/errors.hpp"

namespace citefilter {

namespace detail {

inline bool is_doi_shape(std::string_view s) {
    // "10." + registrant code (digit groups, optionally dot-separated) + "/" + non-empty suffix.
    if (s.size() < 6 || s.substr(0, 3) != "10.") return false;
    std::size_t i = 3;
    bool digit_seen = false;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
        if (s[i] == '.') {
            if (!digit_seen) return false;  // no empty digit group
            digit_seen = false;
        } else {
            digit_seen = true;
        }
        ++i;
    }
    if (!digit_seen || i >= s.size() || s[i] != '/') return false;
    std::string_view suffix = s.substr(i + 1);
    if (suffix.empty()) return false;
    for (char c : suffix) {
        if (std::isspace(static_cast<unsigned char>(c)) || std::iscntrl(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

}  // namespace detail

// Canonical DOI: lowercase, resolver prefix stripped, surrounding whitespace removed.
class Doi {
public:
    Doi() = default;

    // Accepts an already-canonical string; throws MalformedDoi otherwise.
    explicit Doi(std::string canonical) : value_(std::move(canonical)) {
        if (!detail::is_doi_shape(value_)) throw MalformedDoi(value_);
        for (char& c : value_)
            if (c >= 'A' && c <= 'Z') throw MalformedDoi(value_);
    }

    const std::string& value() const { return value_; }
    bool empty() const { return value_.empty(); }

    friend auto operator<=>(const Doi&, const Doi&) = default;

private:
    std::string value_;
};

// Trims, strips resolver prefixes ("https://doi.org/", "doi:", ...), lowercases,
// and validates the "10.x/y" shape. Idempotent.
inline Doi canonicalize_doi(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string s(raw.substr(b, e - b));
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                    "http://dx.doi.org/", "doi.org/", "doi:"}) {
        if (s.size() > prefix.size() && std::string_view(s).substr(0, prefix.size()) == prefix) {
            s.erase(0, prefix.size());
            break;
        }
    }
    if (!detail::is_doi_shape(s)) throw MalformedDoi(std::string(raw));
    return Doi(std::move(s));
}

struct DoiHash {
    std::size_t operator()(const Doi& d) const { return std::hash<std::string>{}(d.value()); }
};

}  // namespace citefilter
