#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citefilter {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedDoi : public Error {
public:
    explicit MalformedDoi(const std::string& raw) : Error("malformed DOI: \"" + raw + "\"") {}
};

class FileUnreadable : public Error {
public:
    explicit FileUnreadable(const std::string& path) : Error("cannot open file: " + path) {}
};

// A malformed input line or an invalid record. line() is 1-based; 0 means
// the violation is not tied to a specific line.
class SchemaViolation : public Error {
public:
    SchemaViolation(std::size_t line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("empty analysis set") {}
};

class MissingJournal : public Error {
public:
    explicit MissingJournal(const std::string& journal_id)
        : Error("no journal stats for journal \"" + journal_id + "\"") {}
};

class BadFraction : public Error {
public:
    explicit BadFraction(double fraction)
        : Error("fraction must lie in (0,1), got " + std::to_string(fraction)) {}
};

class NoPositives : public Error {
public:
    NoPositives() : Error("no highly cited publications in the analysis set") {}
};

class EmptyAnalysisSet : public Error {
public:
    EmptyAnalysisSet() : Error("empty analysis set") {}
};

class BadRecall : public Error {
public:
    explicit BadRecall(double r) : Error("recall must lie in (0,1], got " + std::to_string(r)) {}
};

class BadSpec : public Error {
public:
    using Error::Error;
};

class AuthFailure : public Error {
public:
    using Error::Error;
};

class RateLimited : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

}  // namespace citefilter
