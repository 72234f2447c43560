#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stablets {

/// Argument outside the operation's domain (invalid arm, non-positive gamma, p outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A normalizer or target was requested for a configuration the stability theory does not cover.
class UnsupportedByTheory : public DomainError {
public:
    using DomainError::DomainError;
};

/// Policy state used before it is ready (e.g. selecting before every arm was pulled once).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Too few observations for the requested statistic (n < 2 for a sample variance, ...).
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Statistic undefined because an estimate is degenerate (zero sample standard deviation).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& field, const std::string& message)
        : std::runtime_error(format(line, field, message)), line_(line), field_(field) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(std::size_t line, const std::string& field, const std::string& message) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + message;
    }

    std::size_t line_;
    std::string field_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A replication worker threw; carries the lowest failing replication index.
class ReplicationFailure : public std::runtime_error {
public:
    ReplicationFailure(std::size_t replication, const std::string& what)
        : std::runtime_error("replication " + std::to_string(replication) + " failed: " + what),
          replication_(replication) {}

    std::size_t replication() const noexcept { return replication_; }

private:
    std::size_t replication_;
};

}  // namespace stablets
