#pragma once

#include <stdexcept>
#include <string>

namespace arbgraph {

enum class ErrorKind {
    Data,     // malformed or inconsistent pipeline input
    Config,   // PipelineConfig validation or parse failure
    Backend,  // extraction / embedding / verifier / arbitrator failure
    Io,       // filesystem
};

// Base for every error raised by the library. The stage label ("extract",
// "normalize", "filter", ...) is prepended to what() when present.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string stage = {})
        : std::runtime_error(stage.empty() ? message : "[" + stage + "] " + message),
          kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    ErrorKind kind_;
    std::string stage_;
};

struct DataError : Error {
    explicit DataError(std::string message, std::string stage = {})
        : Error(ErrorKind::Data, std::move(message), std::move(stage)) {}
};

struct ConfigError : Error {
    ConfigError(std::string key, std::string message)
        : Error(ErrorKind::Config, "config key '" + key + "': " + message, "config"),
          key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct BackendError : Error {
    explicit BackendError(std::string message, std::string stage = {})
        : Error(ErrorKind::Backend, std::move(message), std::move(stage)) {}
};

struct IoError : Error {
    explicit IoError(std::string message) : Error(ErrorKind::Io, std::move(message), "io") {}
};

// Re-labels an arbgraph::Error with the pipeline stage it surfaced in.
// Only valid inside a catch block handling `e`.
[[noreturn]] inline void rethrow_with_stage(const Error& e, const std::string& stage) {
    if (!e.stage().empty()) throw;
    if (e.kind() == ErrorKind::Backend) throw BackendError(e.what(), stage);
    if (e.kind() == ErrorKind::Data) throw DataError(e.what(), stage);
    throw;
}

}  // namespace arbgraph
