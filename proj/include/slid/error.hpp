#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slid {

enum class ErrorCode : std::uint8_t {
    ZeroReserve,
    Overflow,
    NonMonotonicTime,
    PoolMismatch,
    NegativePoolValue,
    PreconditionViolated,
    EmptySeries,
    InfeasibleConfig,
    SingleClassInput,
    DimensionMismatch,
    SchemaError,
    EmptyDataset,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Process exit status for the command-line tool.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Row-level schema failure; line is 1-based, 0 when not tied to a line.
class SchemaError : public Error {
public:
    SchemaError(std::string file, std::size_t line, const std::string& what)
        : Error(ErrorCode::SchemaError, what), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace slid
