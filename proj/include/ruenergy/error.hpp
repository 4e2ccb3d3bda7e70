#pragma once

#include <stdexcept>
#include <string>

namespace ruenergy {

/// Error categories. Values line up with the C API status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    Config = 2,
    Infeasible = 3,
    NonConvergence = 4,
    Io = 5,
    Internal = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Configuration problem. `line` is 0 when the error is not tied to a file line.
class ConfigError : public Error {
public:
    ConfigError(std::string key, int line, const std::string& message)
        : Error(ErrorCode::Config, format(key, line, message)), key_(std::move(key)), line_(line), message_(message) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }
    /// Message without the line/key prefix.
    const std::string& message() const noexcept { return message_; }

private:
    static std::string format(const std::string& key, int line, const std::string& message) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += key + ": ";
        return out + message;
    }

    std::string key_;
    int line_;
    std::string message_;
};

class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& what) : Error(ErrorCode::Infeasible, what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

} // namespace ruenergy
