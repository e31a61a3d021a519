#pragma once

#include <stdexcept>
#include <string>

namespace lhcn {

// Failure classes. Enum values double as distinct CLI exit codes
// (0 is success, 1 is reserved for unexpected failures).
enum class ErrorKind {
    parse = 2,       // malformed input file or manifest
    validation = 3,  // structurally valid input that violates a contract
    numeric = 4,     // non-finite values, diverged training
    io = 5,          // missing files, unwritable output
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace lhcn
