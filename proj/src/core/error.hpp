#pragma once

#include <stdexcept>
#include <string>

namespace betscan {

enum class ErrorKind {
    Io,        // file missing / unreadable / unwritable
    Parse,     // malformed input data
    Config,    // bad parameter or option value
    Schema,    // feature schema / model digest mismatch
    Internal,  // bug or broken invariant
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace betscan
