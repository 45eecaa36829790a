#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pulse {

enum class ErrorCode {
    UnknownLabel,
    AmbiguousLabel,
    EmptyAfterCleaning,
    TransportError,
    AuthError,
    UnparsableResponse,
    IoError,
    SchemaError,
    DuplicateId,
    InsufficientComments,
    TaskMismatch,
    EmptyTotal,
    EmptyInput,
    MixedTasks,
    NoOverlap,
    UsageError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the pipeline surfaces as a pulse::Error carrying a code
// the CLI maps onto its exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class TransportFailure : public Error {
public:
    TransportFailure(const std::string& message, bool retryable)
        : Error(ErrorCode::TransportError, message), retryable_(retryable) {}

    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

class InsufficientComments : public Error {
public:
    InsufficientComments(std::string coin, std::size_t available, std::size_t requested);

    const std::string& coin() const noexcept { return coin_; }
    std::size_t available() const noexcept { return available_; }
    std::size_t requested() const noexcept { return requested_; }

private:
    std::string coin_;
    std::size_t available_;
    std::size_t requested_;
};

}  // namespace pulse
