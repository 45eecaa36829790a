#include "pulse/error.hpp"

#include <utility>

namespace pulse {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::AmbiguousLabel: return "AmbiguousLabel";
    case ErrorCode::EmptyAfterCleaning: return "EmptyAfterCleaning";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::UnparsableResponse: return "UnparsableResponse";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InsufficientComments: return "InsufficientComments";
    case ErrorCode::TaskMismatch: return "TaskMismatch";
    case ErrorCode::EmptyTotal: return "EmptyTotal";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MixedTasks: return "MixedTasks";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::UsageError: return "UsageError";
    }
    return "Unknown";
}

InsufficientComments::InsufficientComments(std::string coin, std::size_t available,
                                           std::size_t requested)
    : Error(ErrorCode::InsufficientComments,
            "coin '" + coin + "' has " + std::to_string(available) +
                " comments, " + std::to_string(requested) + " requested"),
      coin_(std::move(coin)),
      available_(available),
      requested_(requested) {}

}  // namespace pulse
