#pragma once

#include "pulse/backend.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace pulse {

/// JSON body for POST {base_url}/v1/chat/completions.
std::string chat_request_body(const ChatRequest& request);

/// Content of the first choice's message. Throws TransportFailure
/// (not retryable) when the body does not have that shape.
std::string chat_response_content(std::string_view body);

/// OpenAI-compatible chat-completions client.
///
/// HTTP 401/403 and a missing token raise Error(AuthError); 408, 429, 5xx
/// and connection failures raise a retryable TransportFailure; any other
/// non-200 status raises a non-retryable one.
class HttpTransport final : public Transport {
public:
    HttpTransport(std::string base_url, std::optional<std::string> bearer_token,
                  std::chrono::seconds timeout = std::chrono::seconds{60});

    std::string complete(const ChatRequest& request) override;

private:
    std::string origin_;       // scheme://host[:port]
    std::string path_prefix_;  // anything after the origin, without trailing '/'
    std::optional<std::string> token_;
    std::chrono::seconds timeout_;
};

}  // namespace pulse
