#include "pulse/http_transport.hpp"

#include <httplib.h>
#include <json.hpp>

#include <utility>

namespace pulse {

using json = nlohmann::json;

std::string chat_request_body(const ChatRequest& request) {
    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", request.prompt.system_text}});
    for (const auto& turn : request.prompt.turns) {
        messages.push_back({{"role", role_name(turn.role)}, {"content", turn.content}});
    }
    const json body = {{"model", request.model},
                       {"messages", std::move(messages)},
                       {"temperature", request.temperature}};
    return body.dump();
}

std::string chat_response_content(std::string_view body) {
    try {
        const json parsed = json::parse(body);
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw TransportFailure(std::string("malformed chat completion: ") + e.what(), false);
    }
}

HttpTransport::HttpTransport(std::string base_url, std::optional<std::string> bearer_token,
                             std::chrono::seconds timeout)
    : token_(std::move(bearer_token)), timeout_(timeout) {
    const auto scheme_end = base_url.find("://");
    const auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_begin = base_url.find('/', host_begin);
    origin_ = base_url.substr(0, path_begin);
    if (path_begin != std::string::npos) path_prefix_ = base_url.substr(path_begin);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpTransport::complete(const ChatRequest& request) {
    if (!token_) throw Error(ErrorCode::AuthError, "no API credential in the environment");

    httplib::Client client(origin_);
    if (!client.is_valid()) {
        throw TransportFailure("invalid base URL '" + origin_ + "'", false);
    }
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    client.set_bearer_token_auth(*token_);

    const auto result = client.Post(path_prefix_ + "/v1/chat/completions",
                                    chat_request_body(request), "application/json");
    if (!result) {
        throw TransportFailure("request failed: " + httplib::to_string(result.error()), true);
    }
    const int status = result->status;
    if (status == 401 || status == 403) {
        throw Error(ErrorCode::AuthError, "credential rejected (HTTP " + std::to_string(status) + ")");
    }
    if (status != 200) {
        const bool retryable = status == 408 || status == 429 || status >= 500;
        throw TransportFailure("HTTP " + std::to_string(status), retryable);
    }
    return chat_response_content(result->body);
}

}  // namespace pulse
