#pragma once

#include "pulse/cache.hpp"
#include "pulse/error.hpp"
#include "pulse/prompting.hpp"
#include "pulse/records.hpp"
#include "pulse/taxonomy.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pulse {

struct BackendConfig {
    std::string base_url = "https://api.openai.com";
    std::string model_name = "gpt-4o";
    std::string auth_env_var = "PULSE_API_KEY";
    double temperature = 0.0;
    int max_retries = 3;
    int backoff_base_ms = 500;
    int backoff_cap_ms = 30'000;
    int parallelism = 4;
    std::filesystem::path cache_path = "cache.jsonl";

    /// Throws Error(UsageError) when a field is out of range.
    void validate() const;
};

enum class BackendKind { Remote, Mock };

std::string_view backend_name(BackendKind kind) noexcept;
BackendKind parse_backend(std::string_view text);

/// Model name recorded for mock classifications, so that mock and remote
/// results never collide in the cache or the classifications file.
inline constexpr std::string_view kMockModelName = "mock-keyword-v1";

struct ChatRequest {
    TaskKind task;  // not sent on the wire
    std::string model;
    PromptMessages prompt;
    double temperature = 0.0;
};

/// One round trip to a chat model; returns the raw text of the reply.
///
/// Implementations throw TransportFailure for network and server faults and
/// Error(AuthError) when the credential is missing or rejected.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// Keyword rule table standing in for the chat model in offline runs.
/// Matching is case-insensitive on token stems (a token matches a cue when it
/// starts with it, so "anticipates" matches "anticipate").
Label mock_classify(TaskKind task, std::string_view clean_text);

/// Answers every request with the canonical string of mock_classify applied
/// to the final user turn.
class MockTransport final : public Transport {
public:
    std::string complete(const ChatRequest& request) override;
};

struct Failure {
    std::size_t index = 0;
    std::string comment_id;
    ErrorCode code = ErrorCode::TransportError;
    std::string message;
};

struct RunStats {
    std::size_t items = 0;
    std::size_t classified = 0;
    std::size_t cache_hits = 0;
    std::size_t backend_calls = 0;
    std::size_t excluded_empty = 0;
    std::vector<Failure> failures;

    std::size_t errors() const noexcept { return failures.size(); }
};

struct BatchResult {
    std::vector<Classification> classifications;  // successes, in input order
    RunStats stats;
};

struct ClassifierHooks {
    std::function<std::string()> clock = utc_timestamp;
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

/// Classifies comments through a transport, consulting the response cache
/// first for remote backends. The mock backend bypasses the cache.
class Classifier {
public:
    Classifier(BackendKind kind, BackendConfig config, std::shared_ptr<Transport> transport,
               ClassifierHooks hooks = {});

    /// Throws Error with code EmptyAfterCleaning, TransportError, AuthError or
    /// UnparsableResponse.
    Classification classify(TaskKind task, const Comment& comment);

    /// At most `parallelism` classifications run at once. Per-item failures
    /// are recorded in the stats and never abort the batch.
    BatchResult classify_batch(TaskKind task, std::span<const Comment> comments);

    BackendKind kind() const noexcept { return kind_; }
    const BackendConfig& config() const noexcept { return config_; }
    std::string_view backend_id() const noexcept { return backend_name(kind_); }
    const std::string& model_name() const noexcept { return model_name_; }

    /// Transport round trips issued so far, retries included.
    std::size_t backend_calls() const noexcept { return backend_calls_.load(); }

private:
    struct Outcome {
        Classification classification;
        bool cache_hit = false;
    };

    Outcome classify_one(TaskKind task, const Comment& comment);
    std::string call_with_retry(const ChatRequest& request);
    std::chrono::milliseconds backoff_delay(int attempt);

    BackendKind kind_;
    BackendConfig config_;
    std::shared_ptr<Transport> transport_;
    ClassifierHooks hooks_;
    std::string model_name_;
    std::unique_ptr<ResponseCache> cache_;
    std::atomic<std::size_t> backend_calls_{0};
};

/// Reads an environment variable; empty optional when unset or empty.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

/// Builds the default transport for a backend kind. For Remote, the bearer
/// token is read from the variable named by `config.auth_env_var`.
std::shared_ptr<Transport> make_transport(BackendKind kind, const BackendConfig& config,
                                          const EnvLookup& env = process_env);

}  // namespace pulse
