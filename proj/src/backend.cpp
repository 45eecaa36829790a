#include "pulse/backend.hpp"

#include "pulse/http_transport.hpp"
#include "pulse/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

namespace pulse {

namespace {

using CueList = std::span<const std::string_view>;

// Frozen rule table for the mock backend.
constexpr std::string_view kFutureCues[] = {"will", "expected", "expect", "anticipate", "forecast",
                                 "projected", "going", "future"};
constexpr std::string_view kUpCues[] = {"increase", "double", "grow", "rise", "high", "moon", "pump"};
constexpr std::string_view kDownCues[] = {"decrease", "decline", "drop", "fall", "crash", "dump"};

constexpr std::string_view kUnrealisticHopeCues[] = {"millionaire", "overnight", "guaranteed", "100x"};
constexpr std::string_view kRealisticHopeCues[] = {"likely", "probably", "trend"};
constexpr std::string_view kGeneralizedHopeCues[] = {"hope", "hopeful", "excited", "optimistic", "optimism"};

constexpr std::string_view kRegretCues[] = {"regret"};
constexpr std::string_view kActionCues[] = {"bought", "buy", "sold", "sell", "invest"};
constexpr std::string_view kInactionCues[] = {"should", "missed"};

bool any_cue(const std::vector<std::string>& tokens, CueList cues) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& token) {
        return std::any_of(cues.begin(), cues.end(),
                           [&](std::string_view cue) { return token.starts_with(cue); });
    });
}

std::vector<std::string> lowered_tokens(std::string_view text) {
    auto tokens = tokenize(text);
    for (auto& token : tokens) {
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    return tokens;
}

bool is_label_error(const Error& e) {
    return e.code() == ErrorCode::UnknownLabel || e.code() == ErrorCode::AmbiguousLabel;
}

}  // namespace

void BackendConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::UsageError, what); };
    if (!(temperature >= 0.0 && temperature <= 2.0)) fail("temperature must be in [0, 2]");
    if (max_retries < 0) fail("max_retries must be >= 0");
    if (backoff_base_ms <= 0) fail("backoff_base_ms must be > 0");
    if (backoff_cap_ms < backoff_base_ms) fail("backoff_cap_ms must be >= backoff_base_ms");
    if (parallelism < 1) fail("parallelism must be >= 1");
    if (model_name.empty()) fail("model_name must not be empty");
}

std::string_view backend_name(BackendKind kind) noexcept {
    return kind == BackendKind::Mock ? "mock" : "remote";
}

BackendKind parse_backend(std::string_view text) {
    if (text == "mock") return BackendKind::Mock;
    if (text == "remote") return BackendKind::Remote;
    throw Error(ErrorCode::UsageError,
                "unknown backend '" + std::string(text) + "' (expected remote or mock)");
}

Label mock_classify(TaskKind task, std::string_view clean_text) {
    const auto tokens = lowered_tokens(clean_text);
    switch (task) {
    case TaskKind::Prediction: {
        if (!any_cue(tokens, kFutureCues)) return Label::NonPredictive;
        const bool up = any_cue(tokens, kUpCues);
        const bool down = any_cue(tokens, kDownCues);
        if (up && !down) return Label::PredictiveIncremental;
        if (down && !up) return Label::PredictiveDecremental;
        return Label::PredictiveNeutral;
    }
    case TaskKind::Hope:
        if (any_cue(tokens, kUnrealisticHopeCues)) return Label::UnrealisticHope;
        if (any_cue(tokens, kRealisticHopeCues)) return Label::RealisticHope;
        if (any_cue(tokens, kGeneralizedHopeCues)) return Label::GeneralizedHope;
        return Label::NotHope;
    case TaskKind::Regret:
        if (any_cue(tokens, kRegretCues) && any_cue(tokens, kActionCues)) {
            return Label::RegretByAction;
        }
        if (any_cue(tokens, kInactionCues)) return Label::RegretByInaction;
        return Label::NoRegret;
    }
    return Label::NonPredictive;
}

std::string MockTransport::complete(const ChatRequest& request) {
    const std::string& target = request.prompt.turns.empty() ? std::string{}
                                                             : request.prompt.turns.back().content;
    return std::string(canonical_string(mock_classify(request.task, target)));
}

Classifier::Classifier(BackendKind kind, BackendConfig config, std::shared_ptr<Transport> transport,
                       ClassifierHooks hooks)
    : kind_(kind),
      config_(std::move(config)),
      transport_(std::move(transport)),
      hooks_(std::move(hooks)),
      model_name_(kind == BackendKind::Mock ? std::string(kMockModelName) : config_.model_name) {
    config_.validate();
    if (!hooks_.clock) hooks_.clock = utc_timestamp;
    if (!hooks_.sleep) {
        hooks_.sleep = [](std::chrono::milliseconds delay) { std::this_thread::sleep_for(delay); };
    }
    if (kind_ == BackendKind::Remote) cache_ = std::make_unique<ResponseCache>(config_.cache_path);
}

std::chrono::milliseconds Classifier::backoff_delay(int attempt) {
    // Full exponential step, then jitter into [step/2, step].
    const auto step = std::min<long long>(
        config_.backoff_cap_ms, static_cast<long long>(config_.backoff_base_ms) << std::min(attempt, 30));
    thread_local std::minstd_rand jitter{std::random_device{}()};
    std::uniform_int_distribution<long long> spread(step / 2, step);
    return std::chrono::milliseconds{spread(jitter)};
}

std::string Classifier::call_with_retry(const ChatRequest& request) {
    for (int attempt = 0;; ++attempt) {
        try {
            ++backend_calls_;
            return transport_->complete(request);
        } catch (const TransportFailure& failure) {
            if (!failure.retryable() || attempt >= config_.max_retries) {
                throw TransportFailure("transport failed after " + std::to_string(attempt + 1) +
                                           " attempt(s): " + failure.what(),
                                       false);
            }
        }
        hooks_.sleep(backoff_delay(attempt));
    }
}

Classifier::Outcome Classifier::classify_one(TaskKind task, const Comment& comment) {
    const std::string clean_text =
        comment.clean_text.empty() ? preprocess(comment.raw_text).text : comment.clean_text;

    Outcome outcome;
    Classification& result = outcome.classification;
    result.comment_id = comment.id;
    result.task = task;
    result.backend_id = std::string(backend_id());
    result.model_name = model_name_;

    std::string key;
    if (cache_) {
        key = cache_key(task, model_name_, clean_text);
        if (auto hit = cache_->find(key); hit && task_of(hit->label) == task) {
            result.label = hit->label;
            result.cached = true;
            result.raw_response = hit->raw_response;
            result.timestamp = hit->timestamp.empty() ? hooks_.clock() : hit->timestamp;
            outcome.cache_hit = true;
            return outcome;
        }
    }

    const ChatRequest request{task, model_name_, build_prompt(task, clean_text), config_.temperature};
    std::string raw = call_with_retry(request);
    std::optional<Label> label;
    try {
        label = interpret_response(task, raw);
    } catch (const Error& first) {
        if (!is_label_error(first)) throw;
        // One re-ask with the same prompt, then give up.
        raw = call_with_retry(request);
        try {
            label = interpret_response(task, raw);
        } catch (const Error& second) {
            if (!is_label_error(second)) throw;
            throw Error(ErrorCode::UnparsableResponse,
                        "unparsable response for comment " + comment.id + ": " + second.what());
        }
    }

    result.label = *label;
    result.raw_response = std::move(raw);
    result.timestamp = hooks_.clock();
    if (cache_) {
        cache_->store({key, result.label, result.raw_response, model_name_, result.timestamp});
    }
    return outcome;
}

Classification Classifier::classify(TaskKind task, const Comment& comment) {
    return classify_one(task, comment).classification;
}

BatchResult Classifier::classify_batch(TaskKind task, std::span<const Comment> comments) {
    enum class Status { Pending, Done, Excluded, Failed };
    struct Slot {
        Status status = Status::Pending;
        std::optional<Outcome> outcome;
        Failure failure;
    };

    std::vector<Slot> slots(comments.size());
    std::atomic<std::size_t> next{0};
    const std::size_t calls_before = backend_calls_.load();

    auto work = [&] {
        for (std::size_t i = next++; i < comments.size(); i = next++) {
            Slot& slot = slots[i];
            try {
                slot.outcome = classify_one(task, comments[i]);
                slot.status = Status::Done;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::EmptyAfterCleaning) {
                    slot.status = Status::Excluded;
                } else {
                    slot.status = Status::Failed;
                    slot.failure = {i, comments[i].id, e.code(), e.what()};
                }
            } catch (const std::exception& e) {
                slot.status = Status::Failed;
                slot.failure = {i, comments[i].id, ErrorCode::TransportError, e.what()};
            }
        }
    };

    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config_.parallelism),
                                                comments.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    BatchResult batch;
    RunStats& stats = batch.stats;
    stats.items = comments.size();
    for (auto& slot : slots) {
        switch (slot.status) {
        case Status::Done:
            ++stats.classified;
            if (slot.outcome->cache_hit) ++stats.cache_hits;
            batch.classifications.push_back(std::move(slot.outcome->classification));
            break;
        case Status::Excluded: ++stats.excluded_empty; break;
        case Status::Failed: stats.failures.push_back(std::move(slot.failure)); break;
        case Status::Pending: break;
        }
    }
    stats.backend_calls = backend_calls_.load() - calls_before;
    return batch;
}

std::optional<std::string> process_env(const std::string& name) {
    const char* value = std::getenv(name.c_str());
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
}

std::shared_ptr<Transport> make_transport(BackendKind kind, const BackendConfig& config,
                                          const EnvLookup& env) {
    if (kind == BackendKind::Mock) return std::make_shared<MockTransport>();
    return std::make_shared<HttpTransport>(config.base_url, env(config.auth_env_var));
}

}  // namespace pulse
