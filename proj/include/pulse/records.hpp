#pragma once

#include "pulse/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pulse {

struct Comment {
    std::string id;
    std::string coin;
    std::string raw_text;
    std::optional<std::string> created_at;
    std::string clean_text;  // empty until preprocessed

    bool operator==(const Comment&) const = default;
};

struct Classification {
    std::string comment_id;
    TaskKind task = TaskKind::Prediction;
    Label label = Label::NonPredictive;
    std::string backend_id;  // "remote" or "mock"
    std::string model_name;
    bool cached = false;
    std::string raw_response;
    std::string timestamp;  // ISO-8601, UTC

    bool operator==(const Classification&) const = default;
};

struct AnnotationRecord {
    std::string comment_id;
    TaskKind task = TaskKind::Prediction;
    Label label = Label::NonPredictive;
    std::string annotator_id;

    bool operator==(const AnnotationRecord&) const = default;
};

/// "YYYY-MM-DDTHH:MM:SSZ" for seconds since the Unix epoch.
std::string format_utc(std::int64_t epoch_seconds);

/// Current wall-clock time, unless SOURCE_DATE_EPOCH is set, in which case
/// that fixed instant is used so runs are reproducible.
std::string utc_timestamp();

}  // namespace pulse
