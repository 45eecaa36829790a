#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace pulse {

enum class TaskKind : std::uint8_t { Prediction, Hope, Regret };

inline constexpr std::array<TaskKind, 3> kAllTasks{TaskKind::Prediction, TaskKind::Hope,
                                                   TaskKind::Regret};

// One enumerator per variant across all three vocabularies; the owning task
// is derived from the value, so a label can never disagree with its task.
enum class Label : std::uint8_t {
    PredictiveIncremental,
    PredictiveDecremental,
    PredictiveNeutral,
    NonPredictive,
    GeneralizedHope,
    NotHope,
    RealisticHope,
    UnrealisticHope,
    RegretByAction,
    RegretByInaction,
    NoRegret,
};

inline constexpr std::size_t kLabelCount = 11;

struct FewShotExample {
    TaskKind task;
    std::string_view comment_text;
    Label label;
};

TaskKind task_of(Label label) noexcept;

/// Full vocabulary for a task in its fixed prompt order (4, 4 or 3 labels).
std::span<const Label> labels_for(TaskKind task) noexcept;

/// Surface form used in the prompts, e.g. "Predictive Incremental".
std::string_view canonical_string(Label label) noexcept;

/// Exact inverse of canonical_string across all tasks.
std::optional<Label> label_from_canonical(std::string_view text) noexcept;

/// Serialized task name: "prediction", "hope" or "regret".
std::string_view task_name(TaskKind task) noexcept;

/// Inverse of task_name; also accepts the column names PredictionType,
/// HopeType and RegretType. Throws Error(UsageError) otherwise.
TaskKind parse_task(std::string_view text);

/// Interprets free text as a label of `task`.
///
/// Surrounding whitespace and one trailing period are dropped and the
/// comparison ignores case. When nothing matches exactly, a response that
/// contains exactly one canonical string of the task is accepted. Throws
/// Error(UnknownLabel) or Error(AmbiguousLabel).
Label parse_label(TaskKind task, std::string_view text);

/// Worked examples shown to the model, in table order. The neutral
/// prediction cell holds two sentences and is split into two examples.
std::span<const FewShotExample> builtin_examples(TaskKind task) noexcept;

}  // namespace pulse
