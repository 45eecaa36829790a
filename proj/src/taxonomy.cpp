#include "pulse/taxonomy.hpp"

#include "pulse/error.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

namespace pulse {

namespace {

constexpr std::array<Label, 4> kPredictionLabels{
    Label::PredictiveIncremental, Label::PredictiveDecremental, Label::PredictiveNeutral,
    Label::NonPredictive};
constexpr std::array<Label, 4> kHopeLabels{Label::GeneralizedHope, Label::NotHope,
                                           Label::RealisticHope, Label::UnrealisticHope};
constexpr std::array<Label, 3> kRegretLabels{Label::RegretByAction, Label::RegretByInaction,
                                             Label::NoRegret};

constexpr std::array<FewShotExample, 5> kPredictionExamples{{
    {TaskKind::Prediction, "Profits are expected to double by the end of the year.",
     Label::PredictiveIncremental},
    {TaskKind::Prediction,
     "Due to the recent economic downturn, we anticipate a decrease in consumer spending "
     "next quarter.",
     Label::PredictiveDecremental},
    {TaskKind::Prediction,
     "The company expects revenue to remain consistent in the upcoming quarter",
     Label::PredictiveNeutral},
    {TaskKind::Prediction, "There is uncertainty regarding future market conditions.",
     Label::PredictiveNeutral},
    {TaskKind::Prediction, "Blockchain technology is revolutionizing various industries worldwide.",
     Label::NonPredictive},
}};

constexpr std::array<FewShotExample, 3> kRegretExamples{{
    {TaskKind::Regret, "I regret buying that coin, it's lost so much value.",
     Label::RegretByAction},
    {TaskKind::Regret, "I should have bought that coin when it was cheaper, now it's too late.",
     Label::RegretByInaction},
    {TaskKind::Regret, "I'm glad I didn't invest in that coin, it's crashing.", Label::NoRegret},
}};

constexpr std::array<FewShotExample, 4> kHopeExamples{{
    {TaskKind::Hope,
     "Excited about the future of cryptocurrencies! The innovation and potential in this "
     "space are truly remarkable.",
     Label::GeneralizedHope},
    {TaskKind::Hope, "I doubt this coin will ever increase in value.", Label::NotHope},
    {TaskKind::Hope, "With the recent trends, it's likely that Bitcoin will hit a new high.",
     Label::RealisticHope},
    {TaskKind::Hope, "I'm sure this tiny investment will make me a millionaire overnight.",
     Label::UnrealisticHope},
}};

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

struct Occurrence {
    Label label;
    std::size_t begin;
    std::size_t end;
};

}  // namespace

TaskKind task_of(Label label) noexcept {
    switch (label) {
    case Label::PredictiveIncremental:
    case Label::PredictiveDecremental:
    case Label::PredictiveNeutral:
    case Label::NonPredictive:
        return TaskKind::Prediction;
    case Label::GeneralizedHope:
    case Label::NotHope:
    case Label::RealisticHope:
    case Label::UnrealisticHope:
        return TaskKind::Hope;
    case Label::RegretByAction:
    case Label::RegretByInaction:
    case Label::NoRegret:
        return TaskKind::Regret;
    }
    return TaskKind::Prediction;
}

std::span<const Label> labels_for(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction: return kPredictionLabels;
    case TaskKind::Hope: return kHopeLabels;
    case TaskKind::Regret: return kRegretLabels;
    }
    return {};
}

std::string_view canonical_string(Label label) noexcept {
    switch (label) {
    case Label::PredictiveIncremental: return "Predictive Incremental";
    case Label::PredictiveDecremental: return "Predictive Decremental";
    case Label::PredictiveNeutral: return "Predictive Neutral";
    case Label::NonPredictive: return "Non-Predictive";
    case Label::GeneralizedHope: return "Generalized Hope";
    case Label::NotHope: return "Not Hope";
    case Label::RealisticHope: return "Realistic Hope";
    case Label::UnrealisticHope: return "Unrealistic Hope";
    case Label::RegretByAction: return "Regret by Action";
    case Label::RegretByInaction: return "Regret by Inaction";
    case Label::NoRegret: return "No Regret";
    }
    return {};
}

std::optional<Label> label_from_canonical(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        const auto label = static_cast<Label>(i);
        if (canonical_string(label) == text) return label;
    }
    return std::nullopt;
}

std::string_view task_name(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction: return "prediction";
    case TaskKind::Hope: return "hope";
    case TaskKind::Regret: return "regret";
    }
    return {};
}

TaskKind parse_task(std::string_view text) {
    const std::string lowered = ascii_lower(trim(text));
    if (lowered == "prediction" || lowered == "predictiontype") return TaskKind::Prediction;
    if (lowered == "hope" || lowered == "hopetype") return TaskKind::Hope;
    if (lowered == "regret" || lowered == "regrettype") return TaskKind::Regret;
    throw Error(ErrorCode::UsageError, "unknown task '" + std::string(text) +
                                           "' (expected prediction, hope or regret)");
}

Label parse_label(TaskKind task, std::string_view text) {
    std::string_view body = trim(text);
    if (!body.empty() && body.back() == '.') {
        body.remove_suffix(1);
        body = trim(body);
    }
    const std::string lowered = ascii_lower(body);

    const auto vocabulary = labels_for(task);
    for (Label label : vocabulary) {
        if (lowered == ascii_lower(canonical_string(label))) return label;
    }

    // Substring fallback. An occurrence nested inside a longer one
    // ("realistic hope" inside "unrealistic hope") does not count.
    std::vector<Occurrence> found;
    for (Label label : vocabulary) {
        const std::string needle = ascii_lower(canonical_string(label));
        for (auto pos = lowered.find(needle); pos != std::string::npos;
             pos = lowered.find(needle, pos + 1)) {
            found.push_back({label, pos, pos + needle.size()});
        }
    }
    std::vector<Label> distinct;
    for (const auto& occ : found) {
        const bool nested = std::any_of(found.begin(), found.end(), [&](const Occurrence& other) {
            return other.label != occ.label && other.begin <= occ.begin && occ.end <= other.end &&
                   (other.end - other.begin) > (occ.end - occ.begin);
        });
        if (!nested && std::find(distinct.begin(), distinct.end(), occ.label) == distinct.end()) {
            distinct.push_back(occ.label);
        }
    }

    if (distinct.size() == 1) return distinct.front();
    if (distinct.empty()) {
        throw Error(ErrorCode::UnknownLabel, "no " + std::string(task_name(task)) +
                                                 " label in '" + std::string(body) + "'");
    }
    throw Error(ErrorCode::AmbiguousLabel, "several " + std::string(task_name(task)) +
                                               " labels in '" + std::string(body) + "'");
}

std::span<const FewShotExample> builtin_examples(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction: return kPredictionExamples;
    case TaskKind::Hope: return kHopeExamples;
    case TaskKind::Regret: return kRegretExamples;
    }
    return {};
}

}  // namespace pulse
