#include "pulse/prompting.hpp"

namespace pulse {

std::string_view role_name(Role role) noexcept {
    return role == Role::User ? "user" : "assistant";
}

std::string_view system_instruction(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction:
        return "You are an assistant trained to categorize comments into Predictive Incremental, "
               "Predictive Decremental, Predictive Neutral, or Non-Predictive. Just give us one "
               "label per row.";
    case TaskKind::Regret:
        return "You are an assistant trained to categorize comments about cryptocurrencies into "
               "three types of regret. Just give us one label per row: Regret by Action, Regret "
               "by Inaction, and No Regret.";
    case TaskKind::Hope:
        return "You are an assistant trained to categorize comments about cryptocurrencies into "
               "four types of hope. Just give us one label per row: Generalized Hope, Not Hope, "
               "Realistic Hope, and Unrealistic Hope.";
    }
    return {};
}

PromptMessages build_prompt(TaskKind task, std::string_view clean_text) {
    PromptMessages prompt;
    prompt.system_text = std::string(system_instruction(task));
    const auto examples = builtin_examples(task);
    prompt.turns.reserve(examples.size() * 2 + 1);
    for (const auto& example : examples) {
        prompt.turns.push_back({Role::User, std::string(example.comment_text)});
        prompt.turns.push_back({Role::Assistant, std::string(canonical_string(example.label))});
    }
    prompt.turns.push_back({Role::User, std::string(clean_text)});
    return prompt;
}

Label interpret_response(TaskKind task, std::string_view response_text) {
    return parse_label(task, response_text);
}

}  // namespace pulse
