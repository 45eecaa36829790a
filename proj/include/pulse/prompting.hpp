#pragma once

#include "pulse/taxonomy.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pulse {

enum class Role { User, Assistant };

std::string_view role_name(Role role) noexcept;

struct ChatTurn {
    Role role;
    std::string content;

    bool operator==(const ChatTurn&) const = default;
};

struct PromptMessages {
    std::string system_text;
    std::vector<ChatTurn> turns;

    bool operator==(const PromptMessages&) const = default;
};

/// Instruction sent as the system message for a task.
std::string_view system_instruction(TaskKind task) noexcept;

/// System instruction, then each built-in example as a user/assistant pair,
/// then the target comment as the final user turn.
PromptMessages build_prompt(TaskKind task, std::string_view clean_text);

Label interpret_response(TaskKind task, std::string_view response_text);

}  // namespace pulse
