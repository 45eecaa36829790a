#include "pulse/prompting.hpp"

#include "pulse/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace pulse;
using pulse::testing::golden_dir;
using pulse::testing::read_file;

TEST_CASE("system instructions match the golden files byte for byte") {
    CHECK(system_instruction(TaskKind::Prediction) == read_file(golden_dir() / "system_prediction.txt"));
    CHECK(system_instruction(TaskKind::Hope) == read_file(golden_dir() / "system_hope.txt"));
    CHECK(system_instruction(TaskKind::Regret) == read_file(golden_dir() / "system_regret.txt"));
    CHECK(build_prompt(TaskKind::Prediction, "anything").system_text ==
          "You are an assistant trained to categorize comments into Predictive Incremental, "
          "Predictive Decremental, Predictive Neutral, or Non-Predictive. Just give us one label "
          "per row.");
}

TEST_CASE("prompt layout") {
    CHECK(build_prompt(TaskKind::Hope, "text here").turns.size() == 9);
    CHECK(build_prompt(TaskKind::Regret, "text here").turns.size() == 7);
    CHECK(build_prompt(TaskKind::Prediction, "text here").turns.size() == 11);

    for (TaskKind task : kAllTasks) {
        const auto prompt = build_prompt(task, "x y z");
        const auto examples = builtin_examples(task);
        REQUIRE(prompt.turns.size() == 2 * examples.size() + 1);
        for (std::size_t i = 0; i < examples.size(); ++i) {
            CHECK(prompt.turns[2 * i].role == Role::User);
            CHECK(prompt.turns[2 * i].content == examples[i].comment_text);
            CHECK(prompt.turns[2 * i + 1].role == Role::Assistant);
            CHECK(prompt.turns[2 * i + 1].content == canonical_string(examples[i].label));
        }
        CHECK(prompt.turns.back().role == Role::User);
        CHECK(prompt.turns.back().content == "x y z");
        CHECK(build_prompt(task, "x y z") == prompt);
    }
}

TEST_CASE("interpret_response") {
    CHECK(interpret_response(TaskKind::Prediction, "Non-Predictive") == Label::NonPredictive);
    CHECK(interpret_response(TaskKind::Hope, "Label: Realistic Hope") == Label::RealisticHope);
    try {
        interpret_response(TaskKind::Regret, "Regret by Action and Regret by Inaction");
        FAIL("expected AmbiguousLabel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AmbiguousLabel);
    }
}
