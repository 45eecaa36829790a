#pragma once

#include "pulse/records.hpp"
#include "pulse/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pulse {

using LabelCounts = std::map<Label, std::size_t>;
using CoinTally = std::map<std::string, LabelCounts>;

/// comment id -> coin
using CoinIndex = std::unordered_map<std::string, std::string>;

CoinIndex coin_index(std::span<const Comment> comments);

/// Counts labels per coin; every label of `task` appears, zero if unseen.
/// Throws Error(TaskMismatch) for a record of another task and
/// Error(SchemaError) for a comment id missing from `coins`.
CoinTally tally(std::span<const Classification> classifications, TaskKind task,
                const CoinIndex& coins);

struct DistributionRow {
    std::string coin;
    TaskKind task = TaskKind::Prediction;
    LabelCounts counts;
    std::map<Label, std::int64_t> tenths;  // percentage x 10, rounded
    std::size_t total = 0;

    double percent(Label label) const { return static_cast<double>(tenths.at(label)) / 10.0; }
};

/// Percentages rounded half away from zero to one decimal, computed in
/// exact integer arithmetic. Throws Error(EmptyTotal) when total is zero,
/// Error(TaskMismatch) for a label of another task and Error(UsageError)
/// when the counts do not sum to total.
DistributionRow to_percentages(std::string coin, TaskKind task, const LabelCounts& counts,
                               std::size_t total);

/// Rows for every coin of a tally, in tally (coin-name) order.
std::vector<DistributionRow> distribution(const CoinTally& tallied, TaskKind task);

struct KappaResult {
    TaskKind task = TaskKind::Prediction;
    std::size_t n_items = 0;
    double observed_agreement = 0.0;
    double expected_agreement = 0.0;
    double kappa = 0.0;
};

/// Unweighted Cohen's kappa between two raters; pairs are (model, human).
/// Throws Error(EmptyInput) or Error(MixedTasks).
KappaResult cohen_kappa(std::span<const std::pair<Label, Label>> pairs);

/// Column order of the published distribution tables.
std::span<const Label> report_columns(TaskKind task) noexcept;

std::string_view report_title(TaskKind task) noexcept;

/// Writes report.md plus prediction.csv, hope.csv and regret.csv
/// (coin,label,count,percent) into out_dir; returns the written paths.
std::vector<std::filesystem::path> render_report(std::span<const DistributionRow> rows,
                                                 std::span<const KappaResult> kappas,
                                                 const std::filesystem::path& out_dir);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace pulse
