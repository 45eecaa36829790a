#include "pulse/analytics.hpp"

#include "pulse/corpus.hpp"
#include "pulse/error.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pulse {

namespace fs = std::filesystem;

namespace {

constexpr std::array<Label, 4> kPredictionColumns{Label::NonPredictive, Label::PredictiveDecremental,
                                                  Label::PredictiveIncremental,
                                                  Label::PredictiveNeutral};
constexpr std::array<Label, 4> kHopeColumns{Label::NotHope, Label::UnrealisticHope,
                                            Label::GeneralizedHope, Label::RealisticHope};
constexpr std::array<Label, 3> kRegretColumns{Label::NoRegret, Label::RegretByAction,
                                              Label::RegretByInaction};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

CoinIndex coin_index(std::span<const Comment> comments) {
    CoinIndex index;
    index.reserve(comments.size());
    for (const auto& comment : comments) index.emplace(comment.id, comment.coin);
    return index;
}

CoinTally tally(std::span<const Classification> classifications, TaskKind task,
                const CoinIndex& coins) {
    CoinTally result;
    for (const auto& record : classifications) {
        if (record.task != task) {
            throw Error(ErrorCode::TaskMismatch,
                        "classification of comment " + record.comment_id + " is a " +
                            std::string(task_name(record.task)) + " record, expected " +
                            std::string(task_name(task)));
        }
        const auto coin = coins.find(record.comment_id);
        if (coin == coins.end()) {
            throw Error(ErrorCode::SchemaError,
                        "classification refers to unknown comment " + record.comment_id);
        }
        auto [row, fresh] = result.try_emplace(coin->second);
        if (fresh) {
            for (Label label : labels_for(task)) row->second[label] = 0;
        }
        ++row->second[record.label];
    }
    return result;
}

DistributionRow to_percentages(std::string coin, TaskKind task, const LabelCounts& counts,
                               std::size_t total) {
    if (total == 0) throw Error(ErrorCode::EmptyTotal, "cannot take percentages of zero items");

    DistributionRow row;
    row.coin = std::move(coin);
    row.task = task;
    row.total = total;
    for (Label label : labels_for(task)) row.counts[label] = 0;

    std::size_t sum = 0;
    for (const auto& [label, count] : counts) {
        if (task_of(label) != task) {
            throw Error(ErrorCode::TaskMismatch, std::string(canonical_string(label)) +
                                                     " is not a " + std::string(task_name(task)) +
                                                     " label");
        }
        row.counts[label] = count;
        sum += count;
    }
    if (sum != total) {
        throw Error(ErrorCode::UsageError, "counts sum to " + std::to_string(sum) +
                                               ", expected total " + std::to_string(total));
    }

    // round(1000 * count / total) with halves rounded up, all in integers.
    const std::uint64_t denominator = 2ULL * total;
    for (const auto& [label, count] : row.counts) {
        row.tenths[label] = static_cast<std::int64_t>((2000ULL * count + total) / denominator);
    }
    return row;
}

std::vector<DistributionRow> distribution(const CoinTally& tallied, TaskKind task) {
    std::vector<DistributionRow> rows;
    rows.reserve(tallied.size());
    for (const auto& [coin, counts] : tallied) {
        std::size_t total = 0;
        for (const auto& [label, count] : counts) total += count;
        rows.push_back(to_percentages(coin, task, counts, total));
    }
    return rows;
}

KappaResult cohen_kappa(std::span<const std::pair<Label, Label>> pairs) {
    if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "kappa needs at least one pair");

    const TaskKind task = task_of(pairs.front().first);
    std::array<std::uint64_t, kLabelCount> model_marginal{};
    std::array<std::uint64_t, kLabelCount> human_marginal{};
    std::uint64_t agreements = 0;
    for (const auto& [model, human] : pairs) {
        if (task_of(model) != task || task_of(human) != task) {
            throw Error(ErrorCode::MixedTasks, "kappa pairs span more than one task");
        }
        ++model_marginal[static_cast<std::size_t>(model)];
        ++human_marginal[static_cast<std::size_t>(human)];
        if (model == human) ++agreements;
    }

    const std::uint64_t n = pairs.size();
    std::uint64_t chance = 0;  // sum_k m(k) h(k), in units of 1/n^2
    for (std::size_t k = 0; k < kLabelCount; ++k) chance += model_marginal[k] * human_marginal[k];

    KappaResult result;
    result.task = task;
    result.n_items = pairs.size();
    const auto nn = static_cast<double>(n) * static_cast<double>(n);
    result.observed_agreement = static_cast<double>(agreements) / static_cast<double>(n);
    result.expected_agreement = static_cast<double>(chance) / nn;
    if (chance == n * n) {
        result.kappa = 1.0;
    } else {
        const double numerator =
            static_cast<double>(agreements) * static_cast<double>(n) - static_cast<double>(chance);
        result.kappa = numerator / (nn - static_cast<double>(chance));
    }
    return result;
}

std::span<const Label> report_columns(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction: return kPredictionColumns;
    case TaskKind::Hope: return kHopeColumns;
    case TaskKind::Regret: return kRegretColumns;
    }
    return {};
}

std::string_view report_title(TaskKind task) noexcept {
    switch (task) {
    case TaskKind::Prediction: return "Predictive statements";
    case TaskKind::Hope: return "Hope";
    case TaskKind::Regret: return "Regret";
    }
    return {};
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

std::vector<fs::path> render_report(std::span<const DistributionRow> rows,
                                    std::span<const KappaResult> kappas, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        throw Error(ErrorCode::IoError, "cannot create report directory " + out_dir.string());
    }

    std::ostringstream md;
    md << "# Label distribution report\n";
    std::vector<fs::path> written;

    for (TaskKind task : kAllTasks) {
        const auto columns = report_columns(task);
        md << "\n## " << report_title(task) << " (% of comments)\n\n| Coin |";
        for (Label label : columns) md << ' ' << canonical_string(label) << " |";
        md << " Total |\n|---|";
        for (std::size_t i = 0; i < columns.size(); ++i) md << "---:|";
        md << "---:|\n";

        std::ostringstream csv;
        csv << "coin,label,count,percent\n";
        for (const auto& row : rows) {
            if (row.task != task) continue;
            md << "| " << row.coin << " |";
            for (Label label : columns) md << ' ' << format_fixed(row.percent(label), 1) << " |";
            md << ' ' << row.total << " |\n";
            for (Label label : columns) {
                csv << csv_field(row.coin) << ',' << csv_field(canonical_string(label)) << ','
                    << row.counts.at(label) << ',' << format_fixed(row.percent(label), 1) << '\n';
            }
        }
        const fs::path csv_path = out_dir / (std::string(task_name(task)) + ".csv");
        write_file(csv_path, csv.str());
        written.push_back(csv_path);
    }

    md << "\n## Agreement with human annotation (Cohen's kappa)\n\n";
    if (kappas.empty()) {
        md << "No agreement results.\n";
    } else {
        md << "| Task | Items | Observed agreement | Expected agreement | Kappa |\n"
              "|---|---:|---:|---:|---:|\n";
        for (const auto& k : kappas) {
            md << "| " << task_name(k.task) << " | " << k.n_items << " | "
               << format_fixed(k.observed_agreement, 4) << " | "
               << format_fixed(k.expected_agreement, 4) << " | " << format_fixed(k.kappa, 4)
               << " |\n";
        }
    }

    const fs::path report_path = out_dir / "report.md";
    write_file(report_path, md.str());
    written.insert(written.begin(), report_path);
    return written;
}

}  // namespace pulse
