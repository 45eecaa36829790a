#include "pulse/analytics.hpp"

#include "pulse/error.hpp"
#include "pulse/random.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace pulse;
using pulse::testing::read_file;
using pulse::testing::reference_distributions;
using pulse::testing::TempDir;

namespace {

using Pairs = std::vector<std::pair<Label, Label>>;

struct ReferenceRow {
    TaskKind task;
    std::string coin;
    std::map<Label, std::string> printed;
};

std::vector<ReferenceRow> reference_rows() {
    std::vector<ReferenceRow> rows;
    for (const auto& cell : reference_distributions()) {
        if (rows.empty() || rows.back().task != cell.task || rows.back().coin != cell.coin) {
            rows.push_back({cell.task, cell.coin, {}});
        }
        rows.back().printed[cell.label] = cell.percent;
    }
    return rows;
}

// Count consistent with a printed percentage of N = 1000.
std::size_t count_from_printed(const std::string& printed) {
    return static_cast<std::size_t>(std::lround(std::stod(printed) * 10.0));
}

// Chance-corrected agreement from the confusion matrix, computed directly
// in floating point.
double kappa_oracle(const Pairs& pairs) {
    std::map<Label, double> model;
    std::map<Label, double> human;
    double agree = 0;
    for (const auto& [m, h] : pairs) {
        model[m] += 1;
        human[h] += 1;
        if (m == h) agree += 1;
    }
    const double n = static_cast<double>(pairs.size());
    const double po = agree / n;
    double pe = 0;
    for (const auto& [label, count] : model) pe += (count / n) * (human.count(label) ? human[label] / n : 0.0);
    return (po - pe) / (1 - pe);
}

Pairs confusion_fixture() {
    Pairs pairs;
    pairs.insert(pairs.end(), 45, {Label::RegretByAction, Label::RegretByAction});
    pairs.insert(pairs.end(), 25, {Label::NoRegret, Label::NoRegret});
    pairs.insert(pairs.end(), 15, {Label::RegretByAction, Label::NoRegret});
    pairs.insert(pairs.end(), 15, {Label::NoRegret, Label::RegretByAction});
    return pairs;
}

ErrorCode error_of(const std::function<void()>& action) {
    try {
        action();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::UsageError;
}

}  // namespace

TEST_CASE("reference distributions are reproduced from integer counts") {
    const auto rows = reference_rows();
    REQUIRE(rows.size() == 15);
    for (const auto& ref : rows) {
        LabelCounts counts;
        std::size_t total = 0;
        for (const auto& [label, printed] : ref.printed) {
            counts[label] = count_from_printed(printed);
            total += counts[label];
        }
        CHECK_MESSAGE(total == 1000, ref.coin);
        CHECK(ref.printed.size() == labels_for(ref.task).size());
        const auto row = to_percentages(ref.coin, ref.task, counts, total);
        for (const auto& [label, printed] : ref.printed) {
            CHECK_MESSAGE(row.percent(label) == doctest::Approx(std::stod(printed)).epsilon(1e-12),
                          ref.coin << " " << canonical_string(label));
            CHECK(format_fixed(row.percent(label), 1) == format_fixed(std::stod(printed), 1));
        }
    }
}

TEST_CASE("to_percentages examples") {
    const LabelCounts cardano = {{Label::NonPredictive, 954},
                                 {Label::PredictiveDecremental, 23},
                                 {Label::PredictiveIncremental, 22},
                                 {Label::PredictiveNeutral, 1}};
    const auto row = to_percentages("cardano", TaskKind::Prediction, cardano, 1000);
    CHECK(row.percent(Label::NonPredictive) == 95.4);
    CHECK(row.percent(Label::PredictiveDecremental) == 2.3);
    CHECK(row.percent(Label::PredictiveIncremental) == 2.2);
    CHECK(row.percent(Label::PredictiveNeutral) == 0.1);

    const LabelCounts matic = {{Label::PredictiveIncremental, 81}, {Label::NonPredictive, 919}};
    CHECK(to_percentages("matic", TaskKind::Prediction, matic, 1000).percent(Label::PredictiveIncremental) ==
          8.1);

    const LabelCounts thirds = {{Label::NotHope, 1}, {Label::GeneralizedHope, 2}};
    const auto split = to_percentages("x", TaskKind::Hope, thirds, 3);
    CHECK(split.tenths.at(Label::NotHope) == 333);
    CHECK(split.tenths.at(Label::GeneralizedHope) == 667);
    CHECK(split.tenths.at(Label::RealisticHope) == 0);
    CHECK(split.tenths.size() == 4);

    // exact halves round away from zero
    const LabelCounts halves = {{Label::NoRegret, 1}, {Label::RegretByAction, 1999}};
    const auto half = to_percentages("x", TaskKind::Regret, halves, 2000);
    CHECK(half.tenths.at(Label::NoRegret) == 1);
    CHECK(half.tenths.at(Label::RegretByAction) == 1000);
}

TEST_CASE("to_percentages errors") {
    CHECK(error_of([] { to_percentages("x", TaskKind::Hope, {}, 0); }) == ErrorCode::EmptyTotal);
    CHECK(error_of([] { to_percentages("x", TaskKind::Hope, {{Label::NoRegret, 1}}, 1); }) ==
          ErrorCode::TaskMismatch);
    CHECK(error_of([] { to_percentages("x", TaskKind::Hope, {{Label::NotHope, 1}}, 2); }) ==
          ErrorCode::UsageError);
}

TEST_CASE("to_percentages agrees with a floating point oracle") {
    SeededRng rng(derive_seed(3, "percent-oracle"));
    for (int trial = 0; trial < 2000; ++trial) {
        LabelCounts counts;
        std::size_t total = 0;
        for (Label label : labels_for(TaskKind::Prediction)) {
            counts[label] = static_cast<std::size_t>(rng.below(trial % 2 == 0 ? 8 : 5000));
            total += counts[label];
        }
        if (total == 0) continue;
        const auto row = to_percentages("c", TaskKind::Prediction, counts, total);
        std::int64_t sum = 0;
        for (const auto& [label, count] : counts) {
            const long double exact = 1000.0L * static_cast<long double>(count) / static_cast<long double>(total);
            CHECK(row.tenths.at(label) == std::llround(exact));
            sum += row.tenths.at(label);
        }
        // each cell is within half a tenth, so the sum is within 2 of 1000 for 4 labels
        CHECK(std::abs(sum - 1000) <= 2);
    }
}

TEST_CASE("tally") {
    const CoinIndex coins = {{"a", "cardano"}, {"b", "cardano"}, {"c", "cardano"}, {"d", "ripple"}};
    std::vector<Classification> records(3);
    records[0].comment_id = "a";
    records[0].label = Label::NonPredictive;
    records[1].comment_id = "b";
    records[1].label = Label::NonPredictive;
    records[2].comment_id = "c";
    records[2].label = Label::PredictiveNeutral;
    const auto tallied = tally(records, TaskKind::Prediction, coins);
    REQUIRE(tallied.size() == 1);
    const auto& cardano = tallied.at("cardano");
    CHECK(cardano.size() == 4);
    CHECK(cardano.at(Label::NonPredictive) == 2);
    CHECK(cardano.at(Label::PredictiveNeutral) == 1);
    CHECK(cardano.at(Label::PredictiveIncremental) == 0);
    CHECK(cardano.at(Label::PredictiveDecremental) == 0);

    CHECK(tally({}, TaskKind::Prediction, coins).empty());

    std::vector<Classification> hope(1);
    hope[0].comment_id = "a";
    hope[0].task = TaskKind::Hope;
    hope[0].label = Label::NotHope;
    CHECK(error_of([&] { tally(hope, TaskKind::Regret, coins); }) == ErrorCode::TaskMismatch);

    records[0].comment_id = "zzz";
    CHECK(error_of([&] { tally(records, TaskKind::Prediction, coins); }) == ErrorCode::SchemaError);

    const auto rows = distribution(tallied, TaskKind::Prediction);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].total == 3);
    CHECK(rows[0].percent(Label::NonPredictive) == 66.7);
}

TEST_CASE("kappa fixtures") {
    Pairs identical;
    for (int i = 0; i < 50; ++i) {
        const Label label = labels_for(TaskKind::Hope)[static_cast<std::size_t>(i) % 4];
        identical.emplace_back(label, label);
    }
    const auto perfect = cohen_kappa(identical);
    CHECK(perfect.kappa == 1.0);
    CHECK(perfect.observed_agreement == 1.0);
    CHECK(perfect.n_items == 50);
    CHECK(perfect.task == TaskKind::Hope);

    const Pairs disjoint(40, {Label::NotHope, Label::GeneralizedHope});
    const auto none = cohen_kappa(disjoint);
    CHECK(none.observed_agreement == 0.0);
    CHECK(none.expected_agreement == 0.0);
    CHECK(none.kappa == 0.0);

    const auto pairs = confusion_fixture();
    const auto hand = cohen_kappa(pairs);
    CHECK(hand.n_items == 100);
    CHECK(hand.observed_agreement == doctest::Approx(0.70).epsilon(1e-12));
    CHECK(hand.expected_agreement == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(std::abs(hand.kappa - 0.375) < 1e-9);
    CHECK(std::abs(hand.kappa - kappa_oracle(pairs)) < 1e-12);

    // both raters constant and equal: full agreement
    CHECK(cohen_kappa(Pairs(10, {Label::NoRegret, Label::NoRegret})).kappa == 1.0);
}

TEST_CASE("kappa errors") {
    CHECK(error_of([] { cohen_kappa({}); }) == ErrorCode::EmptyInput);
    const Pairs mixed = {{Label::NotHope, Label::NotHope}, {Label::NoRegret, Label::NoRegret}};
    CHECK(error_of([&] { cohen_kappa(mixed); }) == ErrorCode::MixedTasks);
    const Pairs crossed = {{Label::NotHope, Label::NoRegret}};
    CHECK(error_of([&] { cohen_kappa(crossed); }) == ErrorCode::MixedTasks);
}

TEST_CASE("kappa properties on random labelings") {
    SeededRng rng(derive_seed(11, "kappa-properties"));
    const auto labels = labels_for(TaskKind::Prediction);
    for (int trial = 0; trial < 200; ++trial) {
        Pairs pairs;
        const auto n = 2 + rng.below(60);
        const auto skew = rng.below(4);
        for (std::uint64_t i = 0; i < n; ++i) {
            const Label model = labels[rng.below(labels.size())];
            const Label human = rng.below(4) < skew ? model : labels[rng.below(labels.size())];
            pairs.emplace_back(model, human);
        }
        const auto k = cohen_kappa(pairs);
        CHECK(k.kappa <= 1.0 + 1e-12);
        CHECK(k.observed_agreement >= 0.0);
        CHECK(k.observed_agreement <= 1.0);

        Pairs swapped;
        for (const auto& [m, h] : pairs) swapped.emplace_back(h, m);
        CHECK(cohen_kappa(swapped).kappa == doctest::Approx(k.kappa).epsilon(1e-12));

        Pairs shuffled = pairs;
        for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
            std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
        }
        CHECK(cohen_kappa(shuffled).kappa == k.kappa);

        if (k.expected_agreement < 1.0) {
            CHECK(k.kappa == doctest::Approx(kappa_oracle(pairs)).epsilon(1e-9));
        }
    }
}

TEST_CASE("independent random labelings have kappa near zero") {
    SeededRng model_rng(derive_seed(2024, "model"));
    SeededRng human_rng(derive_seed(2024, "human"));
    const auto labels = labels_for(TaskKind::Prediction);
    Pairs pairs;
    for (int i = 0; i < 10000; ++i) {
        pairs.emplace_back(labels[model_rng.below(4)], labels[human_rng.below(4)]);
    }
    CHECK(std::abs(cohen_kappa(pairs).kappa) < 0.05);
}

TEST_CASE("render_report") {
    TempDir dir;
    std::vector<DistributionRow> rows;
    for (const auto& ref : reference_rows()) {
        LabelCounts counts;
        for (const auto& [label, printed] : ref.printed) counts[label] = count_from_printed(printed);
        rows.push_back(to_percentages(ref.coin, ref.task, counts, 1000));
    }
    const std::vector<KappaResult> kappas = {cohen_kappa(confusion_fixture())};
    const auto written = render_report(rows, kappas, dir.path());
    REQUIRE(written.size() == 4);
    CHECK(written[0].filename() == "report.md");

    const auto md = read_file(dir / "report.md");
    CHECK(md.find("| ripple | 96.2 | 2.8 | 1.0 | 1000 |") != std::string::npos);
    CHECK(md.find("| fantom | 80.5 | 15.8 | 0.7 | 3.0 | 1000 |") != std::string::npos);
    CHECK(md.find("| cardano | 95.4 | 2.3 | 2.2 | 0.1 | 1000 |") != std::string::npos);
    CHECK(md.find("| matic | 63.2 | 23.4 | 2.9 | 10.5 | 1000 |") != std::string::npos);
    CHECK(md.find("| regret | 100 | 0.7000 | 0.5200 | 0.3750 |") != std::string::npos);

    const auto regret_csv = pulse::testing::read_lines(dir / "regret.csv");
    CHECK(regret_csv.size() == 1 + 5 * 3);
    CHECK(regret_csv[0] == "coin,label,count,percent");

    TempDir empty_dir;
    render_report({}, {}, empty_dir.path());
    const auto empty_md = read_file(empty_dir / "report.md");
    CHECK(empty_md.find("No agreement results.") != std::string::npos);
    CHECK(pulse::testing::read_lines(empty_dir / "hope.csv").size() == 1);

    TempDir one_dir;
    const std::vector<DistributionRow> one = {
        to_percentages("binance", TaskKind::Hope, {{Label::NotHope, 3}, {Label::RealisticHope, 1}}, 4)};
    render_report(one, {}, one_dir.path());
    CHECK(pulse::testing::read_lines(one_dir / "hope.csv").size() == 1 + 4);
    CHECK(pulse::testing::read_lines(one_dir / "prediction.csv").size() == 1);
}
