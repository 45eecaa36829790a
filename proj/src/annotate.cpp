#include "cli_support.hpp"
#include "pulse/cli.hpp"
#include "pulse/corpus.hpp"
#include "pulse/error.hpp"
#include "pulse/random.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <string>
#include <unordered_map>

namespace pulse {

namespace fs = std::filesystem;

namespace {

std::string trimmed(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::optional<std::size_t> menu_choice(const std::string& answer, std::size_t options) {
    if (answer.empty() || !std::all_of(answer.begin(), answer.end(), ::isdigit)) return std::nullopt;
    if (answer.size() > 3) return std::nullopt;
    const auto value = static_cast<std::size_t>(std::stoul(answer));
    if (value < 1 || value > options) return std::nullopt;
    return value - 1;
}

}  // namespace

// The model's label is never shown: the annotator sees only the comment and
// the menu. Each answer is appended immediately, so stopping at any point
// (end of input, "q", or an interrupt) keeps everything answered so far,
// and the next session with the same seed skips it.
AnnotateSession cmd_annotate(const RunConfig& config, TaskKind task, const std::string& annotator_id,
                             std::size_t k, const fs::path& annotations_path, CliContext& ctx) {
    if (annotator_id.empty()) throw Error(ErrorCode::UsageError, "annotator id must not be empty");
    ensure_annotation_file(annotations_path);

    AnnotateSession session;
    if (k == 0) {
        session.completed = true;
        ctx.out << "nothing to annotate (k = 0)\n";
        return session;
    }

    const auto records =
        detail::records_for(config.classifications_file(), task, config.effective_model());
    std::set<std::string> classified_ids;
    for (const auto& record : records) classified_ids.insert(record.comment_id);
    if (classified_ids.empty()) {
        throw Error(ErrorCode::NoOverlap, "no " + std::string(task_name(task)) +
                                              " classifications from " + config.effective_model() +
                                              " in " + config.classifications_file().string());
    }

    std::unordered_map<std::string, const Comment*> by_id;
    const auto corpus = load_corpus(config.corpus_file());
    for (const auto& comment : corpus) by_id.emplace(comment.id, &comment);

    std::vector<std::string> pool(classified_ids.begin(), classified_ids.end());
    if (k > pool.size()) {
        ctx.err << "note: only " << pool.size() << " classified comments; annotating all of them\n";
        k = pool.size();
    }
    SeededRng rng(derive_seed(config.seed, "annotate/" + std::string(task_name(task))));
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    session.selected = k;

    std::set<std::string> done;
    for (const auto& record : load_annotations(annotations_path)) {
        if (record.task == task && record.annotator_id == annotator_id) done.insert(record.comment_id);
    }

    const auto saved = [&] {
        return std::count_if(pool.begin(), pool.end(),
                             [&](const std::string& id) { return done.contains(id); });
    };
    const auto menu = labels_for(task);
    std::size_t position = 0;
    for (const auto& comment_id : pool) {
        ++position;
        if (done.contains(comment_id)) continue;
        const auto found = by_id.find(comment_id);
        if (found == by_id.end()) {
            throw Error(ErrorCode::SchemaError, "classified comment " + comment_id +
                                                    " is missing from " +
                                                    config.corpus_file().string());
        }

        ++session.prompted;
        ctx.out << "\n[" << position << "/" << k << "] comment " << comment_id << " ("
                << found->second->coin << ")\n  " << found->second->raw_text << "\n";
        for (std::size_t i = 0; i < menu.size(); ++i) {
            ctx.out << "  " << i + 1 << ") " << canonical_string(menu[i]) << '\n';
        }

        while (true) {
            ctx.out << "label [1-" << menu.size() << ", q to stop]> " << std::flush;
            std::string line;
            if (!std::getline(ctx.in, line) || trimmed(line) == "q") {
                ctx.out << "\nsaved " << saved() << " of " << k << " to "
                        << annotations_path.string() << '\n';
                return session;
            }
            if (const auto choice = menu_choice(trimmed(line), menu.size())) {
                append_annotation(annotations_path, {comment_id, task, menu[*choice], annotator_id});
                done.insert(comment_id);
                ++session.recorded;
                break;
            }
            ctx.out << "invalid choice '" << trimmed(line) << "'\n";
        }
    }

    session.completed = true;
    ctx.out << "\nsession complete: " << saved() << " of " << k << " saved to "
            << annotations_path.string() << '\n';
    return session;
}

}  // namespace pulse
