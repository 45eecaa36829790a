#include "pulse/cli.hpp"

#include "cli_support.hpp"
#include "pulse/corpus.hpp"
#include "pulse/error.hpp"
#include "pulse/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <type_traits>
#include <unordered_map>

namespace pulse {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace detail {

std::vector<Classification> records_for(const fs::path& path, TaskKind task,
                                        const std::string& model) {
    if (!fs::exists(path)) return {};
    auto records = load_classifications(path);
    std::erase_if(records, [&](const Classification& c) {
        return c.task != task || c.model_name != model;
    });
    return records;
}

}  // namespace detail

namespace {

std::string one_line(std::string_view message) {
    std::string out;
    out.reserve(message.size());
    for (char c : message) {
        if (c == '\n') {
            out += "; ";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

// Study coins in table order, then any other coin alphabetically.
std::size_t coin_rank(const std::string& coin) {
    const auto it = std::find(kStudyCoins.begin(), kStudyCoins.end(), coin);
    return static_cast<std::size_t>(it - kStudyCoins.begin());
}

void sort_rows(std::vector<DistributionRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const auto ra = coin_rank(a.coin);
        const auto rb = coin_rank(b.coin);
        return ra != rb ? ra < rb : a.coin < b.coin;
    });
}

template <typename T>
T config_value(const json& value, const std::string& key) {
    if constexpr (std::is_unsigned_v<T>) {
        if (!value.is_number_unsigned()) {
            throw Error(ErrorCode::SchemaError, "config field '" + key + "' must be a non-negative integer");
        }
    }
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::SchemaError, "config field '" + key + "' has the wrong type");
    }
}

std::map<std::string, Label> human_labels(std::span<const AnnotationRecord> annotations,
                                          TaskKind task,
                                          const std::optional<std::string>& annotator_id) {
    std::map<std::string, Label> labels;
    for (const auto& record : annotations) {
        if (record.task != task) continue;
        if (annotator_id && record.annotator_id != *annotator_id) continue;
        if (!labels.emplace(record.comment_id, record.label).second) {
            throw Error(ErrorCode::SchemaError,
                        "comment " + record.comment_id +
                            " has labels from several annotators; choose one with --annotator");
        }
    }
    return labels;
}

void print_task_run(const TaskRun& run, std::ostream& out, std::ostream& err) {
    const RunStats& s = run.stats;
    out << task_name(run.task) << ": " << s.items << " to classify, " << s.classified
        << " classified (" << s.cache_hits << " from cache), " << s.excluded_empty
        << " empty after cleaning, " << s.errors() << " failed, " << s.backend_calls
        << " backend calls, " << run.appended << " appended, " << run.already_recorded
        << " already recorded\n";
    constexpr std::size_t kShown = 5;
    for (std::size_t i = 0; i < std::min(kShown, s.failures.size()); ++i) {
        const auto& f = s.failures[i];
        err << "  " << task_name(run.task) << " comment " << f.comment_id << ": "
            << error_code_name(f.code) << ": " << one_line(f.message) << '\n';
    }
    if (s.failures.size() > kShown) {
        err << "  ... and " << s.failures.size() - kShown << " more failures\n";
    }
}

}  // namespace

fs::path RunConfig::corpus_file() const {
    return corpus_path.empty() ? out_dir / "corpus.jsonl" : corpus_path;
}

fs::path RunConfig::classifications_file() const { return out_dir / "classifications.jsonl"; }

fs::path RunConfig::annotations_file() const { return out_dir / "annotations.csv"; }

fs::path RunConfig::cache_file() const {
    return cache_path_set ? backend_config.cache_path : out_dir / "cache.jsonl";
}

std::string RunConfig::effective_model() const {
    return backend == BackendKind::Mock ? std::string(kMockModelName) : backend_config.model_name;
}

void RunConfig::validate() const {
    if (sample_n < 1) throw Error(ErrorCode::UsageError, "sample_n must be at least 1");
    if (tasks.empty()) throw Error(ErrorCode::UsageError, "at least one task is required");
    if (out_dir.empty()) throw Error(ErrorCode::UsageError, "out_dir must not be empty");
    backend_config.validate();
}

std::vector<TaskKind> parse_task_list(std::string_view text) {
    std::vector<TaskKind> tasks;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const auto end = std::min(text.find(',', begin), text.size());
        const auto item = text.substr(begin, end - begin);
        if (item.find_first_not_of(" \t") != std::string_view::npos) {
            const TaskKind task = parse_task(item);
            if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) tasks.push_back(task);
        }
        begin = end + 1;
    }
    if (tasks.empty()) throw Error(ErrorCode::UsageError, "task list is empty");
    return tasks;
}

void apply_config_file(RunConfig& config, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, "config " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "config must be a JSON object");

    BackendConfig& backend = config.backend_config;
    for (const auto& [key, value] : doc.items()) {
        if (key == "out_dir") {
            config.out_dir = config_value<std::string>(value, key);
        } else if (key == "corpus_path") {
            config.corpus_path = config_value<std::string>(value, key);
        } else if (key == "sample_n") {
            config.sample_n = config_value<std::size_t>(value, key);
        } else if (key == "seed") {
            config.seed = config_value<std::uint64_t>(value, key);
        } else if (key == "tasks") {
            if (value.is_string()) {
                config.tasks = parse_task_list(value.get<std::string>());
            } else {
                std::string joined;
                for (const auto& item : config_value<std::vector<std::string>>(value, key)) {
                    joined += item + ",";
                }
                config.tasks = parse_task_list(joined);
            }
        } else if (key == "backend") {
            config.backend = parse_backend(config_value<std::string>(value, key));
        } else if (key == "base_url") {
            backend.base_url = config_value<std::string>(value, key);
        } else if (key == "model_name") {
            backend.model_name = config_value<std::string>(value, key);
        } else if (key == "auth_env_var") {
            backend.auth_env_var = config_value<std::string>(value, key);
        } else if (key == "temperature") {
            backend.temperature = config_value<double>(value, key);
        } else if (key == "max_retries") {
            backend.max_retries = config_value<int>(value, key);
        } else if (key == "backoff_base_ms") {
            backend.backoff_base_ms = config_value<int>(value, key);
        } else if (key == "backoff_cap_ms") {
            backend.backoff_cap_ms = config_value<int>(value, key);
        } else if (key == "parallelism") {
            backend.parallelism = config_value<int>(value, key);
        } else if (key == "cache_path") {
            backend.cache_path = config_value<std::string>(value, key);
            config.cache_path_set = true;
        } else if (key == "api_key" || key == "token" || key == "bearer_token") {
            throw Error(ErrorCode::SchemaError,
                        "config must not hold credentials; set the variable named by auth_env_var");
        } else {
            throw Error(ErrorCode::SchemaError, "unknown config field '" + key + "'");
        }
    }
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::UsageError:
        return 1;
    case ErrorCode::TransportError:
    case ErrorCode::AuthError:
    case ErrorCode::UnparsableResponse:
        return 3;
    default:
        return 2;
    }
}

std::size_t cmd_synth(const fs::path& out_path, std::size_t per_coin_n, std::uint64_t seed,
                      CliContext& ctx) {
    if (per_coin_n == 0) throw Error(ErrorCode::UsageError, "per_coin_n must be at least 1");
    const auto corpus = synthesize_corpus(per_coin_n, seed);
    write_corpus(out_path, corpus);
    ctx.out << "wrote " << corpus.size() << " comments (" << per_coin_n << " per coin) to "
            << out_path.string() << '\n';
    return corpus.size();
}

ClassifyRun cmd_classify(const RunConfig& config, CliContext& ctx) {
    config.validate();
    const auto corpus = load_corpus(config.corpus_file());
    const auto unique = dedupe(corpus);
    const auto sample = sample_per_coin(unique, config.sample_n, config.seed);
    ctx.out << "corpus: " << corpus.size() << " comments, " << unique.size()
            << " after dedupe, " << sample.size() << " sampled\n";

    BackendConfig backend = config.backend_config;
    backend.cache_path = config.cache_file();

    std::shared_ptr<Transport> transport;
    if (ctx.transport_factory) {
        transport = ctx.transport_factory(config.backend, backend);
    } else {
        if (config.backend == BackendKind::Remote && !ctx.env(backend.auth_env_var)) {
            throw Error(ErrorCode::AuthError,
                        "environment variable " + backend.auth_env_var + " is not set");
        }
        transport = make_transport(config.backend, backend, ctx.env);
    }
    Classifier classifier(config.backend, backend, std::move(transport), ctx.hooks);

    using Key = std::pair<std::string, TaskKind>;
    std::set<Key> recorded;
    const fs::path out_file = config.classifications_file();
    if (fs::exists(out_file)) {
        for (const auto& record : load_classifications(out_file)) {
            if (record.model_name == classifier.model_name()) {
                recorded.emplace(record.comment_id, record.task);
            }
        }
    }

    ClassifyRun run;
    for (TaskKind task : config.tasks) {
        TaskRun task_run;
        task_run.task = task;
        std::vector<Comment> pending;
        for (const auto& comment : sample) {
            if (recorded.contains({comment.id, task})) {
                ++task_run.already_recorded;
            } else {
                pending.push_back(comment);
            }
        }
        auto batch = classifier.classify_batch(task, pending);
        task_run.appended = append_classifications(out_file, batch.classifications);
        task_run.stats = std::move(batch.stats);

        const auto& stats = task_run.stats;
        const bool auth_failed =
            std::any_of(stats.failures.begin(), stats.failures.end(),
                        [](const Failure& f) { return f.code == ErrorCode::AuthError; });
        if (auth_failed || (stats.errors() > 0 && stats.classified == 0)) run.fatal = true;

        run.backend_calls += stats.backend_calls;
        run.appended += task_run.appended;
        print_task_run(task_run, ctx.out, ctx.err);
        run.tasks.push_back(std::move(task_run));
    }
    ctx.out << "total: " << run.appended << " records appended to " << out_file.string() << ", "
            << run.backend_calls << " backend calls\n";
    return run;
}

KappaResult cmd_agree(const RunConfig& config, TaskKind task, const fs::path& annotations_path,
                      const std::optional<std::string>& annotator_id, CliContext& ctx) {
    const auto annotations = load_annotations(annotations_path);
    const auto humans = human_labels(annotations, task, annotator_id);
    const auto records =
        detail::records_for(config.classifications_file(), task, config.effective_model());

    std::vector<std::pair<Label, Label>> pairs;
    for (const auto& record : records) {
        if (const auto it = humans.find(record.comment_id); it != humans.end()) {
            pairs.emplace_back(record.label, it->second);
        }
    }
    if (pairs.empty()) {
        throw Error(ErrorCode::NoOverlap, "no " + std::string(task_name(task)) +
                                              " comment is both annotated in " +
                                              annotations_path.string() + " and classified by " +
                                              config.effective_model());
    }

    const KappaResult result = cohen_kappa(pairs);
    ctx.out << "task: " << task_name(task) << '\n'
            << "n_items: " << result.n_items << '\n'
            << "p_o: " << format_fixed(result.observed_agreement, 4) << '\n'
            << "p_e: " << format_fixed(result.expected_agreement, 4) << '\n'
            << "kappa: " << format_fixed(result.kappa, 4) << '\n';
    return result;
}

std::vector<fs::path> cmd_report(const RunConfig& config, const fs::path& annotations_path,
                                 CliContext& ctx) {
    const fs::path records_file = config.classifications_file();
    std::vector<DistributionRow> rows;
    std::vector<KappaResult> kappas;

    if (!fs::exists(records_file)) {
        ctx.err << "note: " << records_file.string() << " not found; writing an empty report\n";
    } else {
        const auto all_records = load_classifications(records_file);
        const std::string model = config.effective_model();
        CoinIndex coins;
        bool coins_loaded = false;
        std::vector<AnnotationRecord> annotations;
        if (fs::exists(annotations_path)) annotations = load_annotations(annotations_path);

        for (TaskKind task : kAllTasks) {
            std::vector<Classification> records;
            for (const auto& record : all_records) {
                if (record.task == task && record.model_name == model) records.push_back(record);
            }
            if (records.empty()) continue;
            if (!coins_loaded) {
                coins = coin_index(load_corpus(config.corpus_file()));
                coins_loaded = true;
            }
            auto task_rows = distribution(tally(records, task, coins), task);
            sort_rows(task_rows);
            rows.insert(rows.end(), task_rows.begin(), task_rows.end());

            std::map<std::string, Label> humans;
            try {
                humans = human_labels(annotations, task, std::nullopt);
            } catch (const Error& e) {
                ctx.err << "note: skipping " << task_name(task) << " agreement: " << e.what() << '\n';
            }
            std::vector<std::pair<Label, Label>> pairs;
            for (const auto& record : records) {
                if (const auto it = humans.find(record.comment_id); it != humans.end()) {
                    pairs.emplace_back(record.label, it->second);
                }
            }
            if (!pairs.empty()) kappas.push_back(cohen_kappa(pairs));
        }
    }

    const auto written = render_report(rows, kappas, config.out_dir);
    for (const auto& path : written) ctx.out << "wrote " << path.string() << '\n';
    return written;
}

int run_cli(std::span<const std::string> args, CliContext& ctx) {
    CLI::App app{"Few-shot prediction, hope and regret labelling for crypto discussions", "pulse"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string corpus_path;
    std::size_t sample_n = 0;
    std::string tasks;
    std::string backend;
    std::string base_url;
    std::string model_name;
    std::string auth_env_var;
    double temperature = 0.0;
    int max_retries = 0;
    int backoff_base_ms = 0;
    int backoff_cap_ms = 0;
    int parallelism = 0;
    std::string cache_path;

    auto* o_config = app.add_option("--config", config_path, "JSON config file");
    auto* o_seed = app.add_option("--seed", seed, "Seed for sampling and synthesis");
    auto* o_out = app.add_option("--out,--out-dir,--out_dir", out_dir, "Output directory");
    auto* o_corpus = app.add_option("--corpus-path,--corpus_path", corpus_path, "Corpus JSONL file");
    auto* o_sample = app.add_option("--sample-n,--sample_n", sample_n, "Comments sampled per coin");
    auto* o_tasks = app.add_option("--tasks", tasks, "Comma list of prediction,hope,regret");
    auto* o_backend = app.add_option("--backend", backend, "remote or mock");
    auto* o_base = app.add_option("--base-url,--base_url", base_url, "Chat-completions base URL");
    auto* o_model = app.add_option("--model-name,--model_name", model_name, "Remote model name");
    auto* o_env = app.add_option("--auth-env-var,--auth_env_var", auth_env_var,
                                 "Environment variable holding the bearer token");
    auto* o_temp = app.add_option("--temperature", temperature, "Sampling temperature (0..2)");
    auto* o_retries = app.add_option("--max-retries,--max_retries", max_retries, "Transport retries");
    auto* o_base_ms = app.add_option("--backoff-base-ms,--backoff_base_ms", backoff_base_ms,
                                     "First retry delay in ms");
    auto* o_cap_ms = app.add_option("--backoff-cap-ms,--backoff_cap_ms", backoff_cap_ms,
                                    "Longest retry delay in ms");
    auto* o_par = app.add_option("--parallelism", parallelism, "Requests in flight");
    auto* o_cache = app.add_option("--cache-path,--cache_path", cache_path, "Response cache file");

    auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic corpus");
    std::size_t per_coin_n = 1000;
    synth->add_option("--per-coin-n,--per_coin_n", per_coin_n, "Comments per coin")
        ->capture_default_str();

    auto* classify = app.add_subcommand("classify", "Sample the corpus and classify it");

    auto* annotate = app.add_subcommand("annotate", "Blind human labelling session");
    std::string annotate_task;
    std::string annotator;
    std::size_t k = 0;
    std::string annotate_path;
    annotate->add_option("--task", annotate_task, "Task to annotate")->required();
    annotate->add_option("--annotator", annotator, "Annotator id")->required();
    annotate->add_option("--k", k, "Comments in the session")->required();
    annotate->add_option("--annotations", annotate_path, "Annotations CSV");

    auto* agree = app.add_subcommand("agree", "Cohen's kappa of model vs human labels");
    std::string agree_task;
    std::string agree_path;
    std::string agree_annotator;
    agree->add_option("--task", agree_task, "Task to evaluate")->required();
    agree->add_option("--annotations", agree_path, "Annotations CSV");
    auto* o_agree_annotator = agree->add_option("--annotator", agree_annotator, "Only this annotator");

    auto* report = app.add_subcommand("report", "Distribution tables and figure data");
    std::string report_annotations;
    report->add_option("--annotations", report_annotations, "Annotations CSV for the kappa section");

    std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv_rest.begin(), argv_rest.end());  // CLI11 expects reversed order
    try {
        app.parse(argv_rest);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, ctx.out, ctx.err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, ctx.out, ctx.err);
        return 1;
    }

    try {
        RunConfig config;
        if (o_config->count() > 0) apply_config_file(config, config_path);
        if (o_seed->count() > 0) config.seed = seed;
        if (o_out->count() > 0) config.out_dir = out_dir;
        if (o_corpus->count() > 0) config.corpus_path = corpus_path;
        if (o_sample->count() > 0) config.sample_n = sample_n;
        if (o_tasks->count() > 0) config.tasks = parse_task_list(tasks);
        if (o_backend->count() > 0) config.backend = parse_backend(backend);
        BackendConfig& bc = config.backend_config;
        if (o_base->count() > 0) bc.base_url = base_url;
        if (o_model->count() > 0) bc.model_name = model_name;
        if (o_env->count() > 0) bc.auth_env_var = auth_env_var;
        if (o_temp->count() > 0) bc.temperature = temperature;
        if (o_retries->count() > 0) bc.max_retries = max_retries;
        if (o_base_ms->count() > 0) bc.backoff_base_ms = backoff_base_ms;
        if (o_cap_ms->count() > 0) bc.backoff_cap_ms = backoff_cap_ms;
        if (o_par->count() > 0) bc.parallelism = parallelism;
        if (o_cache->count() > 0) {
            bc.cache_path = cache_path;
            config.cache_path_set = true;
        }
        config.validate();

        if (synth->parsed()) {
            cmd_synth(config.corpus_file(), per_coin_n, config.seed, ctx);
            return 0;
        }
        if (classify->parsed()) {
            const auto run = cmd_classify(config, ctx);
            return run.fatal ? 3 : 0;
        }
        if (annotate->parsed()) {
            const fs::path path = annotate_path.empty() ? config.annotations_file() : fs::path(annotate_path);
            cmd_annotate(config, parse_task(annotate_task), annotator, k, path, ctx);
            return 0;
        }
        if (agree->parsed()) {
            const fs::path path = agree_path.empty() ? config.annotations_file() : fs::path(agree_path);
            std::optional<std::string> only;
            if (o_agree_annotator->count() > 0) only = agree_annotator;
            cmd_agree(config, parse_task(agree_task), path, only, ctx);
            return 0;
        }
        if (report->parsed()) {
            const fs::path path =
                report_annotations.empty() ? config.annotations_file() : fs::path(report_annotations);
            cmd_report(config, path, ctx);
            return 0;
        }
    } catch (const Error& e) {
        ctx.err << "error: " << error_code_name(e.code()) << ": " << one_line(e.what()) << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        ctx.err << "error: " << one_line(e.what()) << '\n';
        return 2;
    }
    return 1;
}

}  // namespace pulse
