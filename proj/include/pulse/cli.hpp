#pragma once

#include "pulse/analytics.hpp"
#include "pulse/backend.hpp"
#include "pulse/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pulse {

struct RunConfig {
    std::filesystem::path out_dir = "pulse-out";
    std::filesystem::path corpus_path;  // empty: <out_dir>/corpus.jsonl
    std::size_t sample_n = 1000;
    std::uint64_t seed = 42;
    std::vector<TaskKind> tasks{kAllTasks.begin(), kAllTasks.end()};
    BackendKind backend = BackendKind::Mock;
    BackendConfig backend_config;
    bool cache_path_set = false;  // otherwise the cache lives in out_dir

    std::filesystem::path corpus_file() const;
    std::filesystem::path classifications_file() const;
    std::filesystem::path annotations_file() const;
    std::filesystem::path cache_file() const;

    /// Model name stamped on records produced by the configured backend.
    std::string effective_model() const;

    /// Throws Error(UsageError).
    void validate() const;
};

/// Applies the fields of a JSON config file on top of `config`. Unknown
/// keys and any attempt to store a credential raise Error(SchemaError).
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

std::vector<TaskKind> parse_task_list(std::string_view text);

using TransportFactory =
    std::function<std::shared_ptr<Transport>(BackendKind, const BackendConfig&)>;

/// Streams and seams for one CLI invocation.
struct CliContext {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    EnvLookup env = process_env;
    TransportFactory transport_factory;  // empty: make_transport with `env`
    ClassifierHooks hooks;
};

/// Exit codes: 0 success, 1 usage, 2 I/O or schema, 3 backend failure.
int exit_code_for(ErrorCode code) noexcept;

/// Parses `args` (args[0] is the program name) and runs one command.
int run_cli(std::span<const std::string> args, CliContext& ctx);

std::size_t cmd_synth(const std::filesystem::path& out_path, std::size_t per_coin_n,
                      std::uint64_t seed, CliContext& ctx);

struct TaskRun {
    TaskKind task = TaskKind::Prediction;
    std::size_t already_recorded = 0;
    std::size_t appended = 0;
    RunStats stats;
};

struct ClassifyRun {
    std::vector<TaskRun> tasks;
    std::size_t backend_calls = 0;
    std::size_t appended = 0;
    bool fatal = false;  // a task produced failures and no classification, or auth failed
};

ClassifyRun cmd_classify(const RunConfig& config, CliContext& ctx);

struct AnnotateSession {
    std::size_t selected = 0;   // comments chosen for this annotator
    std::size_t prompted = 0;   // prompts shown in this session
    std::size_t recorded = 0;   // labels written in this session
    bool completed = false;
};

AnnotateSession cmd_annotate(const RunConfig& config, TaskKind task, const std::string& annotator_id,
                             std::size_t k, const std::filesystem::path& annotations_path,
                             CliContext& ctx);

KappaResult cmd_agree(const RunConfig& config, TaskKind task,
                      const std::filesystem::path& annotations_path,
                      const std::optional<std::string>& annotator_id, CliContext& ctx);

std::vector<std::filesystem::path> cmd_report(const RunConfig& config,
                                              const std::filesystem::path& annotations_path,
                                              CliContext& ctx);

}  // namespace pulse
