#pragma once

#include "pulse/taxonomy.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace pulse {

struct CacheEntry {
    std::string key;
    Label label = Label::NonPredictive;
    std::string raw_response;
    std::string model;
    std::string timestamp;

    bool operator==(const CacheEntry&) const = default;
};

/// Stable SHA-256 hex digest over (task, model, cleaned text).
std::string cache_key(TaskKind task, std::string_view model_name, std::string_view clean_text);

/// Persistent key -> response store backed by a JSON-lines file.
///
/// Existing records are loaded on construction; new ones are appended and
/// flushed immediately so an interrupted run resumes where it stopped. A
/// torn final line from a crash is skipped on load. Lookups and stores are
/// safe to call from several threads.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path path);

    std::optional<CacheEntry> find(const std::string& key) const;
    void store(const CacheEntry& entry);

    std::size_t size() const;
    std::size_t skipped_lines() const noexcept { return skipped_lines_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CacheEntry> entries_;
    std::size_t skipped_lines_ = 0;
    bool needs_newline_ = false;  // file ends in a torn record
};

}  // namespace pulse
