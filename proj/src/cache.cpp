#include "pulse/cache.hpp"

#include "pulse/error.hpp"

#include <json.hpp>
#include <openssl/sha.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace pulse {

using json = nlohmann::json;

std::string cache_key(TaskKind task, std::string_view model_name, std::string_view clean_text) {
    // Unit separators keep ("ab","c") and ("a","bc") apart.
    std::string material;
    material.reserve(model_name.size() + clean_text.size() + 16);
    material += task_name(task);
    material += '\x1f';
    material += model_name;
    material += '\x1f';
    material += clean_text;

    std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(material.data()), material.size(), digest.data());

    std::string hex;
    hex.reserve(digest.size() * 2);
    char pair[3];
    for (unsigned char byte : digest) {
        std::snprintf(pair, sizeof pair, "%02x", byte);
        hex += pair;
    }
    return hex;
}

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // a missing cache is an empty cache
    std::string line;
    while (std::getline(in, line)) {
        needs_newline_ = in.eof();
        if (line.empty()) continue;
        try {
            const json record = json::parse(line);
            CacheEntry entry;
            entry.key = record.at("key").get<std::string>();
            const auto label = label_from_canonical(record.at("label").get<std::string>());
            if (!label) {
                ++skipped_lines_;
                continue;
            }
            entry.label = *label;
            entry.raw_response = record.at("raw_response").get<std::string>();
            entry.model = record.at("model").get<std::string>();
            entry.timestamp = record.value("timestamp", "");
            entries_.insert_or_assign(entry.key, std::move(entry));
        } catch (const json::exception&) {
            ++skipped_lines_;
        }
    }
}

std::optional<CacheEntry> ResponseCache::find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    if (const auto it = entries_.find(key); it != entries_.end()) return it->second;
    return std::nullopt;
}

void ResponseCache::store(const CacheEntry& entry) {
    const json record = {{"key", entry.key},
                         {"label", canonical_string(entry.label)},
                         {"raw_response", entry.raw_response},
                         {"model", entry.model},
                         {"timestamp", entry.timestamp}};
    std::string line = record.dump() + "\n";

    std::lock_guard lock(mutex_);
    if (needs_newline_) {
        line.insert(line.begin(), '\n');
        needs_newline_ = false;
    }
    if (!path_.parent_path().empty()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << line;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "cannot append to cache " + path_.string());
    entries_.insert_or_assign(entry.key, entry);
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

}  // namespace pulse
