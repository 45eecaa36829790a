#pragma once

#include "pulse/random.hpp"
#include "pulse/taxonomy.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

namespace pulse::testing {

inline std::filesystem::path golden_dir() { return PULSE_GOLDEN_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
        const auto end = line.find('\t', begin);
        cells.push_back(line.substr(begin, end - begin));
        if (end == std::string::npos) return cells;
        begin = end + 1;
    }
}

// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("pulse-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ignored;
        std::filesystem::remove_all(path_, ignored);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct ReferenceExample {
    TaskKind task;
    Label label;
    std::string sentence;
};

// Every example sentence printed in the label and prompt tables.
inline std::vector<ReferenceExample> reference_examples() {
    std::vector<ReferenceExample> rows;
    for (const auto& line : read_lines(golden_dir() / "reference_examples.tsv")) {
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        rows.push_back({parse_task(cells.at(0)), *label_from_canonical(cells.at(1)), cells.at(2)});
    }
    return rows;
}

struct ReferenceCell {
    TaskKind task;
    std::string coin;
    Label label;
    std::string percent;  // as printed, e.g. "95.4" or "3"
};

inline std::vector<ReferenceCell> reference_distributions() {
    std::vector<ReferenceCell> cells;
    for (const auto& line : read_lines(golden_dir() / "reference_distributions.tsv")) {
        if (line.empty()) continue;
        const auto row = split_tabs(line);
        cells.push_back({parse_task(row.at(0)), row.at(1), *label_from_canonical(row.at(2)), row.at(3)});
    }
    return cells;
}

inline const std::vector<std::string> kFuzzPieces = {
    "bitcoin", "ADA", "moon", "to", "the", "up", "is", "HODL", "2023", "x",
    "https://t.co/AbC123", "http://example.com/a?b=c", "www.coin.io/path", "HTTPS://LOUD.URL",
    "WWW.Shout.com", "#crypto", "@whale_alert", "$MATIC", "!!!", "...", "100x", "20%",
    "\xF0\x9F\x9A\x80",              // rocket
    "caf\xC3\xA9",                   // precomposed e acute
    "cafe\xCC\x81",                  // e + combining acute
    "\xCC\x81",                      // lone combining acute
    "na\xC3\xAFve", "\xE6\xAF\x94\xE7\x89\xB9\xE5\xB8\x81",  // CJK
    "\xD0\xBA\xD1\x80\xD0\xB8\xD0\xBF\xD1\x82\xD0\xBE",      // Cyrillic
    "\xC2\xA0",                      // no-break space
    "\xE2\x80\x94",                  // em dash
    "it's", "don't", "e.g.", "(yes)", "[no]", "a-b-c", "snake_case", "\xFF\xFE", "\t", "\n",
};

// Random mix of words, URLs, mentions, emoji, accents and odd whitespace.
inline std::string fuzz_comment(SeededRng& rng) {
    std::string text;
    const auto parts = 1 + rng.below(12);
    for (std::uint64_t p = 0; p < parts; ++p) {
        text += kFuzzPieces[rng.below(kFuzzPieces.size())];
        const auto gap = rng.below(4);
        if (gap == 1) text += " ";
        if (gap == 2) text += "  ";
        if (gap == 3 && rng.below(2) == 0) text += "\t";
    }
    return text;
}

}  // namespace pulse::testing
