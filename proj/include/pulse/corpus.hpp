#pragma once

#include "pulse/records.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pulse {

/// Reads a JSON-lines corpus: one {"id","coin","text","created_at"?} object
/// per line, blank lines ignored.
///
/// Every invalid line is reported, with its line number, in a single
/// Error(SchemaError). Repeated ids raise Error(DuplicateId) naming the id.
/// An unreadable file raises Error(IoError).
std::vector<Comment> load_corpus(const std::filesystem::path& path);

void write_corpus(const std::filesystem::path& path, std::span<const Comment> comments);

/// Keeps the first comment for each distinct cleaned text and fills in
/// `clean_text` on the survivors. Comments that clean to nothing are kept
/// with an empty `clean_text` so later stages can count them.
std::vector<Comment> dedupe(std::vector<Comment> comments);

/// Draws exactly `n` comments per coin, uniformly without replacement.
///
/// Each coin has its own generator seeded from (seed, coin), so adding or
/// removing other coins never changes a coin's sample. Groups are emitted in
/// coin-name order, each in draw order.
std::vector<Comment> sample_per_coin(std::span<const Comment> comments, std::size_t n,
                                     std::uint64_t seed);

std::vector<Classification> load_classifications(const std::filesystem::path& path);

/// Appends records not already present under (comment_id, task, model_name);
/// returns how many were written. Callers must not append concurrently.
std::size_t append_classifications(const std::filesystem::path& path,
                                   std::span<const Classification> records);

inline constexpr std::string_view kAnnotationHeader = "comment_id,task,label,annotator_id";

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

/// Creates the file with its header when it is missing or empty.
void ensure_annotation_file(const std::filesystem::path& path);

void append_annotation(const std::filesystem::path& path, const AnnotationRecord& record);

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

std::string csv_field(std::string_view value);

}  // namespace pulse
