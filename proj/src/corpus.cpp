#include "pulse/corpus.hpp"

#include "pulse/error.hpp"
#include "pulse/preprocess.hpp"
#include "pulse/random.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace pulse {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::ifstream open_for_read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    return in;
}

std::ofstream open_for_append(const fs::path& path) {
    if (!path.parent_path().empty()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Ids are text, but numeric ids (as tweet ids often are) are accepted.
std::optional<std::string> id_field(const json& record) {
    const auto it = record.find("id");
    if (it == record.end()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return it->dump();
    return std::nullopt;
}

std::optional<std::string> text_field(const json& record, const char* name) {
    const auto it = record.find(name);
    if (it == record.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

std::string schema_report(const std::vector<std::string>& problems) {
    std::string message = std::to_string(problems.size()) + " invalid line(s):";
    for (const auto& problem : problems) message += "\n  " + problem;
    return message;
}

json to_json(const Classification& record) {
    return {{"comment_id", record.comment_id},
            {"task", task_name(record.task)},
            {"label", canonical_string(record.label)},
            {"backend_id", record.backend_id},
            {"model_name", record.model_name},
            {"cached", record.cached},
            {"raw_response", record.raw_response},
            {"timestamp", record.timestamp}};
}

using ClassificationKey = std::tuple<std::string, TaskKind, std::string>;

ClassificationKey key_of(const Classification& record) {
    return {record.comment_id, record.task, record.model_name};
}

}  // namespace

std::vector<Comment> load_corpus(const fs::path& path) {
    auto in = open_for_read(path);
    std::vector<Comment> comments;
    std::vector<std::string> problems;
    std::unordered_map<std::string, std::size_t> first_line;
    std::optional<std::pair<std::string, std::size_t>> duplicate;

    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        strip_cr(line);
        if (is_blank(line)) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";

        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error&) {
            problems.push_back(where + "not valid JSON");
            continue;
        }
        if (!record.is_object()) {
            problems.push_back(where + "not a JSON object");
            continue;
        }

        Comment comment;
        const auto id = id_field(record);
        const auto coin = text_field(record, "coin");
        const auto text = text_field(record, "text");
        std::string missing;
        if (!id || id->empty()) missing += " id";
        if (!coin || coin->empty()) missing += " coin";
        if (!text || text->empty()) missing += " text";
        if (!missing.empty()) {
            problems.push_back(where + "missing or empty field(s):" + missing);
            continue;
        }
        if (record.contains("created_at") && !record["created_at"].is_null()) {
            if (!record["created_at"].is_string()) {
                problems.push_back(where + "created_at must be text");
                continue;
            }
            comment.created_at = record["created_at"].get<std::string>();
        }
        comment.id = *id;
        comment.coin = *coin;
        comment.raw_text = *text;

        if (const auto [it, inserted] = first_line.emplace(comment.id, line_no); !inserted) {
            if (!duplicate) duplicate.emplace(comment.id, line_no);
            continue;
        }
        comments.push_back(std::move(comment));
    }

    if (!problems.empty()) {
        throw Error(ErrorCode::SchemaError, path.string() + ": " + schema_report(problems));
    }
    if (duplicate) {
        throw Error(ErrorCode::DuplicateId,
                    path.string() + ": duplicate id '" + duplicate->first + "' at line " +
                        std::to_string(duplicate->second) + " (first at line " +
                        std::to_string(first_line.at(duplicate->first)) + ")");
    }
    return comments;
}

void write_corpus(const fs::path& path, std::span<const Comment> comments) {
    if (!path.parent_path().empty()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    for (const auto& comment : comments) {
        json record = {{"id", comment.id}, {"coin", comment.coin}, {"text", comment.raw_text}};
        if (comment.created_at) record["created_at"] = *comment.created_at;
        out << record.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string());
}

std::vector<Comment> dedupe(std::vector<Comment> comments) {
    std::unordered_set<std::string> seen;
    std::vector<Comment> survivors;
    survivors.reserve(comments.size());
    for (auto& comment : comments) {
        try {
            comment.clean_text = preprocess(comment.raw_text).text;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyAfterCleaning) throw;
            comment.clean_text.clear();
            survivors.push_back(std::move(comment));
            continue;
        }
        if (seen.insert(comment.clean_text).second) survivors.push_back(std::move(comment));
    }
    return survivors;
}

std::vector<Comment> sample_per_coin(std::span<const Comment> comments, std::size_t n,
                                     std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::UsageError, "sample size must be at least 1");

    std::map<std::string, std::vector<std::size_t>> by_coin;
    for (std::size_t i = 0; i < comments.size(); ++i) by_coin[comments[i].coin].push_back(i);

    for (const auto& [coin, members] : by_coin) {
        if (members.size() < n) throw InsufficientComments(coin, members.size(), n);
    }

    std::vector<Comment> sample;
    sample.reserve(by_coin.size() * n);
    for (auto& [coin, members] : by_coin) {
        SeededRng rng(derive_seed(seed, coin));
        // Partial Fisher-Yates: position i receives a uniform pick of the rest.
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(members.size() - i));
            std::swap(members[i], members[j]);
            sample.push_back(comments[members[i]]);
        }
    }
    return sample;
}

std::vector<Classification> load_classifications(const fs::path& path) {
    auto in = open_for_read(path);
    std::vector<Classification> records;
    std::vector<std::string> problems;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        strip_cr(line);
        if (is_blank(line)) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        try {
            const json record = json::parse(line);
            Classification c;
            c.comment_id = record.at("comment_id").get<std::string>();
            c.task = parse_task(record.at("task").get<std::string>());
            const auto label = label_from_canonical(record.at("label").get<std::string>());
            if (!label || task_of(*label) != c.task) {
                problems.push_back(where + "label does not belong to task");
                continue;
            }
            c.label = *label;
            c.backend_id = record.at("backend_id").get<std::string>();
            c.model_name = record.at("model_name").get<std::string>();
            c.cached = record.at("cached").get<bool>();
            c.raw_response = record.at("raw_response").get<std::string>();
            c.timestamp = record.at("timestamp").get<std::string>();
            records.push_back(std::move(c));
        } catch (const json::exception& e) {
            problems.push_back(where + e.what());
        } catch (const Error& e) {
            problems.push_back(where + e.what());
        }
    }
    if (!problems.empty()) {
        throw Error(ErrorCode::SchemaError, path.string() + ": " + schema_report(problems));
    }
    return records;
}

std::size_t append_classifications(const fs::path& path, std::span<const Classification> records) {
    std::set<ClassificationKey> existing;
    if (fs::exists(path)) {
        for (const auto& record : load_classifications(path)) existing.insert(key_of(record));
    }

    std::string buffer;
    std::size_t written = 0;
    for (const auto& record : records) {
        if (!existing.insert(key_of(record)).second) continue;
        buffer += to_json(record).dump();
        buffer += '\n';
        ++written;
    }
    if (written == 0) return 0;

    auto out = open_for_append(path);
    out << buffer;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string());
    return written;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted.push_back('"');
        quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

std::vector<AnnotationRecord> load_annotations(const fs::path& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::SchemaError, path.string() + ": missing header");
    }
    strip_cr(line);
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line != kAnnotationHeader) {
        throw Error(ErrorCode::SchemaError, path.string() + ": header must be exactly '" +
                                                std::string(kAnnotationHeader) + "'");
    }

    std::vector<AnnotationRecord> records;
    std::set<std::tuple<std::string, TaskKind, std::string>> seen;
    for (std::size_t row = 1; std::getline(in, line); ++row) {
        strip_cr(line);
        if (is_blank(line)) continue;
        const std::string where = path.string() + ": row " + std::to_string(row) + ": ";
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw Error(ErrorCode::SchemaError,
                        where + "expected 4 fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[3].empty()) {
            throw Error(ErrorCode::SchemaError, where + "comment_id and annotator_id are required");
        }
        AnnotationRecord record;
        record.comment_id = fields[0];
        try {
            record.task = parse_task(fields[1]);
        } catch (const Error&) {
            throw Error(ErrorCode::SchemaError, where + "unknown task '" + fields[1] + "'");
        }
        try {
            record.label = parse_label(record.task, fields[2]);
        } catch (const Error& e) {
            throw Error(ErrorCode::UnknownLabel, where + e.what());
        }
        record.annotator_id = fields[3];
        if (!seen.emplace(record.comment_id, record.task, record.annotator_id).second) {
            throw Error(ErrorCode::SchemaError, where + "repeated (comment_id, task, annotator_id)");
        }
        records.push_back(std::move(record));
    }
    return records;
}

void ensure_annotation_file(const fs::path& path) {
    std::error_code ec;
    if (fs::exists(path, ec) && fs::file_size(path, ec) > 0) return;
    auto out = open_for_append(path);
    out << kAnnotationHeader << '\n';
    if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string());
}

void append_annotation(const fs::path& path, const AnnotationRecord& record) {
    ensure_annotation_file(path);
    auto out = open_for_append(path);
    out << csv_field(record.comment_id) << ',' << task_name(record.task) << ','
        << csv_field(canonical_string(record.label)) << ',' << csv_field(record.annotator_id)
        << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string());
}

}  // namespace pulse
