#include "nextmethod/corpus.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace nextmethod {

using nlohmann::json;

namespace {

bool has_java_extension(std::string_view path) { return path.ends_with(".java"); }

// Returns an error message, or empty on success.
std::string parse_record(const json& j, CommitRecord& out) {
    if (!j.is_object()) return "record is not a JSON object";
    auto str_field = [&](const char* key, std::string& dst) -> std::string {
        auto it = j.find(key);
        if (it == j.end()) return std::string("missing field '") + key + "'";
        if (!it->is_string() || it->get_ref<const std::string&>().empty())
            return std::string("field '") + key + "' must be a non-empty string";
        dst = it->get<std::string>();
        return {};
    };
    if (auto err = str_field("repo", out.repo_id); !err.empty()) return err;
    if (auto err = str_field("commit", out.commit_id); !err.empty()) return err;

    auto ts = j.find("timestamp");
    if (ts == j.end()) return "missing field 'timestamp'";
    if (!ts->is_number_integer()) return "field 'timestamp' must be an integer";
    out.timestamp = ts->get<std::int64_t>();
    if (out.timestamp <= 0) return "field 'timestamp' must be positive";

    auto files = j.find("files");
    if (files == j.end()) return "missing field 'files'";
    if (!files->is_array() || files->empty()) return "field 'files' must be a non-empty array";
    for (std::size_t i = 0; i < files->size(); ++i) {
        const json& f = (*files)[i];
        const std::string where = "files[" + std::to_string(i) + "]";
        if (!f.is_object()) return where + " is not an object";
        FileChange change;
        auto path = f.find("path");
        if (path == f.end() || !path->is_string()) return where + ": missing string 'path'";
        change.path = path->get<std::string>();
        if (!has_java_extension(change.path)) return where + ": path '" + change.path + "' is not a .java file";
        auto after = f.find("after");
        if (after == f.end() || !after->is_string()) return where + ": missing string 'after'";
        change.after_source = after->get<std::string>();
        auto before = f.find("before");
        if (before != f.end() && !before->is_null()) {
            if (!before->is_string()) return where + ": 'before' must be a string or null";
            change.before_source = before->get<std::string>();
        }
        out.files.push_back(std::move(change));
    }
    return {};
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& input) {
    ParsedCorpus parsed;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            parsed.diagnostics.push_back({line_no, std::string("invalid JSON: ") + e.what()});
            continue;
        }
        CommitRecord record;
        if (auto err = parse_record(j, record); !err.empty()) {
            parsed.diagnostics.push_back({line_no, err});
            continue;
        }
        if (!seen.emplace(record.repo_id, record.commit_id).second) {
            parsed.diagnostics.push_back(
                {line_no, "duplicate commit '" + record.commit_id + "' in repo '" + record.repo_id + "'"});
            continue;
        }
        parsed.commits.push_back(std::move(record));
    }
    if (input.bad()) throw std::runtime_error("error while reading corpus stream");
    std::stable_sort(parsed.commits.begin(), parsed.commits.end(),
                     [](const CommitRecord& a, const CommitRecord& b) { return a.timestamp < b.timestamp; });
    return parsed;
}

ParsedCorpus parse_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
    return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<CommitRecord>& commits) {
    for (const auto& c : commits) {
        json files = json::array();
        for (const auto& f : c.files) {
            files.push_back({{"path", f.path},
                             {"before", f.before_source ? json(*f.before_source) : json(nullptr)},
                             {"after", f.after_source}});
        }
        out << json{{"repo", c.repo_id}, {"commit", c.commit_id}, {"timestamp", c.timestamp}, {"files", files}}.dump()
            << '\n';
    }
}

std::vector<MethodRecord> added_methods(const FileChange& change) {
    std::unordered_set<std::string> existing;
    if (change.before_source) {
        for (auto& c : extract_callables(*change.before_source).callables) existing.insert(std::move(c.signature));
    }
    std::vector<MethodRecord> added;
    // Every occurrence of a new signature counts: two anonymous listeners both
    // declaring onClick(View) are two added methods.
    for (auto& c : extract_callables(change.after_source).callables) {
        if (existing.contains(c.signature)) continue;
        MethodRecord m;
        m.path = change.path;
        m.signature = std::move(c.signature);
        m.source_text = std::move(c.source_text);
        m.line_count = c.line_count;
        added.push_back(std::move(m));
    }
    return added;
}

void extract_added_methods(std::vector<CommitRecord>& commits, std::uint64_t first_id) {
    std::uint64_t next = first_id;
    for (auto& commit : commits) {
        commit.added_methods.clear();
        for (const auto& file : commit.files) {
            for (auto& m : added_methods(file)) {
                m.method_id = MethodId{next++};
                m.repo_id = commit.repo_id;
                m.commit_id = commit.commit_id;
                commit.added_methods.push_back(std::move(m));
            }
        }
    }
}

std::vector<CommitRecord> filter_commits(std::vector<CommitRecord> commits) {
    std::erase_if(commits, [](const CommitRecord& c) {
        return c.added_methods.size() < kMinAddedMethods || c.added_methods.size() > kMaxAddedMethods;
    });
    return commits;
}

std::vector<CommitRecord> mine_commits(std::vector<CommitRecord> commits) {
    extract_added_methods(commits);
    return filter_commits(std::move(commits));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string corpus_fingerprint(const std::vector<CommitRecord>& commits) {
    std::uint64_t h = fnv1a("nextmethod-corpus");
    auto mix = [&](std::string_view s) {
        h = fnv1a(s, h);
        h = fnv1a(std::string_view("\x1f", 1), h);
    };
    for (const auto& c : commits) {
        mix(c.repo_id);
        mix(c.commit_id);
        mix(std::to_string(c.timestamp));
        for (const auto& f : c.files) {
            mix(f.path);
            mix(f.before_source ? *f.before_source : std::string_view("\x00", 1));
            mix(f.after_source);
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nextmethod
