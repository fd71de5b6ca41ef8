#pragma once

#include "nextmethod/ids.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nextmethod {

struct FileChange {
    std::string path;
    std::optional<std::string> before_source;  // absent for a newly added file
    std::string after_source;
};

/// One callable declaration (method or constructor) added in a commit.
struct MethodRecord {
    MethodId method_id;
    std::string repo_id;
    std::string commit_id;
    std::string path;
    std::string signature;
    std::string source_text;
    int line_count = 0;
};

struct CommitRecord {
    std::string repo_id;
    std::string commit_id;
    std::int64_t timestamp = 0;
    std::vector<FileChange> files;
    /// Filled by extraction, in file order then textual order.
    std::vector<MethodRecord> added_methods;
};

struct CorpusDiagnostic {
    std::size_t line = 0;  // 1-based line of the corpus stream; 0 when not tied to a line
    std::string message;
};

struct ParsedCorpus {
    std::vector<CommitRecord> commits;  // ascending timestamp, stable for ties
    std::vector<CorpusDiagnostic> diagnostics;
};

/// Parses the JSONL corpus format. Malformed records are skipped and
/// reported; the stream itself must be readable.
ParsedCorpus parse_corpus(std::istream& input);

/// Throws std::runtime_error if the file cannot be opened.
ParsedCorpus parse_corpus_file(const std::filesystem::path& path);

/// Serializes commits back to the JSONL corpus format (one object per line).
void write_corpus(std::ostream& out, const std::vector<CommitRecord>& commits);

struct Callable {
    std::string name;
    std::string signature;    // name(T1,T2) with generics erased
    std::string source_text;  // annotations, modifiers, header and body
    int line_count = 0;
    std::size_t offset = 0;   // byte offset of the declaration in the source
};

struct ExtractionResult {
    std::vector<Callable> callables;  // textual order
    std::vector<std::string> diagnostics;
};

/// Tolerant extraction of every method and constructor that has a body, at
/// any nesting depth. Not a full Java grammar: see README for the heuristics.
ExtractionResult extract_callables(std::string_view source);

/// Callables of `after_source` whose signature is absent from `before_source`.
/// Method ids and repo/commit provenance are left for the caller to fill.
std::vector<MethodRecord> added_methods(const FileChange& change);

/// Runs added_methods over every file of every commit and assigns dense
/// method ids in corpus order, starting at `first_id`.
void extract_added_methods(std::vector<CommitRecord>& commits, std::uint64_t first_id = 0);

inline constexpr std::size_t kMinAddedMethods = 2;
inline constexpr std::size_t kMaxAddedMethods = 10;

/// Keeps commits adding between 2 and 10 methods (inclusive), in order.
std::vector<CommitRecord> filter_commits(std::vector<CommitRecord> commits);

/// Parse + extract + filter.
std::vector<CommitRecord> mine_commits(std::vector<CommitRecord> commits);

/// Stable 64-bit content fingerprint of a commit list, hex encoded.
std::string corpus_fingerprint(const std::vector<CommitRecord>& commits);

/// FNV-1a over raw bytes. Used for fingerprints only.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace nextmethod
