#pragma once

#include "nextmethod/model.hpp"
#include "nextmethod/recommender.hpp"
#include "nextmethod/tuning.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nextmethod {

class SessionNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownRecommendation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Verdict { useful, not_useful, copied, deleted };

std::string to_string(Verdict verdict);
/// Accepts useful, not-useful, copied, deleted.
Verdict parse_verdict(std::string_view text);

/// Append-only JSONL feedback log. Appends are serialized and flushed.
class FeedbackJournal {
public:
    explicit FeedbackJournal(std::filesystem::path path);

    void append(const std::string& json_line);
    std::size_t size() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::size_t entries_ = 0;
};

struct IssuedRecommendation {
    std::string id;
    Sensitivity level = Sensitivity::medium;
    Recommendation recommendation;
};

struct BufferResult {
    std::vector<IssuedRecommendation> recommendations;
    std::vector<MatchedMethod> matched;  // at the session's current level, by first appearance
    std::size_t new_methods = 0;         // callables first seen in this buffer
};

struct FeedbackAck {
    std::size_t journal_entries = 0;
    std::optional<std::string> snippet;  // copied verdicts only
};

/// Stable id of a recommendation for one sensitivity level.
std::string recommendation_id(Sensitivity level, const AssociationRule& rule);

/// Session-keeping recommendation service over one model per sensitivity
/// level. Models are shared read-only; each session has its own lock.
class Service {
public:
    /// Throws std::invalid_argument when no model is given.
    Service(std::map<Sensitivity, std::shared_ptr<const Model>> presets, std::filesystem::path journal_path);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Default level is medium, or the first loaded level if medium is absent.
    std::string create_session(std::optional<Sensitivity> level = std::nullopt);
    BufferResult submit_buffer(const std::string& session_id, const std::string& editor_text);
    /// Returns false when the level was already active.
    bool set_sensitivity(const std::string& session_id, Sensitivity level);
    Sensitivity sensitivity(const std::string& session_id) const;
    FeedbackAck record_feedback(const std::string& session_id, const std::string& recommendation_id, Verdict verdict);

    std::size_t session_count() const;
    std::vector<Sensitivity> levels() const;
    const Model& model(Sensitivity level) const;
    const FeedbackJournal& journal() const { return journal_; }

private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& id) const;
    BufferResult respond(Session& s) const;

    std::map<Sensitivity, std::shared_ptr<const Model>> presets_;
    FeedbackJournal journal_;
    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Journal location: $NEXTMETHOD_DATA_DIR/feedback.jsonl, or
/// ./nextmethod-data/feedback.jsonl when the variable is unset.
std::filesystem::path default_journal_path();

}  // namespace nextmethod
