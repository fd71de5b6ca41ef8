#include "nextmethod/service.hpp"

#include "nextmethod/corpus.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>

namespace nextmethod {

using json = nlohmann::json;

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::useful: return "useful";
        case Verdict::not_useful: return "not-useful";
        case Verdict::copied: return "copied";
        case Verdict::deleted: return "deleted";
    }
    return "?";
}

Verdict parse_verdict(std::string_view text) {
    if (text == "useful") return Verdict::useful;
    if (text == "not-useful") return Verdict::not_useful;
    if (text == "copied") return Verdict::copied;
    if (text == "deleted") return Verdict::deleted;
    throw std::invalid_argument("unknown verdict '" + std::string(text) +
                                "' (expected useful, not-useful, copied or deleted)");
}

FeedbackJournal::FeedbackJournal(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++entries_;
}

void FeedbackJournal::append(const std::string& json_line) {
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open feedback journal " + path_.string());
    out << json_line << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write feedback journal " + path_.string());
    ++entries_;
}

std::size_t FeedbackJournal::size() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::string recommendation_id(Sensitivity level, const AssociationRule& rule) {
    std::string key = to_string(level) + ":";
    for (ClusterId c : rule.lhs) key += std::to_string(c.value) + ",";
    key += "=>" + std::to_string(rule.rhs.value);
    char buf[24];
    std::snprintf(buf, sizeof buf, "r%016llx", static_cast<unsigned long long>(fnv1a(key)));
    return buf;
}

std::filesystem::path default_journal_path() {
    const char* dir = std::getenv("NEXTMETHOD_DATA_DIR");
    std::filesystem::path base = (dir != nullptr && *dir != '\0') ? dir : "nextmethod-data";
    return base / "feedback.jsonl";
}

struct Service::Session {
    std::mutex mu;
    Sensitivity level = Sensitivity::medium;
    std::map<std::string, std::string> seen;  // signature -> latest source
    std::vector<std::string> order;           // signatures by first appearance
    std::map<Sensitivity, std::map<std::string, ClusterId>> matched;
    std::optional<std::uint64_t> last_fingerprint;
    std::optional<Sensitivity> last_level;
    BufferResult last_result;
    std::map<std::string, IssuedRecommendation> issued;
};

Service::Service(std::map<Sensitivity, std::shared_ptr<const Model>> presets, std::filesystem::path journal_path)
    : presets_(std::move(presets)), journal_(std::move(journal_path)) {
    std::erase_if(presets_, [](const auto& kv) { return kv.second == nullptr; });
    if (presets_.empty()) throw std::invalid_argument("service: at least one preset model is required");
}

Service::~Service() = default;

std::vector<Sensitivity> Service::levels() const {
    std::vector<Sensitivity> out;
    for (const auto& [level, model] : presets_) out.push_back(level);
    return out;
}

const Model& Service::model(Sensitivity level) const {
    auto it = presets_.find(level);
    if (it == presets_.end()) throw std::invalid_argument("no model loaded for sensitivity '" + to_string(level) + "'");
    return *it->second;
}

std::string Service::create_session(std::optional<Sensitivity> level) {
    Sensitivity chosen = presets_.contains(Sensitivity::medium) ? Sensitivity::medium : presets_.begin()->first;
    if (level) {
        model(*level);
        chosen = *level;
    }
    auto session = std::make_shared<Session>();
    session->level = chosen;

    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::unique_lock lock(sessions_mu_);
    std::string id;
    do {
        char buf[40];
        std::snprintf(buf, sizeof buf, "s%016llx%016llx", static_cast<unsigned long long>(rng()),
                      static_cast<unsigned long long>(rng()));
        id = buf;
    } while (sessions_.contains(id));
    sessions_.emplace(id, std::move(session));
    return id;
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionNotFound("unknown session '" + id + "'");
    return it->second;
}

std::size_t Service::session_count() const {
    std::shared_lock lock(sessions_mu_);
    return sessions_.size();
}

BufferResult Service::submit_buffer(const std::string& session_id, const std::string& editor_text) {
    auto session = find(session_id);
    Session& s = *session;
    std::lock_guard lock(s.mu);

    const std::uint64_t fingerprint = fnv1a(editor_text);
    if (s.last_fingerprint == fingerprint && s.last_level == s.level) return s.last_result;

    std::size_t new_methods = 0;
    for (const auto& callable : extract_callables(editor_text).callables) {
        auto [it, inserted] = s.seen.try_emplace(callable.signature, callable.source_text);
        if (inserted) {
            ++new_methods;
            s.order.push_back(callable.signature);
        } else if (it->second != callable.source_text) {
            it->second = callable.source_text;
        } else {
            continue;
        }
        // A method joins the matched set of every level it can be assigned
        // at; once matched it stays, even if later edits move it elsewhere.
        const TermVector terms = method_terms(callable.source_text);
        for (const auto& [level, model] : presets_) {
            auto& matched = s.matched[level];
            if (matched.contains(callable.signature)) continue;
            if (auto m = assign_cluster(terms, *model, model->config().gamma))
                matched.emplace(callable.signature, m->cluster);
        }
    }

    BufferResult result = respond(s);
    result.new_methods = new_methods;
    s.last_fingerprint = fingerprint;
    s.last_level = s.level;
    s.last_result = result;
    // Identical resubmissions report no new methods, so the cached copy does too.
    s.last_result.new_methods = 0;
    return result;
}

BufferResult Service::respond(Session& s) const {
    BufferResult out;
    const auto& matched = s.matched[s.level];
    for (const auto& sig : s.order) {
        auto it = matched.find(sig);
        if (it != matched.end()) out.matched.push_back(MatchedMethod{sig, it->second});
    }
    for (auto& rec : recommend(out.matched, model(s.level))) {
        IssuedRecommendation issued{recommendation_id(s.level, rec.rule), s.level, std::move(rec)};
        s.issued[issued.id] = issued;
        out.recommendations.push_back(std::move(issued));
    }
    return out;
}

bool Service::set_sensitivity(const std::string& session_id, Sensitivity level) {
    model(level);
    auto session = find(session_id);
    std::lock_guard lock(session->mu);
    if (session->level == level) return false;
    session->level = level;
    return true;
}

Sensitivity Service::sensitivity(const std::string& session_id) const {
    auto session = find(session_id);
    std::lock_guard lock(session->mu);
    return session->level;
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

}  // namespace

FeedbackAck Service::record_feedback(const std::string& session_id, const std::string& rec_id, Verdict verdict) {
    auto session = find(session_id);
    IssuedRecommendation issued;
    {
        std::lock_guard lock(session->mu);
        auto it = session->issued.find(rec_id);
        if (it == session->issued.end())
            throw UnknownRecommendation("recommendation '" + rec_id + "' was not issued in this session");
        issued = it->second;
    }
    const auto& rule = issued.recommendation.rule;
    json lhs = json::array();
    for (ClusterId c : rule.lhs) lhs.push_back(c.value);
    const json entry{{"timestamp", utc_now()},
                     {"session_id", session_id},
                     {"recommendation_id", rec_id},
                     {"level", to_string(issued.level)},
                     {"lhs", lhs},
                     {"rhs", rule.rhs.value},
                     {"verdict", to_string(verdict)}};
    journal_.append(entry.dump());

    FeedbackAck ack;
    ack.journal_entries = journal_.size();
    if (verdict == Verdict::copied)
        ack.snippet = provenance_comment(issued.recommendation) + "\n" + issued.recommendation.code;
    return ack;
}

}  // namespace nextmethod
