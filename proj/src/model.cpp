#include "nextmethod/model.hpp"

#include "nextmethod/corpus.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

namespace nextmethod {

using nlohmann::json;

ClusterIndex::ClusterIndex(std::vector<Cluster> clusters, std::vector<CentroidSource> centroids)
    : clusters_(std::move(clusters)), centroids_(std::move(centroids)) {
    if (centroids_.size() != clusters_.size())
        throw ModelError("model has " + std::to_string(clusters_.size()) + " clusters but " +
                         std::to_string(centroids_.size()) + " centroid sources");
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        const Cluster& c = clusters_[i];
        if (c.cluster_id.value != i)
            throw ModelError("cluster ids must be dense; found C" + std::to_string(c.cluster_id.value) +
                             " at position " + std::to_string(i));
        if (c.members.empty()) throw ModelError("cluster C" + std::to_string(i) + " has no members");
        if (!std::binary_search(c.members.begin(), c.members.end(), c.centroid))
            throw ModelError("centroid of cluster C" + std::to_string(i) + " is not one of its members");
        if (centroids_[i].method_id != c.centroid)
            throw ModelError("centroid source of cluster C" + std::to_string(i) + " does not match its centroid");
    }
    centroid_terms_.reserve(centroids_.size());
    centroid_tokens_.reserve(centroids_.size());
    for (std::size_t i = 0; i < centroids_.size(); ++i) {
        centroid_tokens_.push_back(tokenize(centroids_[i].source_text));
        centroid_terms_.push_back(term_vector(centroid_tokens_.back()));
        for (const auto& [term, count] : centroid_terms_.back().terms())
            centroid_postings_[term].push_back(ClusterId{static_cast<std::uint32_t>(i)});
    }
}

std::vector<ClusterId> ClusterIndex::centroid_candidates(const TermVector& terms) const {
    std::vector<ClusterId> out;
    for (const auto& [term, count] : terms.terms()) {
        auto it = centroid_postings_.find(term);
        if (it != centroid_postings_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Model::Model(ModelConfig config, std::vector<Cluster> clusters, std::vector<CentroidSource> centroids,
             std::vector<AssociationRule> rules)
    : Model(std::move(config), std::make_shared<const ClusterIndex>(std::move(clusters), std::move(centroids)),
            std::move(rules)) {}

Model::Model(ModelConfig config, std::shared_ptr<const ClusterIndex> index, std::vector<AssociationRule> rules)
    : config_(std::move(config)), index_(std::move(index)), rules_(std::move(rules)) {
    if (!index_) throw ModelError("model has no cluster index");
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        const auto& rule = rules_[r];
        auto check = [&](ClusterId id) {
            if (!has_cluster(id))
                throw ModelError("rule " + std::to_string(r) + " references unknown cluster C" +
                                 std::to_string(id.value));
        };
        if (rule.lhs.empty()) throw ModelError("rule " + std::to_string(r) + " has an empty LHS");
        for (ClusterId id : rule.lhs) check(id);
        check(rule.rhs);
        if (contains(rule.lhs, rule.rhs)) throw ModelError("rule " + std::to_string(r) + " has its RHS in its LHS");
        rules_by_lhs_[rule.lhs].push_back(r);
    }
}

const std::vector<std::size_t>* Model::rules_with_lhs(const ItemSet& lhs) const {
    auto it = rules_by_lhs_.find(lhs);
    return it == rules_by_lhs_.end() ? nullptr : &it->second;
}

ClusteredTraining cluster_training(const std::vector<CommitRecord>& commits, const SimilarityGraph& graph,
                                   double lambda, const ClusterOptions& options) {
    ClusteredTraining out;
    out.lambda = lambda;
    out.edge_threshold = options.edge_threshold;
    out.commits = commits.size();

    std::unordered_map<MethodId, const MethodRecord*> by_id;
    for (const auto& c : commits)
        for (const auto& m : c.added_methods) by_id.emplace(m.method_id, &m);

    auto clusters = cluster_graph(graph);
    if (options.drop_singletons) {
        std::erase_if(clusters, [](const Cluster& c) { return c.members.size() < 2; });
        for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].cluster_id = ClusterId{static_cast<std::uint32_t>(i)};
    }
    std::vector<CentroidSource> centroids;
    for (const auto& c : clusters) {
        for (MethodId m : c.members) out.assignment.emplace(m, c.cluster_id);
        const MethodRecord* src = by_id.at(c.centroid);
        centroids.push_back(CentroidSource{src->method_id, src->signature, src->source_text, src->repo_id,
                                           src->commit_id, src->path, src->line_count});
    }
    out.index = std::make_shared<const ClusterIndex>(std::move(clusters), std::move(centroids));
    out.transactions = build_transactions(commits, out.assignment);
    return out;
}

ClusteredTraining cluster_training(const std::vector<CommitRecord>& commits, double lambda,
                                   const ClusterOptions& options) {
    std::vector<MethodRecord> methods;
    for (const auto& c : commits) methods.insert(methods.end(), c.added_methods.begin(), c.added_methods.end());
    const auto graph = build_graph(std::span<const MethodRecord>(methods), lambda, options.edge_threshold, options.workers);
    return cluster_training(commits, graph, lambda, options);
}

Model assemble_model(const ClusteredTraining& clustered, const ModelConfig& config) {
    ModelConfig cfg = config;
    cfg.lambda = clustered.lambda;
    cfg.edge_threshold = clustered.edge_threshold;
    cfg.training_commits = clustered.commits;
    cfg.training_transactions = clustered.transactions.size();
    std::vector<AssociationRule> rules;
    if (!clustered.transactions.empty()) {
        rules = mine_rules(clustered.transactions, MiningParams{cfg.min_support, cfg.min_confidence, cfg.max_lhs});
    }
    return Model(std::move(cfg), clustered.index, std::move(rules));
}

Model build_model(const std::vector<CommitRecord>& training_commits, ModelConfig config, unsigned workers) {
    if (config.corpus_fingerprint.empty()) config.corpus_fingerprint = corpus_fingerprint(training_commits);
    const auto clustered = cluster_training(
        training_commits, config.lambda, ClusterOptions{config.edge_threshold, config.drop_singletons, workers});
    return assemble_model(clustered, config);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr const char* kFormatName = "nextmethod-model";

json config_to_json(const ModelConfig& c) {
    return json{{"lambda", c.lambda},
                {"gamma", c.gamma},
                {"min_support", c.min_support},
                {"min_confidence", c.min_confidence},
                {"max_lhs", c.max_lhs},
                {"edge_threshold", c.edge_threshold == EdgeThreshold::inclusive ? "inclusive" : "strict"},
                {"drop_singletons", c.drop_singletons},
                {"corpus_fingerprint", c.corpus_fingerprint},
                {"training_commits", c.training_commits},
                {"training_transactions", c.training_transactions}};
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ModelError(where + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ModelError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
    }
}

ModelConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ModelError("config: not an object");
    ModelConfig c;
    c.lambda = required<double>(j, "lambda", "config");
    c.gamma = required<double>(j, "gamma", "config");
    c.min_support = required<double>(j, "min_support", "config");
    c.min_confidence = required<double>(j, "min_confidence", "config");
    c.max_lhs = required<std::size_t>(j, "max_lhs", "config");
    const auto mode = required<std::string>(j, "edge_threshold", "config");
    if (mode != "inclusive" && mode != "strict") throw ModelError("config: unknown edge_threshold '" + mode + "'");
    c.edge_threshold = mode == "inclusive" ? EdgeThreshold::inclusive : EdgeThreshold::strict;
    c.drop_singletons = required<bool>(j, "drop_singletons", "config");
    c.corpus_fingerprint = required<std::string>(j, "corpus_fingerprint", "config");
    c.training_commits = required<std::size_t>(j, "training_commits", "config");
    c.training_transactions = required<std::size_t>(j, "training_transactions", "config");
    return c;
}

}  // namespace

void save_model(const Model& model, std::ostream& out) {
    json clusters = json::array();
    for (const auto& c : model.clusters()) {
        json members = json::array();
        for (MethodId m : c.members) members.push_back(m.value);
        clusters.push_back({{"id", c.cluster_id.value}, {"centroid", c.centroid.value}, {"members", members}});
    }
    json centroids = json::array();
    for (const auto& c : model.clusters()) {
        const auto& src = model.centroid(c.cluster_id);
        centroids.push_back({{"cluster", c.cluster_id.value},
                             {"method", src.method_id.value},
                             {"signature", src.signature},
                             {"source", src.source_text},
                             {"line_count", src.line_count},
                             {"repo", src.repo_id},
                             {"commit", src.commit_id},
                             {"path", src.path}});
    }
    json rules = json::array();
    for (const auto& r : model.rules()) {
        json lhs = json::array();
        for (ClusterId c : r.lhs) lhs.push_back(c.value);
        rules.push_back({{"lhs", lhs},
                         {"rhs", r.rhs.value},
                         {"support", r.support},
                         {"confidence", r.confidence},
                         {"count", r.count},
                         {"lhs_count", r.lhs_count}});
    }
    json doc{{"format", kFormatName},
             {"version", kModelFormatVersion},
             {"config", config_to_json(model.config())},
             {"clusters", clusters},
             {"centroids", centroids},
             {"rules", rules}};
    out << doc.dump() << '\n';
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelError("cannot write model file: " + path.string());
    save_model(model, out);
    if (!out) throw ModelError("error while writing model file: " + path.string());
}

Model load_model(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("model file is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ModelError("model file: top level is not an object");
    if (required<std::string>(doc, "format", "header") != kFormatName)
        throw ModelError("model file: unexpected format tag");
    const int version = required<int>(doc, "version", "header");
    if (version != kModelFormatVersion)
        throw ModelError("model file: unsupported format version " + std::to_string(version) + " (expected " +
                         std::to_string(kModelFormatVersion) + ")");
    auto config = config_from_json(required<json>(doc, "config", "header"));

    std::vector<Cluster> clusters;
    for (const auto& jc : required<json>(doc, "clusters", "header")) {
        Cluster c;
        c.cluster_id = ClusterId{required<std::uint32_t>(jc, "id", "cluster")};
        c.centroid = MethodId{required<std::uint64_t>(jc, "centroid", "cluster")};
        for (auto m : required<std::vector<std::uint64_t>>(jc, "members", "cluster")) c.members.push_back(MethodId{m});
        if (!std::is_sorted(c.members.begin(), c.members.end()))
            throw ModelError("cluster C" + std::to_string(c.cluster_id.value) + ": members are not sorted");
        clusters.push_back(std::move(c));
    }

    std::vector<CentroidSource> centroids(clusters.size());
    std::vector<bool> seen(clusters.size(), false);
    for (const auto& jc : required<json>(doc, "centroids", "header")) {
        const auto cluster = required<std::uint32_t>(jc, "cluster", "centroid");
        if (cluster >= clusters.size())
            throw ModelError("centroid source references unknown cluster C" + std::to_string(cluster));
        if (seen[cluster]) throw ModelError("duplicate centroid source for cluster C" + std::to_string(cluster));
        seen[cluster] = true;
        auto& src = centroids[cluster];
        src.method_id = MethodId{required<std::uint64_t>(jc, "method", "centroid")};
        src.signature = required<std::string>(jc, "signature", "centroid");
        src.source_text = required<std::string>(jc, "source", "centroid");
        src.line_count = required<int>(jc, "line_count", "centroid");
        src.repo_id = required<std::string>(jc, "repo", "centroid");
        src.commit_id = required<std::string>(jc, "commit", "centroid");
        src.path = required<std::string>(jc, "path", "centroid");
    }
    if (auto missing = std::find(seen.begin(), seen.end(), false); missing != seen.end())
        throw ModelError("missing centroid source for cluster C" + std::to_string(missing - seen.begin()));

    std::vector<AssociationRule> rules;
    for (const auto& jr : required<json>(doc, "rules", "header")) {
        AssociationRule r;
        for (auto c : required<std::vector<std::uint32_t>>(jr, "lhs", "rule")) r.lhs.push_back(ClusterId{c});
        normalize(r.lhs);
        r.rhs = ClusterId{required<std::uint32_t>(jr, "rhs", "rule")};
        r.support = required<double>(jr, "support", "rule");
        r.confidence = required<double>(jr, "confidence", "rule");
        r.count = required<std::size_t>(jr, "count", "rule");
        r.lhs_count = required<std::size_t>(jr, "lhs_count", "rule");
        rules.push_back(std::move(r));
    }
    return Model(std::move(config), std::move(clusters), std::move(centroids), std::move(rules));
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file: " + path.string());
    try {
        return load_model(in);
    } catch (const ModelError& e) {
        throw ModelError(path.string() + ": " + e.what());
    }
}

}  // namespace nextmethod
