#pragma once

#include "nextmethod/clustering.hpp"
#include "nextmethod/corpus.hpp"
#include "nextmethod/ids.hpp"
#include "nextmethod/rules.hpp"
#include "nextmethod/similarity.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nextmethod {

inline constexpr int kModelFormatVersion = 1;

struct ModelConfig {
    double lambda = 0.90;
    double gamma = 0.90;  // live assignment threshold; equals lambda unless overridden
    double min_support = 8.0e-6;
    double min_confidence = 0.5;
    std::size_t max_lhs = 2;
    EdgeThreshold edge_threshold = EdgeThreshold::inclusive;
    bool drop_singletons = false;
    std::string corpus_fingerprint;
    std::size_t training_commits = 0;
    std::size_t training_transactions = 0;
};

/// Source and provenance of a cluster's representative method.
struct CentroidSource {
    MethodId method_id;
    std::string signature;
    std::string source_text;
    std::string repo_id;
    std::string commit_id;
    std::string path;
    int line_count = 0;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Clusters, their centroid sources and the lookup structures derived from
/// them. Shared by every model built from the same clustering.
class ClusterIndex {
public:
    /// Throws ModelError on inconsistent clusters or centroid sources.
    ClusterIndex(std::vector<Cluster> clusters, std::vector<CentroidSource> centroids);

    const std::vector<Cluster>& clusters() const { return clusters_; }
    std::size_t size() const { return clusters_.size(); }
    bool has_cluster(ClusterId id) const { return id.value < clusters_.size(); }
    const CentroidSource& centroid(ClusterId id) const { return centroids_.at(id.value); }
    const TermVector& centroid_terms(ClusterId id) const { return centroid_terms_.at(id.value); }
    const TokenSequence& centroid_tokens(ClusterId id) const { return centroid_tokens_.at(id.value); }

    /// Clusters whose centroid shares at least one term with `terms`, ascending.
    std::vector<ClusterId> centroid_candidates(const TermVector& terms) const;

private:
    std::vector<Cluster> clusters_;
    std::vector<CentroidSource> centroids_;
    std::vector<TermVector> centroid_terms_;
    std::vector<TokenSequence> centroid_tokens_;
    std::map<std::string, std::vector<ClusterId>, std::less<>> centroid_postings_;
};

/// Immutable recommendation model: clusters with their centroids, the mined
/// rules and the configuration that produced them. Construction validates
/// every cross reference.
class Model {
public:
    /// Throws ModelError on dangling references or inconsistent sizes.
    Model(ModelConfig config, std::vector<Cluster> clusters, std::vector<CentroidSource> centroids,
          std::vector<AssociationRule> rules);
    Model(ModelConfig config, std::shared_ptr<const ClusterIndex> index, std::vector<AssociationRule> rules);

    const ModelConfig& config() const { return config_; }
    const ClusterIndex& index() const { return *index_; }
    const std::vector<Cluster>& clusters() const { return index_->clusters(); }
    const std::vector<AssociationRule>& rules() const { return rules_; }
    const CentroidSource& centroid(ClusterId id) const { return index_->centroid(id); }
    const TermVector& centroid_terms(ClusterId id) const { return index_->centroid_terms(id); }
    const TokenSequence& centroid_tokens(ClusterId id) const { return index_->centroid_tokens(id); }
    bool has_cluster(ClusterId id) const { return index_->has_cluster(id); }

    /// Rule indices whose LHS equals `lhs` exactly.
    const std::vector<std::size_t>* rules_with_lhs(const ItemSet& lhs) const;

private:
    ModelConfig config_;
    std::shared_ptr<const ClusterIndex> index_;
    std::vector<AssociationRule> rules_;
    std::map<ItemSet, std::vector<std::size_t>> rules_by_lhs_;
};

/// Intermediate result of clustering a training set at one λ, reused when
/// mining rules with several (sup, con, max_LHS) settings.
struct ClusteredTraining {
    double lambda = 0.0;
    EdgeThreshold edge_threshold = EdgeThreshold::inclusive;
    std::shared_ptr<const ClusterIndex> index;
    ClusterAssignment assignment;
    std::vector<Transaction> transactions;
    std::size_t commits = 0;
};

struct ClusterOptions {
    EdgeThreshold edge_threshold = EdgeThreshold::inclusive;
    bool drop_singletons = false;
    unsigned workers = 1;
};

/// Clusters all added methods of the (mined, filtered) training commits.
ClusteredTraining cluster_training(const std::vector<CommitRecord>& commits, double lambda,
                                   const ClusterOptions& options = {});

/// Same, starting from an already-built graph (e.g. one pruned from a graph
/// built at a lower λ).
ClusteredTraining cluster_training(const std::vector<CommitRecord>& commits, const SimilarityGraph& graph,
                                   double lambda, const ClusterOptions& options = {});

/// Mines rules over the clustered training set; an empty transaction list
/// yields a model without rules.
Model assemble_model(const ClusteredTraining& clustered, const ModelConfig& config);

/// Cluster + mine in one step. `config.lambda` drives clustering.
Model build_model(const std::vector<CommitRecord>& training_commits, ModelConfig config, unsigned workers = 1);

void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);

/// Throws ModelError on parse errors (with byte offset), version mismatch,
/// schema violations or dangling references.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace nextmethod
