#pragma once

#include "nextmethod/ids.hpp"
#include "nextmethod/similarity.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nextmethod {

struct MethodRecord;

/// How an edge weight is compared against the pruning threshold.
enum class EdgeThreshold {
    inclusive,  // keep edges with weight >= lambda (default)
    strict,     // keep edges with weight > lambda
};

inline bool passes_threshold(double weight, double threshold, EdgeThreshold mode) {
    return mode == EdgeThreshold::inclusive ? weight >= threshold : weight > threshold;
}

struct Edge {
    std::size_t u = 0;  // node indices, u < v
    std::size_t v = 0;
    double weight = 0.0;
};

/// Undirected, λ-pruned similarity graph. Nodes are positions in `nodes`.
struct SimilarityGraph {
    std::vector<MethodId> nodes;
    std::vector<Edge> edges;  // sorted by (u, v), no self-loops, no duplicates

    std::vector<std::vector<std::size_t>> adjacency() const;
};

/// Graph over term vectors. Only pairs sharing at least one term are
/// scored (an inverted index supplies the candidates), which is lossless for
/// any positive threshold: pairs without a common term have similarity 0.
/// With a non-positive inclusive threshold every pair is an edge.
/// `workers` > 1 scores rows in parallel.
SimilarityGraph build_graph(std::span<const MethodId> ids, std::span<const TermVector> vectors, double lambda,
                            EdgeThreshold mode = EdgeThreshold::inclusive, unsigned workers = 1);

SimilarityGraph build_graph(std::span<const MethodRecord> methods, double lambda,
                            EdgeThreshold mode = EdgeThreshold::inclusive, unsigned workers = 1);

/// Graph from a dense symmetric similarity matrix (diagonal ignored). Node i
/// gets MethodId{i}.
SimilarityGraph graph_from_matrix(const std::vector<std::vector<double>>& similarity, double lambda,
                                  EdgeThreshold mode = EdgeThreshold::inclusive);

/// Keeps only the edges that still pass a (higher) threshold.
SimilarityGraph prune_graph(const SimilarityGraph& graph, double lambda, EdgeThreshold mode = EdgeThreshold::inclusive);

struct Cluster {
    ClusterId cluster_id;
    std::vector<MethodId> members;  // ascending
    MethodId centroid;
};

/// Connected components, singletons included. Clusters are numbered in
/// ascending order of their smallest member; centroids are not yet elected
/// (set to the smallest member).
std::vector<Cluster> components(const SimilarityGraph& graph);

/// Member with the highest degree in the cluster's induced subgraph; ties go
/// to the smallest method id.
MethodId elect_centroid(const Cluster& cluster, const SimilarityGraph& graph);

/// components() followed by elect_centroid() on each.
std::vector<Cluster> cluster_graph(const SimilarityGraph& graph);

}  // namespace nextmethod
