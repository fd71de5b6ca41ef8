#include "nextmethod/clustering.hpp"
#include "nextmethod/corpus.hpp"

#include <algorithm>
#include <tuple>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <unordered_map>

namespace nextmethod {

std::vector<std::vector<std::size_t>> SimilarityGraph::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

namespace {

struct Posting {
    std::uint32_t node;
    std::uint32_t count;
};

struct InternedVector {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;  // (term id, count)
    std::uint64_t squared_norm = 0;
};

void score_rows(std::size_t begin, std::size_t end, std::size_t stride, const std::vector<InternedVector>& vecs,
                const std::vector<std::vector<Posting>>& postings, double lambda, EdgeThreshold mode,
                std::vector<Edge>& out) {
    std::vector<std::uint64_t> dots(vecs.size(), 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t u = begin; u < end; u += stride) {
        touched.clear();
        for (const auto& [term, count] : vecs[u].terms) {
            for (const auto& [v, other] : postings[term]) {
                if (v <= u) continue;
                if (dots[v] == 0) touched.push_back(v);
                dots[v] += static_cast<std::uint64_t>(count) * other;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t v : touched) {
            const double w = cosine_from_counts(dots[v], vecs[u].squared_norm, vecs[v].squared_norm);
            if (passes_threshold(w, lambda, mode)) out.push_back(Edge{u, v, w});
            dots[v] = 0;
        }
    }
}

}  // namespace

SimilarityGraph build_graph(std::span<const MethodId> ids, std::span<const TermVector> vectors, double lambda,
                            EdgeThreshold mode, unsigned workers) {
    if (ids.size() != vectors.size()) throw std::invalid_argument("build_graph: ids and vectors differ in length");
    SimilarityGraph graph;
    graph.nodes.assign(ids.begin(), ids.end());
    const std::size_t n = ids.size();

    // Zero-similarity pairs only become edges when the threshold admits 0.
    if (passes_threshold(0.0, lambda, mode)) {
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) graph.edges.push_back(Edge{u, v, similarity(vectors[u], vectors[v])});
        return graph;
    }

    std::unordered_map<std::string_view, std::uint32_t> dictionary;
    std::vector<InternedVector> vecs(n);
    std::vector<std::vector<Posting>> postings;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [term, count] : vectors[i].terms()) {
            auto [it, inserted] = dictionary.try_emplace(term, static_cast<std::uint32_t>(dictionary.size()));
            if (inserted) postings.emplace_back();
            vecs[i].terms.emplace_back(it->second, count);
            postings[it->second].push_back(Posting{static_cast<std::uint32_t>(i), count});
        }
        vecs[i].squared_norm = vectors[i].squared_norm();
    }

    workers = std::max(1u, workers);
    if (workers == 1 || n < 64) {
        score_rows(0, n, 1, vecs, postings, lambda, mode, graph.edges);
    } else {
        std::vector<std::vector<Edge>> partial(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] { score_rows(w, n, workers, vecs, postings, lambda, mode, partial[w]); });
            }
        }
        for (auto& p : partial) graph.edges.insert(graph.edges.end(), p.begin(), p.end());
    }
    std::sort(graph.edges.begin(), graph.edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    return graph;
}

SimilarityGraph build_graph(std::span<const MethodRecord> methods, double lambda, EdgeThreshold mode,
                            unsigned workers) {
    std::vector<MethodId> ids;
    std::vector<TermVector> vectors;
    ids.reserve(methods.size());
    vectors.reserve(methods.size());
    for (const auto& m : methods) {
        ids.push_back(m.method_id);
        vectors.push_back(method_terms(m.source_text));
    }
    return build_graph(ids, vectors, lambda, mode, workers);
}

SimilarityGraph graph_from_matrix(const std::vector<std::vector<double>>& similarity, double lambda,
                                  EdgeThreshold mode) {
    SimilarityGraph graph;
    const std::size_t n = similarity.size();
    for (std::size_t i = 0; i < n; ++i) graph.nodes.push_back(MethodId{i});
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (passes_threshold(similarity[u][v], lambda, mode)) graph.edges.push_back(Edge{u, v, similarity[u][v]});
        }
    }
    return graph;
}

SimilarityGraph prune_graph(const SimilarityGraph& graph, double lambda, EdgeThreshold mode) {
    SimilarityGraph pruned;
    pruned.nodes = graph.nodes;
    for (const auto& e : graph.edges) {
        if (passes_threshold(e.weight, lambda, mode)) pruned.edges.push_back(e);
    }
    return pruned;
}

std::vector<Cluster> components(const SimilarityGraph& graph) {
    const std::size_t n = graph.nodes.size();
    const auto adj = graph.adjacency();
    std::vector<std::size_t> label(n, n);
    std::vector<std::vector<MethodId>> groups;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != n) continue;
        const std::size_t g = groups.size();
        groups.emplace_back();
        label[s] = g;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            groups[g].push_back(graph.nodes[u]);
            for (std::size_t v : adj[u]) {
                if (label[v] == n) {
                    label[v] = g;
                    stack.push_back(v);
                }
            }
        }
    }
    for (auto& members : groups) std::sort(members.begin(), members.end());
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<Cluster> clusters;
    clusters.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        Cluster c;
        c.cluster_id = ClusterId{static_cast<std::uint32_t>(i)};
        c.centroid = groups[i].front();
        c.members = std::move(groups[i]);
        clusters.push_back(std::move(c));
    }
    return clusters;
}

MethodId elect_centroid(const Cluster& cluster, const SimilarityGraph& graph) {
    if (cluster.members.empty()) throw std::invalid_argument("elect_centroid: empty cluster");
    std::unordered_map<MethodId, std::size_t> index;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) index.emplace(graph.nodes[i], i);
    std::unordered_map<std::size_t, std::size_t> degree;
    for (MethodId m : cluster.members) degree[index.at(m)] = 0;
    for (const auto& e : graph.edges) {
        auto du = degree.find(e.u);
        auto dv = degree.find(e.v);
        if (du != degree.end() && dv != degree.end()) {
            ++du->second;
            ++dv->second;
        }
    }
    MethodId best = cluster.members.front();
    std::size_t best_degree = 0;
    bool first = true;
    for (MethodId m : cluster.members) {
        const std::size_t d = degree.at(index.at(m));
        if (first || d > best_degree || (d == best_degree && m < best)) {
            best = m;
            best_degree = d;
            first = false;
        }
    }
    return best;
}

std::vector<Cluster> cluster_graph(const SimilarityGraph& graph) {
    auto clusters = components(graph);
    if (clusters.empty()) return clusters;

    // One pass over the edges instead of one per cluster.
    std::vector<std::size_t> degree(graph.nodes.size(), 0);
    for (const auto& e : graph.edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    std::unordered_map<MethodId, std::size_t> index;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) index.emplace(graph.nodes[i], i);
    for (auto& c : clusters) {
        // Every edge of a node stays inside its component, so the global degree
        // equals the induced-subgraph degree.
        MethodId best = c.members.front();
        std::size_t best_degree = degree[index.at(best)];
        for (MethodId m : c.members) {
            const std::size_t d = degree[index.at(m)];
            if (d > best_degree) {
                best = m;
                best_degree = d;
            }
        }
        c.centroid = best;
    }
    return clusters;
}

}  // namespace nextmethod
