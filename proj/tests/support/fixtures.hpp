#pragma once

#include "nextmethod/model.hpp"
#include "nextmethod/rules.hpp"

#include <string>
#include <vector>

namespace nextmethod::testing {

/// Lowercase letters only, so the identifier is a single term.
inline std::string letters(std::size_t i) {
    std::string s;
    do {
        s += static_cast<char>('a' + i % 26);
        i /= 26;
    } while (i > 0);
    return s;
}

/// A method whose vocabulary is private to `i` apart from the `void` keyword.
inline std::string distinct_method(std::size_t i, int extra_lines = 0) {
    std::string body = "void zq" + letters(i) + "() {\n    wq" + letters(i) + "();\n";
    for (int l = 0; l < extra_lines; ++l) body += "    vq" + letters(i) + "(" + std::to_string(l) + ");\n";
    return body + "}";
}

inline AssociationRule rule(std::vector<std::uint32_t> lhs, std::uint32_t rhs, double confidence, double support = 0.1) {
    AssociationRule r;
    for (auto c : lhs) r.lhs.push_back(ClusterId{c});
    normalize(r.lhs);
    r.rhs = ClusterId{rhs};
    r.confidence = confidence;
    r.support = support;
    r.lhs_count = 100;
    r.count = static_cast<std::size_t>(confidence * 100 + 0.5);
    return r;
}

/// Model with `n` singleton clusters C0..C(n-1) whose centroids are
/// distinct_method(i), plus the given rules. Rules are used in the given order
/// after sorting by the miner's ordering.
inline Model synthetic_model(std::size_t n, std::vector<AssociationRule> rules, double gamma = 0.9,
                             std::size_t max_lhs = 9, const std::vector<int>& line_counts = {}) {
    std::vector<Cluster> clusters;
    std::vector<CentroidSource> centroids;
    for (std::size_t i = 0; i < n; ++i) {
        const MethodId m{i};
        clusters.push_back(Cluster{ClusterId{static_cast<std::uint32_t>(i)}, {m}, m});
        CentroidSource src;
        src.method_id = m;
        src.signature = "zq" + letters(i) + "()";
        const int extra = i < line_counts.size() ? line_counts[i] - 2 : 0;
        src.source_text = distinct_method(i, extra);
        src.line_count = i < line_counts.size() ? line_counts[i] : 2;
        src.repo_id = "github.com/example/fixture";
        src.commit_id = "c" + letters(i);
        src.path = "src/Fixture.java";
        centroids.push_back(src);
    }
    std::sort(rules.begin(), rules.end(), rule_order);
    ModelConfig cfg;
    cfg.lambda = gamma;
    cfg.gamma = gamma;
    cfg.max_lhs = max_lhs;
    return Model(cfg, std::move(clusters), std::move(centroids), std::move(rules));
}

}  // namespace nextmethod::testing
