#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nextmethod {

/// Lexical tokens of a method, comments and whitespace excluded.
using TokenSequence = std::vector<std::string>;

TokenSequence tokenize(std::string_view source_text);

/// Case-sensitive term-frequency vector. Terms are kept sorted so that two
/// vectors can be merged in linear time.
class TermVector {
public:
    TermVector() = default;
    explicit TermVector(std::vector<std::pair<std::string, std::uint32_t>> counts);

    const std::vector<std::pair<std::string, std::uint32_t>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    /// Count of `term`, 0 if absent.
    std::uint32_t count(std::string_view term) const;
    /// Sum of squared counts.
    std::uint64_t squared_norm() const { return squared_norm_; }

    bool operator==(const TermVector&) const = default;

private:
    std::vector<std::pair<std::string, std::uint32_t>> terms_;
    std::uint64_t squared_norm_ = 0;
};

/// Splits an identifier at camelCase, underscore and digit boundaries,
/// preserving case: `getHTTPResponse2` -> get, HTTP, Response, 2.
std::vector<std::string> split_identifier(std::string_view identifier);

/// Keywords, identifier sub-terms and literal values become terms;
/// operators and separators do not.
TermVector term_vector(const TokenSequence& seq);

TermVector method_terms(std::string_view source_text);

/// Cosine of two integer count vectors, given their dot product and squared
/// norms. Both similarity() and the graph builder go through this so that the
/// two paths round identically.
double cosine_from_counts(std::uint64_t dot, std::uint64_t squared_norm_a, std::uint64_t squared_norm_b);

/// Cosine similarity of two tf vectors in [0, 1]; 0 if either is empty.
double similarity(const TermVector& a, const TermVector& b);

struct TokenDistance {
    std::size_t count = 0;
    int pct = 0;  // 100 * count / |actual|, rounded to nearest

    bool operator==(const TokenDistance&) const = default;
};

/// Unit-cost Levenshtein distance over whole tokens.
std::size_t edit_distance(const TokenSequence& a, const TokenSequence& b);

/// Throws std::invalid_argument if `actual` is empty.
TokenDistance token_distance(const TokenSequence& actual, const TokenSequence& recommended);

}  // namespace nextmethod
