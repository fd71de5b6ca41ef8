#include "nextmethod/similarity.hpp"
#include "nextmethod/java_lexer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nextmethod {

TokenSequence tokenize(std::string_view source_text) {
    const auto lexed = lex_java(source_text);
    TokenSequence seq;
    seq.reserve(lexed.tokens.size());
    for (const auto& t : lexed.tokens) seq.emplace_back(t.text);
    return seq;
}

TermVector::TermVector(std::vector<std::pair<std::string, std::uint32_t>> counts) {
    std::map<std::string, std::uint32_t> merged;
    for (auto& [term, n] : counts) {
        if (n > 0) merged[std::move(term)] += n;
    }
    terms_.assign(merged.begin(), merged.end());
    for (const auto& [term, n] : terms_) squared_norm_ += static_cast<std::uint64_t>(n) * n;
}

std::uint32_t TermVector::count(std::string_view term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                               [](const auto& entry, std::string_view t) { return entry.first < t; });
    return it != terms_.end() && it->first == term ? it->second : 0;
}

namespace {

enum class CharClass { lower, upper, digit, other };

CharClass classify(unsigned char c) {
    if (c >= 'a' && c <= 'z') return CharClass::lower;
    if (c >= 'A' && c <= 'Z') return CharClass::upper;
    if (c >= '0' && c <= '9') return CharClass::digit;
    if (c == '_') return CharClass::other;
    // '$' and non-ASCII bytes behave like lowercase letters.
    return CharClass::lower;
}

}  // namespace

std::vector<std::string> split_identifier(std::string_view id) {
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) parts.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < id.size(); ++i) {
        const auto c = static_cast<unsigned char>(id[i]);
        const CharClass cls = classify(c);
        if (cls == CharClass::other) {
            flush();
            continue;
        }
        if (!current.empty()) {
            const CharClass prev = classify(static_cast<unsigned char>(current.back()));
            const bool next_lower = i + 1 < id.size() && classify(static_cast<unsigned char>(id[i + 1])) == CharClass::lower;
            const bool boundary = (prev == CharClass::digit) != (cls == CharClass::digit) ||
                                  (prev == CharClass::lower && cls == CharClass::upper) ||
                                  // HTTPResponse: split before the 'R' that starts a lowercase run
                                  (prev == CharClass::upper && cls == CharClass::upper && next_lower);
            if (boundary) flush();
        }
        current.push_back(static_cast<char>(c));
    }
    flush();
    return parts;
}

TermVector term_vector(const TokenSequence& seq) {
    std::vector<std::pair<std::string, std::uint32_t>> counts;
    for (const auto& tok : seq) {
        if (tok.empty()) continue;
        const auto first = static_cast<unsigned char>(tok.front());
        const bool word_like = first == '_' || first == '$' || first >= 0x80 || std::isalpha(first);
        if (word_like) {
            if (is_java_keyword(tok)) {
                counts.emplace_back(tok, 1);
            } else {
                for (auto& part : split_identifier(tok)) counts.emplace_back(std::move(part), 1);
            }
        } else if (std::isdigit(first) || first == '"' || first == '\'' ||
                   (first == '.' && tok.size() > 1 && std::isdigit(static_cast<unsigned char>(tok[1])))) {
            counts.emplace_back(tok, 1);  // literal value
        }
    }
    return TermVector(std::move(counts));
}

TermVector method_terms(std::string_view source_text) { return term_vector(tokenize(source_text)); }

double cosine_from_counts(std::uint64_t dot, std::uint64_t squared_norm_a, std::uint64_t squared_norm_b) {
    if (dot == 0 || squared_norm_a == 0 || squared_norm_b == 0) return 0.0;
    const double s = static_cast<double>(dot) /
                     std::sqrt(static_cast<double>(squared_norm_a) * static_cast<double>(squared_norm_b));
    return std::clamp(s, 0.0, 1.0);
}

double similarity(const TermVector& a, const TermVector& b) {
    std::uint64_t dot = 0;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += static_cast<std::uint64_t>(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return cosine_from_counts(dot, a.squared_norm(), b.squared_norm());
}

std::size_t edit_distance(const TokenSequence& a, const TokenSequence& b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + cost});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

TokenDistance token_distance(const TokenSequence& actual, const TokenSequence& recommended) {
    if (actual.empty()) throw std::invalid_argument("token_distance: actual token sequence is empty");
    TokenDistance d;
    d.count = edit_distance(actual, recommended);
    // Integer round-half-up of 100 * count / n.
    d.pct = static_cast<int>((200 * d.count + actual.size()) / (2 * actual.size()));
    return d;
}

}  // namespace nextmethod
