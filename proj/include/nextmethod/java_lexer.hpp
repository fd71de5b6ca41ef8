#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nextmethod {

enum class TokenKind {
    identifier,
    keyword,
    number,
    string,  // string literal or text block, quotes included
    character,
    op,  // operators and separators
};

/// A lexical token. `text` views into the lexed source, which must outlive it.
struct Token {
    TokenKind kind;
    std::string_view text;
    std::size_t offset;  // byte offset of the first character
    std::size_t line;    // 1-based
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<std::string> diagnostics;
};

/// Total lexer for Java source. Comments and whitespace are dropped; malformed
/// input (unterminated literals or comments) is tokenized best-effort and
/// reported in `diagnostics`.
LexResult lex_java(std::string_view source);

bool is_java_keyword(std::string_view word);
bool is_primitive_type(std::string_view word);

}  // namespace nextmethod
