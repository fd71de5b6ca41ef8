#include "nextmethod/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace nextmethod {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",      "case",         "catch",
    "char",     "class",      "const",     "continue",  "default",   "do",           "double",
    "else",     "enum",       "extends",   "final",     "finally",   "float",        "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",         "interface",
    "long",     "native",     "new",       "package",   "private",   "protected",    "public",
    "return",   "short",      "static",    "strictfp",  "super",     "switch",       "synchronized",
    "this",     "throw",      "throws",    "transient", "try",       "void",         "volatile",
    "while",    "true",       "false",     "null",
};

constexpr std::array<std::string_view, 9> kPrimitives = {
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void",
};

// Longest first so maximal munch works with a linear scan.
constexpr std::array<std::string_view, 25> kMultiCharOps = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>",
};

bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        while (pos_ < src_.size()) {
            const unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else if (starts_with("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (starts_with("/*")) {
                block_comment();
            } else if (starts_with("\"\"\"")) {
                text_block();
            } else if (c == '"') {
                quoted('"', TokenKind::string);
            } else if (c == '\'') {
                quoted('\'', TokenKind::character);
            } else if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
                number();
            } else if (is_ident_start(c)) {
                identifier();
            } else {
                op();
            }
        }
        return std::move(result_);
    }

private:
    bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

    void emit(TokenKind kind, std::size_t begin, std::size_t begin_line) {
        result_.tokens.push_back(Token{kind, src_.substr(begin, pos_ - begin), begin, begin_line});
    }

    void block_comment() {
        const std::size_t start_line = line_;
        const std::size_t end = src_.find("*/", pos_ + 2);
        const std::size_t stop = end == std::string_view::npos ? src_.size() : end + 2;
        line_ += static_cast<std::size_t>(std::count(src_.begin() + pos_, src_.begin() + stop, '\n'));
        pos_ = stop;
        if (end == std::string_view::npos)
            result_.diagnostics.push_back("unterminated block comment starting at line " + std::to_string(start_line));
    }

    void text_block() {
        const std::size_t begin = pos_;
        const std::size_t begin_line = line_;
        std::size_t scan = pos_ + 3;
        std::size_t stop = std::string_view::npos;
        while (scan + 3 <= src_.size()) {
            if (src_[scan] == '\\') {
                scan += 2;
                continue;
            }
            if (src_.compare(scan, 3, "\"\"\"") == 0) {
                stop = scan + 3;
                break;
            }
            ++scan;
        }
        if (stop == std::string_view::npos) {
            stop = src_.size();
            result_.diagnostics.push_back("unterminated text block at line " + std::to_string(begin_line));
        }
        line_ += static_cast<std::size_t>(std::count(src_.begin() + pos_, src_.begin() + stop, '\n'));
        pos_ = stop;
        emit(TokenKind::string, begin, begin_line);
    }

    // A quoted literal never spans lines; an unterminated one ends at the line end.
    void quoted(char quote, TokenKind kind) {
        const std::size_t begin = pos_;
        ++pos_;
        bool closed = false;
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            if (src_[pos_] == '\\') {
                pos_ = std::min(pos_ + 2, src_.size());
                continue;
            }
            if (src_[pos_++] == quote) {
                closed = true;
                break;
            }
        }
        if (!closed) result_.diagnostics.push_back("unterminated literal at line " + std::to_string(line_));
        emit(kind, begin, line_);
    }

    void number() {
        const std::size_t begin = pos_;
        const bool hex = starts_with("0x") || starts_with("0X");
        while (pos_ < src_.size()) {
            const unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (is_ident_part(c) || c == '.') {
                const bool exponent = hex ? (c == 'p' || c == 'P') : (c == 'e' || c == 'E');
                ++pos_;
                if (exponent && pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
        emit(TokenKind::number, begin, line_);
    }

    void identifier() {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const auto word = src_.substr(begin, pos_ - begin);
        emit(is_java_keyword(word) ? TokenKind::keyword : TokenKind::identifier, begin, line_);
    }

    void op() {
        const std::size_t begin = pos_;
        std::size_t len = 1;
        for (auto candidate : kMultiCharOps) {
            if (starts_with(candidate)) {
                len = candidate.size();
                break;
            }
        }
        pos_ += len;
        emit(TokenKind::op, begin, line_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    LexResult result_;
};

}  // namespace

LexResult lex_java(std::string_view source) { return Lexer(source).run(); }

bool is_java_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_primitive_type(std::string_view word) {
    return std::find(kPrimitives.begin(), kPrimitives.end(), word) != kPrimitives.end();
}

}  // namespace nextmethod
