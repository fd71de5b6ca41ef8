#include "nextmethod/corpus.hpp"
#include "nextmethod/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>

namespace nextmethod {

namespace {

constexpr std::array<std::string_view, 12> kModifiers = {
    "public", "protected", "private", "static", "final", "abstract",
    "synchronized", "native", "strictfp", "default", "transient", "volatile",
};

bool is_modifier(const Token& t) {
    return t.kind == TokenKind::keyword && std::find(kModifiers.begin(), kModifiers.end(), t.text) != kModifiers.end();
}

bool is_op(const Token& t, std::string_view text) { return t.kind == TokenKind::op && t.text == text; }

bool is_ident(const Token& t) { return t.kind == TokenKind::identifier; }

int angle_delta(const Token& t) {
    if (t.kind != TokenKind::op) return 0;
    if (t.text == "<") return 1;
    if (t.text == ">") return -1;
    if (t.text == ">>") return -2;
    if (t.text == ">>>") return -3;
    return 0;
}

enum class ScopeKind { top, type, block, callable };

struct Scope {
    ScopeKind kind;
    std::string type_name;  // named type bodies only
    std::size_t callable_index = 0;
};

struct Pending {
    std::size_t start_token;
    std::size_t name_token;
    std::size_t open_paren;
    std::size_t close_paren;
    std::size_t close_brace = 0;
    bool closed = false;
};

class CallableScanner {
public:
    explicit CallableScanner(std::string_view source) : source_(source), lexed_(lex_java(source)), toks_(lexed_.tokens) {
        match_parens();
    }

    ExtractionResult run() {
        ExtractionResult result;
        result.diagnostics = lexed_.diagnostics;

        std::vector<Scope> scopes{Scope{ScopeKind::top, {}, 0}};
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            if (is_op(toks_[i], "{")) {
                scopes.push_back(classify_open_brace(i, scopes.back()));
            } else if (is_op(toks_[i], "}")) {
                if (scopes.size() == 1) {
                    result.diagnostics.push_back("unmatched '}' at line " + std::to_string(toks_[i].line));
                    continue;
                }
                const Scope closed = scopes.back();
                scopes.pop_back();
                if (closed.kind == ScopeKind::callable) {
                    pending_[closed.callable_index].close_brace = i;
                    pending_[closed.callable_index].closed = true;
                }
            }
        }
        if (scopes.size() > 1) {
            result.diagnostics.push_back("unbalanced braces at end of input: " + std::to_string(scopes.size() - 1) +
                                         " block(s) left open");
        }

        for (const auto& p : pending_) {
            if (p.closed) result.callables.push_back(build(p));
        }
        std::stable_sort(result.callables.begin(), result.callables.end(),
                         [](const Callable& a, const Callable& b) { return a.offset < b.offset; });
        return result;
    }

private:
    void match_parens() {
        paren_match_.assign(toks_.size(), npos);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            if (is_op(toks_[i], "(")) {
                stack.push_back(i);
            } else if (is_op(toks_[i], ")") && !stack.empty()) {
                paren_match_[i] = stack.back();
                paren_match_[stack.back()] = i;
                stack.pop_back();
            }
        }
    }

    // Walks back from `from` (inclusive) to the first token of the current
    // declaration: stops after ';', '{' or '}' at parenthesis depth zero.
    std::size_t declaration_start(std::size_t from) const {
        int depth = 0;
        std::size_t j = from + 1;
        while (j > 0) {
            const Token& t = toks_[j - 1];
            if (is_op(t, ")")) {
                ++depth;
            } else if (is_op(t, "(")) {
                if (depth == 0) break;
                --depth;
            } else if (depth == 0 && (is_op(t, ";") || is_op(t, "{") || is_op(t, "}"))) {
                break;
            }
            --j;
        }
        return j;
    }

    std::optional<std::string> type_header_name(std::size_t brace) const {
        if (brace == 0) return std::nullopt;
        const std::size_t start = declaration_start(brace - 1);
        for (std::size_t j = start; j + 1 < brace; ++j) {
            const Token& t = toks_[j];
            const bool after_dot = j > 0 && is_op(toks_[j - 1], ".");
            if (after_dot) continue;
            const bool type_keyword =
                t.kind == TokenKind::keyword && (t.text == "class" || t.text == "interface" || t.text == "enum");
            if (type_keyword && is_ident(toks_[j + 1])) return std::string(toks_[j + 1].text);
            if (is_ident(t) && t.text == "record" && is_ident(toks_[j + 1]) && j + 2 < brace &&
                (is_op(toks_[j + 2], "(") || is_op(toks_[j + 2], "<")))
                return std::string(toks_[j + 1].text);
        }
        return std::nullopt;
    }

    // Index of the ')' closing a parameter list that precedes `brace`,
    // skipping an optional throws clause.
    std::optional<std::size_t> header_close_paren(std::size_t brace) const {
        if (brace == 0) return std::nullopt;
        std::size_t k = brace - 1;
        if (is_op(toks_[k], ")")) return k;
        // throws A, b.C<D>
        std::size_t j = k + 1;
        while (j > 0) {
            const Token& t = toks_[j - 1];
            if (t.kind == TokenKind::keyword && t.text == "throws") {
                if (j >= 2 && is_op(toks_[j - 2], ")")) return j - 2;
                return std::nullopt;
            }
            const bool allowed = is_ident(t) || is_op(t, ".") || is_op(t, ",") || angle_delta(t) != 0 ||
                                 is_op(t, "?") || (t.kind == TokenKind::keyword && (t.text == "extends" || t.text == "super"));
            if (!allowed) return std::nullopt;
            --j;
        }
        return std::nullopt;
    }

    // Start of the qualified name ending at `last` (a.b.C), or `last` itself.
    std::size_t qualified_name_start(std::size_t last) const {
        std::size_t j = last;
        while (j >= 2 && is_op(toks_[j - 1], ".") && is_ident(toks_[j - 2])) j -= 2;
        return j;
    }

    Scope classify_open_brace(std::size_t brace, const Scope& enclosing) {
        if (auto name = type_header_name(brace)) return Scope{ScopeKind::type, *name, 0};

        const bool declarations_allowed = enclosing.kind == ScopeKind::top || enclosing.kind == ScopeKind::type;
        const auto close = header_close_paren(brace);
        if (close && paren_match_[*close] != npos && paren_match_[*close] > 0) {
            const std::size_t open = paren_match_[*close];
            const std::size_t name = open - 1;
            if (is_ident(toks_[name])) {
                const std::size_t qual = qualified_name_start(name);
                if (qual > 0 && toks_[qual - 1].kind == TokenKind::keyword && toks_[qual - 1].text == "new")
                    return Scope{ScopeKind::type, {}, 0};  // anonymous class
                if (declarations_allowed && qual == name && is_callable_header(name, enclosing)) {
                    pending_.push_back(Pending{declaration_start(name), name, open, *close});
                    return Scope{ScopeKind::callable, {}, pending_.size() - 1};
                }
            }
            // Enum constant with arguments and a body.
            if (enclosing.kind == ScopeKind::type && brace == *close + 1) return Scope{ScopeKind::type, {}, 0};
            return Scope{ScopeKind::block, {}, 0};
        }
        // Enum constant without arguments and with a body.
        if (enclosing.kind == ScopeKind::type && brace > 0 && is_ident(toks_[brace - 1]))
            return Scope{ScopeKind::type, {}, 0};
        return Scope{ScopeKind::block, {}, 0};
    }

    bool is_callable_header(std::size_t name, const Scope& enclosing) const {
        enum class Form { method, constructor, none };
        Form form = Form::none;
        if (name == 0) {
            form = Form::constructor;
        } else {
            const Token& prev = toks_[name - 1];
            if (is_ident(prev)) {
                const std::size_t qual = qualified_name_start(name - 1);
                const bool annotation = qual > 0 && is_op(toks_[qual - 1], "@");
                form = annotation ? Form::constructor : Form::method;
            } else if (prev.kind == TokenKind::keyword && is_primitive_type(prev.text)) {
                form = Form::method;
            } else if (angle_delta(prev) < 0 || is_op(prev, "]")) {
                form = Form::method;
            } else if (is_modifier(prev) || is_op(prev, ")") || is_op(prev, ";") || is_op(prev, "{") ||
                       is_op(prev, "}")) {
                form = Form::constructor;
            }
        }
        switch (form) {
            case Form::method:
                return true;
            case Form::constructor:
                return enclosing.kind == ScopeKind::top || toks_[name].text == enclosing.type_name;
            case Form::none:
                return false;
        }
        return false;
    }

    std::size_t skip_annotation(std::size_t at, std::size_t limit) const {
        // at points to '@'
        std::size_t j = at + 1;
        if (j < limit && toks_[j].kind == TokenKind::keyword && toks_[j].text == "interface") return j;
        while (j < limit && is_ident(toks_[j])) {
            ++j;
            if (j + 1 < limit && is_op(toks_[j], ".") && is_ident(toks_[j + 1])) {
                ++j;
                continue;
            }
            break;
        }
        if (j < limit && is_op(toks_[j], "(") && paren_match_[j] != npos) j = paren_match_[j] + 1;
        return j;
    }

    std::string parameter_type(std::size_t begin, std::size_t end) const {
        std::vector<std::size_t> kept;
        for (std::size_t j = begin; j < end;) {
            if (is_op(toks_[j], "@")) {
                j = skip_annotation(j, end);
                continue;
            }
            if (toks_[j].kind == TokenKind::keyword && toks_[j].text == "final") {
                ++j;
                continue;
            }
            kept.push_back(j++);
        }
        // Trailing dims after the name: `int a[]`.
        int trailing_dims = 0;
        while (kept.size() >= 3 && is_op(toks_[kept.back()], "]") && is_op(toks_[kept[kept.size() - 2]], "[")) {
            kept.resize(kept.size() - 2);
            ++trailing_dims;
        }
        if (kept.empty()) return {};
        const Token& last = toks_[kept.back()];
        if (last.kind == TokenKind::keyword && last.text == "this") return {};  // receiver parameter
        if (kept.size() >= 2 && (is_ident(last) || last.kind == TokenKind::keyword)) kept.pop_back();

        std::string type;
        int depth = 0;
        for (std::size_t idx : kept) {
            const Token& t = toks_[idx];
            const int delta = angle_delta(t);
            if (delta != 0) {
                depth = std::max(0, depth + delta);
                continue;
            }
            if (depth == 0) type += t.text;
        }
        for (int d = 0; d < trailing_dims; ++d) type += "[]";
        return type;
    }

    std::string signature(const Pending& p) const {
        std::string sig(toks_[p.name_token].text);
        sig += '(';
        int angle = 0;
        int paren = 0;
        std::size_t param_begin = p.open_paren + 1;
        bool first = true;
        auto flush = [&](std::size_t end) {
            if (end <= param_begin) return;
            auto type = parameter_type(param_begin, end);
            if (type.empty()) return;
            if (!first) sig += ',';
            sig += type;
            first = false;
        };
        for (std::size_t j = p.open_paren + 1; j < p.close_paren; ++j) {
            const Token& t = toks_[j];
            angle = std::max(0, angle + angle_delta(t));
            if (is_op(t, "(")) ++paren;
            if (is_op(t, ")")) --paren;
            if (is_op(t, ",") && angle == 0 && paren == 0) {
                flush(j);
                param_begin = j + 1;
            }
        }
        flush(p.close_paren);
        sig += ')';
        return sig;
    }

    int line_count(const Pending& p) const {
        std::size_t first = p.start_token;
        while (first < p.name_token && is_op(toks_[first], "@")) first = skip_annotation(first, p.name_token);
        const std::size_t start_line = toks_[std::min(first, p.name_token)].line;
        std::size_t end_line = toks_[p.close_brace].line;
        if (p.close_brace > 0 && toks_[p.close_brace - 1].line < end_line) --end_line;
        if (end_line < start_line) return 1;
        return static_cast<int>(end_line - start_line + 1);
    }

    Callable build(const Pending& p) const {
        Callable c;
        c.name = std::string(toks_[p.name_token].text);
        c.signature = signature(p);
        const Token& first = toks_[p.start_token];
        const Token& last = toks_[p.close_brace];
        c.offset = first.offset;
        c.source_text = std::string(source_.substr(first.offset, last.offset + last.text.size() - first.offset));
        c.line_count = line_count(p);
        return c;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::string_view source_;
    LexResult lexed_;
    const std::vector<Token>& toks_;
    std::vector<std::size_t> paren_match_;
    std::vector<Pending> pending_;
};

}  // namespace

ExtractionResult extract_callables(std::string_view source) { return CallableScanner(source).run(); }

}  // namespace nextmethod
