#include "doctest.h"

#include "nextmethod/java_lexer.hpp"

#include <string>
#include <vector>

using namespace nextmethod;

namespace {

std::vector<std::string> texts(const LexResult& r) {
    std::vector<std::string> out;
    for (const auto& t : r.tokens) out.emplace_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("comments and whitespace are dropped") {
    const auto r = lex_java("int x = 1; // trailing\n/* block\n comment */ x++;");
    CHECK(texts(r) == std::vector<std::string>{"int", "x", "=", "1", ";", "x", "++", ";"});
    CHECK(r.diagnostics.empty());
    CHECK(r.tokens[5].line == 3);
}

TEST_CASE("token kinds") {
    const auto r = lex_java(R"(return "a\"b" + 'c' + 0x1F + 1.5e3f + foo;)");
    REQUIRE(r.tokens.size() == 11);
    CHECK(r.tokens[0].kind == TokenKind::keyword);
    CHECK(r.tokens[1].kind == TokenKind::string);
    CHECK(r.tokens[1].text == R"("a\"b")");
    CHECK(r.tokens[3].kind == TokenKind::character);
    CHECK(r.tokens[5].kind == TokenKind::number);
    CHECK(r.tokens[5].text == "0x1F");
    CHECK(r.tokens[7].text == "1.5e3f");
    CHECK(r.tokens[9].text == "foo");
    CHECK(r.tokens[9].kind == TokenKind::identifier);
    CHECK(r.tokens[10].kind == TokenKind::op);
}

TEST_CASE("multi-character operators are single tokens") {
    CHECK(texts(lex_java("a >>>= b -> c :: d != e")) ==
          std::vector<std::string>{"a", ">>>=", "b", "->", "c", "::", "d", "!=", "e"});
}

TEST_CASE("text blocks") {
    const auto r = lex_java("String s = \"\"\"\n  hi \"there\"\n  \"\"\";");
    REQUIRE(r.tokens.size() == 5);
    CHECK(r.tokens[3].kind == TokenKind::string);
    CHECK(r.diagnostics.empty());
}

TEST_CASE("malformed input is reported, not fatal") {
    SUBCASE("unterminated string") {
        const auto r = lex_java("String s = \"open\nint y;");
        CHECK_FALSE(r.diagnostics.empty());
        CHECK(texts(r).back() == ";");
    }
    SUBCASE("unterminated comment") {
        const auto r = lex_java("int x; /* never closed");
        CHECK(texts(r) == std::vector<std::string>{"int", "x", ";"});
        CHECK_FALSE(r.diagnostics.empty());
    }
    SUBCASE("stray characters") {
        const auto r = lex_java("int # x;");
        CHECK(texts(r).front() == "int");
    }
}

TEST_CASE("keyword tables") {
    CHECK(is_java_keyword("synchronized"));
    CHECK(is_java_keyword("return"));
    CHECK_FALSE(is_java_keyword("Return"));
    CHECK(is_primitive_type("int"));
    CHECK_FALSE(is_primitive_type("String"));
}
