#include <gtest/gtest.h>

#include <random>

#include "clean2hs/lexer.hpp"
#include "ref_scanner.hpp"

using namespace clean2hs;

namespace {

std::vector<std::pair<std::string, std::string>> kinds(const std::vector<Token>& ts) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& t : ts) out.emplace_back(std::string(to_string(t.kind)), t.text);
  return out;
}

std::vector<std::pair<std::string, std::string>> lex_or_error(const std::string& src) {
  try {
    return kinds(tokenize(src));
  } catch (const LexError& e) {
    return {{"error", e.reason()}};
  }
}

std::string random_source(std::mt19937_64& rng) {
  static const std::string alphabet = "abfinoq_Z019 +-*<>=:[](),`/\n";
  std::uniform_int_distribution<std::size_t> len(0, 40), ch(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t n = len(rng); n > 0; --n) s += alphabet[ch(rng)];
  return s;
}

}  // namespace

TEST(Lexer, NestedCommentIsDropped) {
  auto ts = tokenize("/* a /* b */ c */ x");
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].kind, TokenKind::identifier);
  EXPECT_EQ(ts[0].text, "x");
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Lexer, AsPatternAgainstReferenceScanner) {
  std::string src = "xs=:[1:ys]";
  std::vector<std::pair<std::string, std::string>> expected = {
      {"identifier", "xs"}, {"operator", "=:"},  {"punctuation", "["}, {"integer-literal", "1"},
      {"punctuation", ":"}, {"identifier", "ys"}, {"punctuation", "]"}};
  EXPECT_EQ(testsupport::reference_scan(src), expected);
  EXPECT_EQ(kinds(tokenize(src)), expected);
}

TEST(Lexer, RandomInputsAgreeWithReferenceScanner) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::string src = random_source(rng);
    auto ref = testsupport::reference_scan(src);
    auto got = lex_or_error(src);
    if (!ref.empty() && ref.back().first == "error") {
      ASSERT_FALSE(got.empty()) << src;
      EXPECT_EQ(got.back(), ref.back()) << src;
    } else {
      EXPECT_EQ(got, ref) << src;
    }
  }
}

TEST(Lexer, MultiCharacterOperatorsAreSingleTokens) {
  for (std::string op : {":==", "=:", ":=", "#!", "\\\\", "<-:", "<=", "->", "+++"}) {
    auto ts = tokenize("a " + op + " b");
    ASSERT_EQ(ts.size(), 3u) << op;
    EXPECT_EQ(ts[1].kind, TokenKind::op) << op;
    EXPECT_EQ(ts[1].text, op);
  }
  auto q = tokenize("A.a: a");
  EXPECT_EQ(q[0].text, "A.");
  EXPECT_EQ(q[0].kind, TokenKind::op);
}

TEST(Lexer, KeywordInventory) {
  std::vector<std::string_view> expected = {
      "module", "implementation", "definition", "system", "import", "from",   "where",
      "in",     "of",             "case",       "if",     "let",    "with",   "class",
      "instance", "generic",      "derive",     "infixl", "infixr", "infix",  "dynamic",
      "Start"};
  auto got = keywords();
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, expected);
  for (auto k : keywords()) EXPECT_EQ(tokenize(std::string(k))[0].kind, TokenKind::keyword) << k;
}

TEST(Lexer, Literals) {
  auto ts = tokenize("42 3.5 1.0e-3 'c' \"s\" ['Hello'] 0x1F");
  std::vector<TokenKind> expected = {TokenKind::integer_literal, TokenKind::real_literal,
                                     TokenKind::real_literal,    TokenKind::char_literal,
                                     TokenKind::string_literal,  TokenKind::char_list_literal,
                                     TokenKind::integer_literal};
  ASSERT_EQ(ts.size(), expected.size());
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(ts[i].kind, expected[i]) << ts[i].text;
}

TEST(Lexer, MinusBeforeDigitIsSignedOnlyInOperandPosition) {
  EXPECT_EQ(kinds(tokenize("x = -1")), (std::vector<std::pair<std::string, std::string>>{
                                           {"identifier", "x"},
                                           {"operator", "="},
                                           {"integer-literal", "-1"}}));
  EXPECT_EQ(tokenize("f (-1)")[2].text, "-1");
  EXPECT_EQ(kinds(tokenize("f -1")).size(), 3u);
  EXPECT_EQ(kinds(tokenize("n-1")).size(), 3u);
  EXPECT_EQ(kinds(tokenize("(x)-1")).size(), 5u);
}

TEST(Lexer, DoubleDashIsNotAComment) {
  auto ts = tokenize("a -- b");
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[1].text, "--");
}

TEST(Lexer, NestedCommentsUpToDepthSixteen) {
  for (int d = 1; d <= 16; ++d) {
    std::string open, close;
    for (int i = 0; i < d; ++i) {
      open += "/* o" + std::to_string(i) + " ";
      close += " c */";
    }
    auto ts = tokenize("a " + open + close + " b");
    ASSERT_EQ(ts.size(), 2u) << d;
    EXPECT_EQ(ts[1].text, "b");
    EXPECT_THROW(tokenize("a " + open + close.substr(5) + " b"), LexError) << d;
  }
}

TEST(Lexer, SpansAreLossless) {
  std::string src =
      "implementation module M\n// line\nf :: Int -> Int\nf x\n\t# y = x + 1 /* c /* d */ */\n"
      "  = y * 2\n";
  auto ts = tokenize(src);
  std::string rebuilt;
  std::size_t at = 0;
  std::size_t last = 0;
  for (auto& t : ts) {
    ASSERT_GE(t.span.start.byte_offset, last);
    last = t.span.start.byte_offset;
    std::string gap = src.substr(at, t.span.start.byte_offset - at);
    rebuilt += gap;
    EXPECT_EQ(src.substr(t.span.start.byte_offset, t.span.end.byte_offset - t.span.start.byte_offset),
              t.text);
    rebuilt += t.text;
    at = t.span.end.byte_offset;
  }
  rebuilt += src.substr(at);
  EXPECT_EQ(rebuilt, src);
}

TEST(Lexer, LineAndColumnFollowOffsets) {
  std::string src = "a\n\tb\n  c";
  auto ts = tokenize(src);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[0].span.start.line, 1);
  EXPECT_EQ(ts[1].span.start.line, 2);
  EXPECT_EQ(ts[1].span.start.column, 5);
  EXPECT_EQ(ts[2].span.start.line, 3);
  EXPECT_EQ(ts[2].span.start.column, 3);
  EXPECT_EQ(ts[2].span.start.byte_offset, 7u);
}

TEST(Lexer, Deterministic) {
  std::string src = "f x = [y \\\\ y <- x | y > 0] ++ ['ab'] // c\n";
  EXPECT_EQ(tokenize(src), tokenize(src));
}

TEST(Lexer, Errors) {
  auto reason = [](const std::string& s) {
    try {
      tokenize(s);
    } catch (const LexError& e) {
      EXPECT_EQ(e.rule_id(), "lex-error");
      return e.reason();
    }
    return std::string("none");
  };
  EXPECT_EQ(reason("a /* b"), "unterminated-comment");
  EXPECT_EQ(reason("\"abc"), "unterminated-string");
  EXPECT_EQ(reason("a \xc3\xa9"), "invalid-char");
}

TEST(Layout, CaseAlternativesFormSeparatedGroups) {
  auto ts = layout_insert(tokenize("f e = case e of\n  0 -> a\n  _ -> b\n"));
  int opens = 0, seps = 0, closes = 0;
  for (auto& t : ts) {
    opens += t.is_layout(Layout::open);
    seps += t.is_layout(Layout::separator);
    closes += t.is_layout(Layout::close);
  }
  EXPECT_EQ(opens, 2);
  EXPECT_EQ(closes, 2);
  EXPECT_EQ(seps, 1);
}

TEST(Layout, SingleLineDefinitionHasOnlyTheModuleBlock) {
  auto ts = layout_insert(tokenize("f x = x"));
  int markers = 0;
  for (auto& t : ts) markers += t.kind == TokenKind::layout_marker;
  EXPECT_EQ(markers, 2);
}

TEST(Layout, GuardsStayInOneDefinitionGroup) {
  auto ts = layout_insert(tokenize("sign n\n  | n > 0 = 1\n  | n < 0 = -1\n  = 0\ng = 1\n"));
  int seps = 0;
  for (auto& t : ts) seps += t.is_layout(Layout::separator);
  EXPECT_EQ(seps, 1);
}

TEST(Layout, InconsistentIndentationIsAnError) {
  EXPECT_THROW(layout_insert(tokenize("f x = y\n  where\n    y = 1\n   z = 2\n")), LayoutError);
}
