#include "ref_scanner.hpp"

#include <set>

namespace testsupport {

namespace {

enum class Class { space, letter, upper, digit, symbol, bracket, other };

Class classify(char c) {
  if (c == ' ' || c == '\n' || c == '\t' || c == '\r') return Class::space;
  if (c >= 'A' && c <= 'Z') return Class::upper;
  if ((c >= 'a' && c <= 'z') || c == '_') return Class::letter;
  if (c >= '0' && c <= '9') return Class::digit;
  if (std::string_view("()[]{},;").find(c) != std::string_view::npos) return Class::bracket;
  if (std::string_view("~@#$%^?!+-*<>\\/|&=:.").find(c) != std::string_view::npos)
    return Class::symbol;
  return Class::other;
}

bool word_char(char c) {
  Class k = classify(c);
  return k == Class::letter || k == Class::upper || k == Class::digit || c == '`';
}

/// A minus sign directly before a digit is part of the literal unless the
/// previous token can end an operand.
bool ends_operand(const std::vector<std::pair<std::string, std::string>>& out) {
  if (out.empty()) return false;
  auto& [kind, text] = out.back();
  if (kind == "identifier" || kind == "constructor-identifier" || kind == "integer-literal")
    return true;
  return kind == "punctuation" && (text == ")" || text == "]" || text == "}");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> reference_scan(std::string_view src) {
  static const std::set<std::string> keywords = {
      "module", "implementation", "definition", "system", "import", "from",   "where",
      "in",     "of",             "case",       "if",     "let",    "with",   "class",
      "instance", "generic",      "derive",     "infixl", "infixr", "infix",  "dynamic",
      "Start"};
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  auto comment_at = [&](std::size_t j) {
    return j + 1 < src.size() && src[j] == '/' && (src[j + 1] == '/' || src[j + 1] == '*');
  };
  while (i < src.size()) {
    char c = src[i];
    if (comment_at(i)) {
      if (src[i + 1] == '/') {
        while (i < src.size() && src[i] != '\n') ++i;
      } else {
        int depth = 0;
        do {
          if (i + 1 < src.size() && src[i] == '/' && src[i + 1] == '*') {
            ++depth;
            i += 2;
          } else if (i + 1 < src.size() && src[i] == '*' && src[i + 1] == '/') {
            --depth;
            i += 2;
          } else if (i >= src.size()) {
            out.emplace_back("error", "unterminated-comment");
            return out;
          } else {
            ++i;
          }
        } while (depth > 0);
      }
      continue;
    }
    std::size_t start = i;
    if (c == '-' && i + 1 < src.size() && classify(src[i + 1]) == Class::digit &&
        !ends_operand(out)) {
      ++i;
      while (i < src.size() && classify(src[i]) == Class::digit) ++i;
      out.emplace_back("integer-literal", std::string(src.substr(start, i - start)));
      continue;
    }
    switch (classify(c)) {
      case Class::space:
        ++i;
        continue;
      case Class::letter:
      case Class::upper: {
        while (i < src.size() && word_char(src[i])) ++i;
        std::string w(src.substr(start, i - start));
        std::string kind = keywords.count(w) ? "keyword"
                           : classify(c) == Class::upper ? "constructor-identifier"
                                                         : "identifier";
        out.emplace_back(kind, w);
        continue;
      }
      case Class::digit:
        while (i < src.size() && classify(src[i]) == Class::digit) ++i;
        out.emplace_back("integer-literal", std::string(src.substr(start, i - start)));
        continue;
      case Class::bracket:
        ++i;
        out.emplace_back("punctuation", std::string(1, c));
        continue;
      case Class::symbol: {
        ++i;
        while (i < src.size() && classify(src[i]) == Class::symbol && !comment_at(i)) ++i;
        std::string op(src.substr(start, i - start));
        out.emplace_back(op == ":" ? "punctuation" : "operator", op);
        continue;
      }
      case Class::other:
        out.emplace_back("error", "invalid-char");
        return out;
    }
  }
  return out;
}

}  // namespace testsupport
