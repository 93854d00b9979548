#pragma once

// Canonical byte-exact text for LinComb/Tensor2, the CLI input grammar, and
// the LaTeX emitter/parser.
//
// Grammar:  word    = "x" INT { "x" INT } | "1"
//           term    = [COEFF "*"] word
//           lincomb = term { ("+"|"-") term }
//           t2term  = term SEP word      with SEP either "(x)" or UTF-8 ⊗
// Coefficients are packed base-p integers (a plain residue when k=1).

#include <string>
#include <string_view>

#include "mzv/words.hpp"

namespace mzv {

inline std::string word_to_text(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (u32 a : w.letters()) {
    s += 'x';
    s += std::to_string(a);
  }
  return s;
}

inline std::string canonical_serialize(const LinComb& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [w, c] : x.terms()) {
    if (!s.empty()) s += " + ";
    if (c.v != 1) s += std::to_string(c.v) + "*";
    s += word_to_text(w);
  }
  return s;
}

inline std::string canonical_serialize(const Tensor2& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : x.terms()) {
    if (!s.empty()) s += " + ";
    if (c.v != 1) s += std::to_string(c.v) + "*";
    s += word_to_text(k.first);
    s += " (x) ";
    s += word_to_text(k.second);
  }
  return s;
}

inline std::string canonical_serialize(const Tensor3& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : x.terms()) {
    if (!s.empty()) s += " + ";
    if (c.v != 1) s += std::to_string(c.v) + "*";
    s += word_to_text(std::get<0>(k));
    s += " (x) ";
    s += word_to_text(std::get<1>(k));
    s += " (x) ";
    s += word_to_text(std::get<2>(k));
  }
  return s;
}

namespace detail {

class TextCursor {
 public:
  explicit TextCursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_str(std::string_view t) {
    skip_ws();
    if (s_.substr(pos_, t.size()) == t) {
      pos_ += t.size();
      return true;
    }
    return false;
  }
  u64 parse_uint() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] < '0' || s_[pos_] > '9') fail("expected integer");
    u64 v = 0;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (u64(1) << 62)) fail("integer too large");
      ++pos_;
    }
    return v;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at position " + std::to_string(pos_) + ": " + what + " in \"" + std::string(s_) + "\"");
  }
  size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  size_t pos_ = 0;
};

// word = "x" INT { "x" INT } | "1"; letters may be whitespace separated
inline Word parse_word_at(TextCursor& c) {
  if (c.eat('1')) return Word();
  std::vector<u32> letters;
  while (c.eat('x')) {
    u64 n = c.parse_uint();
    if (n < 1 || n > kMaxLetter) c.fail("letter out of range [1, 2^31-1]");
    letters.push_back(static_cast<u32>(n));
  }
  if (letters.empty()) c.fail("expected word");
  return Word(std::move(letters));
}

// term = [COEFF "*"] word; a bare "1" is the unit word, not a coefficient
inline std::pair<Word, Scalar> parse_term_at(TextCursor& c, const FieldSpec& f) {
  char ch = c.peek();
  if (ch >= '0' && ch <= '9') {
    u64 v = c.parse_uint();
    if (c.eat('*')) {
      Scalar coeff = f.k() == 1 ? f.from_int(static_cast<i64>(v % f.p())) : f.from_packed(v);
      return {parse_word_at(c), coeff};
    }
    if (v == 1) return {Word(), f.one()};
    c.fail("expected '*' after coefficient");
  }
  return {parse_word_at(c), f.one()};
}

inline bool eat_tensor_sep(TextCursor& c) {
  return c.eat_str("(x)") || c.eat_str("\xE2\x8A\x97");
}

}  // namespace detail

namespace detail {
inline bool is_zero_literal(std::string_view s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  return a != std::string_view::npos && s.substr(a, b - a + 1) == "0";
}
}  // namespace detail

inline Word parse_word(std::string_view s) {
  detail::TextCursor c(s);
  Word w = detail::parse_word_at(c);
  if (!c.done()) c.fail("trailing input after word");
  return w;
}

inline LinComb parse_lincomb(const FieldSpec& f, std::string_view s) {
  detail::TextCursor c(s);
  LinComb r(f);
  if (detail::is_zero_literal(s)) return r;
  bool neg = c.eat('-');
  for (;;) {
    auto [w, coeff] = detail::parse_term_at(c, f);
    r.add_term(w, neg ? f.neg(coeff) : coeff);
    if (c.done()) break;
    if (c.eat('+')) {
      neg = false;
    } else if (c.eat('-')) {
      neg = true;
    } else {
      c.fail("expected '+' or '-'");
    }
  }
  return r;
}

inline Tensor2 parse_tensor2(const FieldSpec& f, std::string_view s) {
  detail::TextCursor c(s);
  Tensor2 r(f);
  if (detail::is_zero_literal(s)) return r;
  bool neg = c.eat('-');
  for (;;) {
    auto [left, coeff] = detail::parse_term_at(c, f);
    if (!detail::eat_tensor_sep(c)) c.fail("expected tensor separator '(x)'");
    Word right = detail::parse_word_at(c);
    r.add_term(left, right, neg ? f.neg(coeff) : coeff);
    if (c.done()) break;
    if (c.eat('+')) {
      neg = false;
    } else if (c.eat('-')) {
      neg = true;
    } else {
      c.fail("expected '+' or '-'");
    }
  }
  return r;
}

// ---- LaTeX ----------------------------------------------------------------

inline std::string word_to_latex(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (u32 a : w.letters()) {
    s += "x_{";
    s += std::to_string(a);
    s += "}";
  }
  return s;
}

inline std::string to_latex(const LinComb& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [w, c] : x.terms()) {
    if (!s.empty()) s += "+";
    if (c.v != 1) {
      s += std::to_string(c.v);
      s += w.empty() ? "\\cdot 1" : word_to_latex(w);
    } else {
      s += word_to_latex(w);
    }
  }
  return s;
}

inline std::string to_latex(const Tensor2& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : x.terms()) {
    if (!s.empty()) s += "+";
    if (c.v != 1) {
      s += std::to_string(c.v);
      s += k.first.empty() ? "\\cdot 1" : word_to_latex(k.first);
    } else {
      s += word_to_latex(k.first);
    }
    s += "\\otimes ";
    s += word_to_latex(k.second);
  }
  return s;
}

namespace detail {

inline Word parse_latex_word_at(TextCursor& c) {
  if (c.eat('1')) return Word();
  std::vector<u32> letters;
  while (c.eat('x')) {
    if (!c.eat('_')) c.fail("expected '_' in LaTeX letter");
    u64 n;
    if (c.eat('{')) {
      n = c.parse_uint();
      if (!c.eat('}')) c.fail("expected '}'");
    } else {
      n = c.parse_uint();
    }
    if (n < 1 || n > kMaxLetter) c.fail("letter out of range");
    letters.push_back(static_cast<u32>(n));
  }
  if (letters.empty()) c.fail("expected LaTeX word");
  return Word(std::move(letters));
}

inline std::pair<Word, Scalar> parse_latex_term_at(TextCursor& c, const FieldSpec& f) {
  Scalar coeff = f.one();
  char ch = c.peek();
  if (ch >= '0' && ch <= '9') {
    u64 v = c.parse_uint();
    coeff = f.k() == 1 ? f.from_int(static_cast<i64>(v % f.p())) : f.from_packed(v);
    if (c.peek() != 'x') {
      // a bare integer is the unit word, optionally written "2\cdot 1"
      c.eat_str("\\cdot");
      c.eat('1');
      return {Word(), coeff};
    }
  }
  return {parse_latex_word_at(c), coeff};
}

// skips a "\Delta(...)=" left-hand side when present
inline void skip_latex_lhs(TextCursor& c) {
  if (!c.eat_str("\\Delta")) return;
  if (!c.eat('(')) c.fail("expected '(' after \\Delta");
  int depth = 1;
  while (depth > 0) {
    if (c.done()) c.fail("unterminated \\Delta(...)");
    if (c.eat('(')) {
      ++depth;
    } else if (c.eat(')')) {
      --depth;
    } else {
      c.eat(c.peek());
    }
  }
  c.eat('&');
  if (!c.eat('=')) c.fail("expected '=' after \\Delta(...)");
}

}  // namespace detail

inline LinComb parse_latex_lincomb(const FieldSpec& f, std::string_view s) {
  detail::TextCursor c(s);
  LinComb r(f);
  if (detail::is_zero_literal(s)) return r;
  bool neg = c.eat('-');
  for (;;) {
    auto [w, coeff] = detail::parse_latex_term_at(c, f);
    r.add_term(w, neg ? f.neg(coeff) : coeff);
    if (c.done()) break;
    if (c.eat('+')) {
      neg = false;
    } else if (c.eat('-')) {
      neg = true;
    } else {
      c.fail("expected '+' or '-'");
    }
  }
  return r;
}

inline Tensor2 parse_latex_tensor2(const FieldSpec& f, std::string_view s) {
  detail::TextCursor c(s);
  detail::skip_latex_lhs(c);
  Tensor2 r(f);
  if (c.peek() == '0') return r;
  bool neg = c.eat('-');
  for (;;) {
    auto [left, coeff] = detail::parse_latex_term_at(c, f);
    if (!c.eat_str("\\otimes")) c.fail("expected \\otimes");
    Word right = detail::parse_latex_word_at(c);
    r.add_term(left, right, neg ? f.neg(coeff) : coeff);
    if (c.eat_str("\\\\")) {
      if (!c.done()) c.fail("trailing input after line terminator");
      break;
    }
    if (c.done()) break;
    if (c.eat('+')) {
      neg = false;
    } else if (c.eat('-')) {
      neg = true;
    } else {
      c.fail("expected '+' or '-'");
    }
  }
  return r;
}

}  // namespace mzv
