#pragma once

// The four binary products on the word space — diamond, shuffle, triangle,
// stuffle — plus the letterwise q-rescaling and the bracket operator.
//
// Word recursions (a = head(u), b = head(v); 1 is a two-sided unit for all):
//   u diamond v  = x_{a+b}(u_ sh v_) + sum over j in (0,a+b), (q-1)|j of
//                  Delta^j_{a,b} x_{a+b-j}(x_j sh (u_ sh v_))
//   u sh v       = x_a(u_ sh v) + x_b(u sh v_) + u diamond v
//   u triangle v = x_a(u_ sh v)
//   u stuffle v  = x_a(u_ * v) + x_b(u * v_) + x_{a+b}(u_ * v_)

#include <algorithm>
#include <tuple>

#include "mzv/words.hpp"

namespace mzv {

inline void check_letter_bound(u64 n) {
  if (n < 1 || n > kMaxLetter) throw std::invalid_argument("letter " + std::to_string(n) + " out of range [1, 2^31-1]");
}

// x_a * every word of x, by concatenation on the left.
inline LinComb lincomb_prepend(u64 a, const LinComb& x) {
  check_letter_bound(a);
  LinComb r(x.field());
  for (const auto& [w, c] : x.terms()) {
    std::vector<u32> l;
    l.reserve(w.depth() + 1);
    l.push_back(static_cast<u32>(a));
    l.insert(l.end(), w.letters().begin(), w.letters().end());
    r.add_term(Word(std::move(l)), c);
  }
  return r;
}

// Memoized product evaluator. Word-level results are cached for the lifetime
// of the engine; the free functions below create one engine per call tree.
class ProductEngine {
 public:
  explicit ProductEngine(const FieldSpec& f) : f_(&f) {}
  const FieldSpec& field() const { return *f_; }

  LinComb shuffle_words(const Word& u, const Word& v) {
    if (u.empty()) return LinComb::of_word(*f_, v);
    if (v.empty()) return LinComb::of_word(*f_, u);
    Key k = key(u, v, true);
    if (auto it = shuffle_m_.find(k); it != shuffle_m_.end()) return it->second;
    LinComb r = lincomb_prepend(u.head(), shuffle_words(u.tail(), v));
    r.add_inplace(lincomb_prepend(v.head(), shuffle_words(u, v.tail())));
    r.add_inplace(diamond_words(u, v));
    shuffle_m_.emplace(std::move(k), r);
    return r;
  }

  LinComb diamond_words(const Word& u, const Word& v) {
    if (u.empty()) return LinComb::of_word(*f_, v);
    if (v.empty()) return LinComb::of_word(*f_, u);
    Key k = key(u, v, true);
    if (auto it = diamond_m_.find(k); it != diamond_m_.end()) return it->second;
    u64 a = u.head(), b = v.head();
    LinComb tails = shuffle_words(u.tail(), v.tail());
    LinComb r = lincomb_prepend(a + b, tails);
    u64 step = f_->q() - 1;
    for (u64 j = step; j < a + b; j += step) {
      u32 c = chen_delta(a, b, static_cast<i64>(j), *f_);
      if (c == 0) continue;
      LinComb inner = shuffle_word_lincomb(Word::letter(static_cast<u32>(j)), tails);
      r.add_scaled_inplace(f_->from_int(c), lincomb_prepend(a + b - j, inner));
    }
    diamond_m_.emplace(std::move(k), r);
    return r;
  }

  LinComb triangle_words(const Word& u, const Word& v) {
    if (u.empty()) return LinComb::of_word(*f_, v);
    if (v.empty()) return LinComb::of_word(*f_, u);
    return lincomb_prepend(u.head(), shuffle_words(u.tail(), v));
  }

  LinComb stuffle_words(const Word& u, const Word& v) {
    if (u.empty()) return LinComb::of_word(*f_, v);
    if (v.empty()) return LinComb::of_word(*f_, u);
    Key k = key(u, v, true);
    if (auto it = stuffle_m_.find(k); it != stuffle_m_.end()) return it->second;
    u64 a = u.head(), b = v.head();
    LinComb r = lincomb_prepend(a, stuffle_words(u.tail(), v));
    r.add_inplace(lincomb_prepend(b, stuffle_words(u, v.tail())));
    r.add_inplace(lincomb_prepend(a + b, stuffle_words(u.tail(), v.tail())));
    stuffle_m_.emplace(std::move(k), r);
    return r;
  }

  LinComb shuffle_word_lincomb(const Word& u, const LinComb& x) {
    LinComb r(*f_);
    for (const auto& [w, c] : x.terms()) r.add_scaled_inplace(c, shuffle_words(u, w));
    return r;
  }

  LinComb shuffle(const LinComb& a, const LinComb& b) { return bilinear(&ProductEngine::shuffle_words, a, b); }
  LinComb diamond(const LinComb& a, const LinComb& b) { return bilinear(&ProductEngine::diamond_words, a, b); }
  LinComb triangle(const LinComb& a, const LinComb& b) { return bilinear(&ProductEngine::triangle_words, a, b); }
  LinComb stuffle(const LinComb& a, const LinComb& b) { return bilinear(&ProductEngine::stuffle_words, a, b); }

  // [a] = (-1)^r (prod of Delta^{i_t}_{1, w(a)+1}) x_{i_1} sh ... sh x_{i_r};
  // the coefficient is the indicator that every letter is a (q-1)-multiple.
  LinComb bracket(const Word& a) {
    if (a.empty()) return LinComb::one(*f_);
    u64 w = a.weight();
    u32 coeff = 1;
    for (u32 l : a.letters()) coeff = static_cast<u32>((u64(coeff) * chen_delta(1, w + 1, static_cast<i64>(l), *f_)) % f_->p());
    if (coeff == 0) return LinComb(*f_);
    std::vector<u32> sorted = a.letters();
    std::sort(sorted.begin(), sorted.end());
    LinComb base = shuffle_power(sorted);
    Scalar s = f_->from_int(coeff);
    if (a.depth() & 1) s = f_->neg(s);
    return scale(s, base);
  }

  size_t memo_size() const { return shuffle_m_.size() + diamond_m_.size() + stuffle_m_.size(); }

 private:
  using Key = std::pair<std::vector<u32>, std::vector<u32>>;

  Key key(const Word& u, const Word& v, bool commutative) const {
    if (commutative && v.letters() < u.letters()) return {v.letters(), u.letters()};
    return {u.letters(), v.letters()};
  }

  LinComb bilinear(LinComb (ProductEngine::*op)(const Word&, const Word&), const LinComb& a, const LinComb& b) {
    check_same_field(*f_, a.field());
    check_same_field(*f_, b.field());
    LinComb r(*f_);
    for (const auto& [u, cu] : a.terms())
      for (const auto& [v, cv] : b.terms()) r.add_scaled_inplace(f_->mul(cu, cv), (this->*op)(u, v));
    return r;
  }

  // x_{l_1} sh ... sh x_{l_r} for a sorted multiset of letters, shared across
  // bracket calls through the multiset cache.
  LinComb shuffle_power(const std::vector<u32>& sorted) {
    if (sorted.empty()) return LinComb::one(*f_);
    if (auto it = bracket_m_.find(sorted); it != bracket_m_.end()) return it->second;
    std::vector<u32> rest(sorted.begin(), sorted.end() - 1);
    LinComb r = shuffle_word_lincomb(Word::letter(sorted.back()), shuffle_power(rest));
    bracket_m_.emplace(sorted, r);
    return r;
  }

  const FieldSpec* f_;
  std::map<Key, LinComb> shuffle_m_, diamond_m_, stuffle_m_;
  std::map<std::vector<u32>, LinComb> bracket_m_;
};

// Free functions with per-call-tree memo lifetime.
inline LinComb shuffle(const LinComb& a, const LinComb& b) {
  ProductEngine e(a.field());
  return e.shuffle(a, b);
}
inline LinComb diamond(const LinComb& a, const LinComb& b) {
  ProductEngine e(a.field());
  return e.diamond(a, b);
}
inline LinComb triangle(const LinComb& a, const LinComb& b) {
  ProductEngine e(a.field());
  return e.triangle(a, b);
}
inline LinComb stuffle(const LinComb& a, const LinComb& b) {
  ProductEngine e(a.field());
  return e.stuffle(a, b);
}
inline LinComb bracket(const FieldSpec& f, const Word& a) {
  ProductEngine e(f);
  return e.bracket(a);
}

// Letterwise rescaling s -> q*s; linear over the prime subfield (all
// coefficients pass through unchanged).
inline Word star_q_word(const Word& w, u64 q) {
  std::vector<u32> l;
  l.reserve(w.depth());
  for (u32 s : w.letters()) {
    u64 t = u64(s) * q;
    check_letter_bound(t);
    l.push_back(static_cast<u32>(t));
  }
  return Word(std::move(l));
}

inline LinComb star_q(const LinComb& x) {
  u64 q = x.field().q();
  LinComb r(x.field());
  for (const auto& [w, c] : x.terms()) r.add_term(star_q_word(w, q), c);
  return r;
}

inline Tensor2 star_q(const Tensor2& x) {
  u64 q = x.field().q();
  Tensor2 r(x.field());
  for (const auto& [k, c] : x.terms()) r.add_term(star_q_word(k.first, q), star_q_word(k.second, q), c);
  return r;
}

}  // namespace mzv
