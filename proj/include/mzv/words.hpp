#pragma once

// Words over the alphabet {x_n : n >= 1}, F_q-linear combinations, and flat
// tensor squares/cubes, all kept in a frozen canonical order.

#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "mzv/field.hpp"

namespace mzv {

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<u32> letters) : l_(std::move(letters)) {
    for (u32 s : l_) {
      if (s < 1 || u64(s) > kMaxLetter) throw std::invalid_argument("Word: letter " + std::to_string(s) + " out of range [1, 2^31-1]");
      wt_ += s;
    }
  }
  static Word letter(u32 n) { return Word(std::vector<u32>{n}); }

  const std::vector<u32>& letters() const { return l_; }
  u64 weight() const { return wt_; }
  u32 depth() const { return static_cast<u32>(l_.size()); }
  bool empty() const { return l_.empty(); }

  u32 head() const {
    if (l_.empty()) throw std::logic_error("Word: head of empty word");
    return l_[0];
  }
  Word tail() const {
    if (l_.empty()) throw std::logic_error("Word: tail of empty word");
    return Word(std::vector<u32>(l_.begin() + 1, l_.end()));
  }

  friend bool operator==(const Word& a, const Word& b) { return a.l_ == b.l_; }
  friend bool operator!=(const Word& a, const Word& b) { return a.l_ != b.l_; }

 private:
  std::vector<u32> l_;
  u64 wt_ = 0;
};

inline Word concat(const Word& u, const Word& v) {
  std::vector<u32> l = u.letters();
  l.insert(l.end(), v.letters().begin(), v.letters().end());
  return Word(std::move(l));
}

// Frozen canonical order: weight, then depth, then lexicographic on letters.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    return a.letters() < b.letters();
  }
};

struct Pair2Less {
  bool operator()(const std::pair<Word, Word>& a, const std::pair<Word, Word>& b) const {
    WordLess lt;
    if (lt(a.first, b.first)) return true;
    if (lt(b.first, a.first)) return false;
    return lt(a.second, b.second);
  }
};

struct Pair3Less {
  bool operator()(const std::tuple<Word, Word, Word>& a, const std::tuple<Word, Word, Word>& b) const {
    WordLess lt;
    if (lt(std::get<0>(a), std::get<0>(b))) return true;
    if (lt(std::get<0>(b), std::get<0>(a))) return false;
    if (lt(std::get<1>(a), std::get<1>(b))) return true;
    if (lt(std::get<1>(b), std::get<1>(a))) return false;
    return lt(std::get<2>(a), std::get<2>(b));
  }
};

inline void check_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!a.same_field(b))
    throw std::invalid_argument("mixed field specs: F_" + std::to_string(a.q()) + " vs F_" + std::to_string(b.q()));
}

class LinComb {
 public:
  explicit LinComb(const FieldSpec& f) : f_(&f) {}
  static LinComb of_word(const FieldSpec& f, const Word& w) {
    LinComb r(f);
    r.add_term(w, f.one());
    return r;
  }
  static LinComb one(const FieldSpec& f) { return of_word(f, Word()); }

  const FieldSpec& field() const { return *f_; }
  const std::map<Word, Scalar, WordLess>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  Scalar coeff(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? f_->zero() : it->second;
  }

  void add_term(const Word& w, Scalar c) {
    if (f_->is_zero(c)) return;
    auto it = t_.find(w);
    if (it == t_.end()) {
      t_.emplace(w, c);
    } else {
      it->second = f_->add(it->second, c);
      if (f_->is_zero(it->second)) t_.erase(it);
    }
  }

  void add_inplace(const LinComb& o) {
    check_same_field(*f_, o.field());
    for (const auto& [w, c] : o.t_) add_term(w, c);
    debug_check();
  }
  void add_scaled_inplace(Scalar s, const LinComb& o) {
    check_same_field(*f_, o.field());
    if (f_->is_zero(s)) return;
    for (const auto& [w, c] : o.t_) add_term(w, f_->mul(s, c));
    debug_check();
  }

  void debug_check() const {
#ifndef NDEBUG
    for (const auto& [w, c] : t_) assert(!f_->is_zero(c) && "zero coefficient stored");
#endif
  }

  friend bool operator==(const LinComb& a, const LinComb& b) {
    return a.f_->same_field(*b.f_) && a.t_ == b.t_;
  }
  friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }

 private:
  const FieldSpec* f_;
  std::map<Word, Scalar, WordLess> t_;
};

inline LinComb add(const LinComb& a, const LinComb& b) {
  LinComb r = a;
  r.add_inplace(b);
  return r;
}

inline LinComb scale(Scalar s, const LinComb& a) {
  LinComb r(a.field());
  r.add_scaled_inplace(s, a);
  return r;
}

inline LinComb sub(const LinComb& a, const LinComb& b) {
  LinComb r = a;
  r.add_scaled_inplace(a.field().neg(a.field().one()), b);
  return r;
}

inline LinComb apply_linear_extension(const std::function<LinComb(const Word&)>& f, const LinComb& x) {
  LinComb r(x.field());
  for (const auto& [w, c] : x.terms()) {
    LinComb fw = f(w);
    check_same_field(x.field(), fw.field());
    r.add_scaled_inplace(c, fw);
  }
  return r;
}

class Tensor2 {
 public:
  explicit Tensor2(const FieldSpec& f) : f_(&f) {}
  static Tensor2 of_pair(const FieldSpec& f, const Word& a, const Word& b) {
    Tensor2 r(f);
    r.add_term(a, b, f.one());
    return r;
  }

  const FieldSpec& field() const { return *f_; }
  const std::map<std::pair<Word, Word>, Scalar, Pair2Less>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  Scalar coeff(const Word& a, const Word& b) const {
    auto it = t_.find({a, b});
    return it == t_.end() ? f_->zero() : it->second;
  }

  void add_term(const Word& a, const Word& b, Scalar c) {
    if (f_->is_zero(c)) return;
    auto key = std::make_pair(a, b);
    auto it = t_.find(key);
    if (it == t_.end()) {
      t_.emplace(std::move(key), c);
    } else {
      it->second = f_->add(it->second, c);
      if (f_->is_zero(it->second)) t_.erase(it);
    }
  }

  void add_inplace(const Tensor2& o) {
    check_same_field(*f_, o.field());
    for (const auto& [k, c] : o.t_) add_term(k.first, k.second, c);
  }
  void add_scaled_inplace(Scalar s, const Tensor2& o) {
    check_same_field(*f_, o.field());
    if (f_->is_zero(s)) return;
    for (const auto& [k, c] : o.t_) add_term(k.first, k.second, f_->mul(s, c));
  }

  friend bool operator==(const Tensor2& a, const Tensor2& b) {
    return a.f_->same_field(*b.f_) && a.t_ == b.t_;
  }
  friend bool operator!=(const Tensor2& a, const Tensor2& b) { return !(a == b); }

 private:
  const FieldSpec* f_;
  std::map<std::pair<Word, Word>, Scalar, Pair2Less> t_;
};

inline Tensor2 tensor2_add(const Tensor2& a, const Tensor2& b) {
  Tensor2 r = a;
  r.add_inplace(b);
  return r;
}

inline Tensor2 tensor2_scale(Scalar s, const Tensor2& a) {
  Tensor2 r(a.field());
  r.add_scaled_inplace(s, a);
  return r;
}

inline Tensor2 tensor2_sub(const Tensor2& a, const Tensor2& b) {
  Tensor2 r = a;
  r.add_scaled_inplace(a.field().neg(a.field().one()), b);
  return r;
}

// a (x) b with full bilinearity.
inline Tensor2 tensor_product(const LinComb& a, const LinComb& b) {
  check_same_field(a.field(), b.field());
  const FieldSpec& f = a.field();
  Tensor2 r(f);
  for (const auto& [u, cu] : a.terms())
    for (const auto& [v, cv] : b.terms()) r.add_term(u, v, f.mul(cu, cv));
  return r;
}

class Tensor3 {
 public:
  explicit Tensor3(const FieldSpec& f) : f_(&f) {}
  const FieldSpec& field() const { return *f_; }
  const std::map<std::tuple<Word, Word, Word>, Scalar, Pair3Less>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }

  void add_term(const Word& a, const Word& b, const Word& c, Scalar s) {
    if (f_->is_zero(s)) return;
    auto key = std::make_tuple(a, b, c);
    auto it = t_.find(key);
    if (it == t_.end()) {
      t_.emplace(std::move(key), s);
    } else {
      it->second = f_->add(it->second, s);
      if (f_->is_zero(it->second)) t_.erase(it);
    }
  }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.f_->same_field(*b.f_) && a.t_ == b.t_;
  }
  friend bool operator!=(const Tensor3& a, const Tensor3& b) { return !(a == b); }

 private:
  const FieldSpec* f_;
  std::map<std::tuple<Word, Word, Word>, Scalar, Pair3Less> t_;
};

// (g applied to the left factor) (x) untouched right factor, flattened.
inline Tensor3 extend_left_to_t3(const std::function<Tensor2(const Word&)>& g, const Tensor2& t) {
  Tensor3 r(t.field());
  const FieldSpec& f = t.field();
  for (const auto& [k, c] : t.terms()) {
    Tensor2 gu = g(k.first);
    check_same_field(f, gu.field());
    for (const auto& [k2, c2] : gu.terms()) r.add_term(k2.first, k2.second, k.second, f.mul(c, c2));
  }
  return r;
}

inline Tensor3 extend_right_to_t3(const std::function<Tensor2(const Word&)>& g, const Tensor2& t) {
  Tensor3 r(t.field());
  const FieldSpec& f = t.field();
  for (const auto& [k, c] : t.terms()) {
    Tensor2 gv = g(k.second);
    check_same_field(f, gv.field());
    for (const auto& [k2, c2] : gv.terms()) r.add_term(k.first, k2.first, k2.second, f.mul(c, c2));
  }
  return r;
}

// All words of exactly the given weight (compositions of w), then up to it.
inline std::vector<Word> words_of_weight(u32 w) {
  std::vector<Word> out;
  std::vector<u32> cur;
  auto rec = [&](auto&& self, u32 rem) -> void {
    if (rem == 0) {
      out.emplace_back(cur);
      return;
    }
    for (u32 first = 1; first <= rem; ++first) {
      cur.push_back(first);
      self(self, rem - first);
      cur.pop_back();
    }
  };
  rec(rec, w);
  return out;
}

inline std::vector<Word> words_up_to_weight(u32 w) {
  std::vector<Word> out;
  for (u32 i = 0; i <= w; ++i) {
    std::vector<Word> layer = words_of_weight(i);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

struct Homogeneity {
  bool homogeneous;
  std::optional<u64> weight;  // empty for the zero element
};

inline Homogeneity weight_of(const LinComb& x) {
  Homogeneity h{true, std::nullopt};
  for (const auto& [w, c] : x.terms()) {
    (void)c;
    if (!h.weight) {
      h.weight = w.weight();
    } else if (*h.weight != w.weight()) {
      return {false, std::nullopt};
    }
  }
  return h;
}

inline Homogeneity weight_of(const Tensor2& x) {
  Homogeneity h{true, std::nullopt};
  for (const auto& [k, c] : x.terms()) {
    (void)c;
    u64 w = k.first.weight() + k.second.weight();
    if (!h.weight) {
      h.weight = w;
    } else if (*h.weight != w) {
      return {false, std::nullopt};
    }
  }
  return h;
}

}  // namespace mzv
