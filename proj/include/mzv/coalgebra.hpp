#pragma once

// Coproducts, counit, and antipodes for the two Hopf structures on the word
// space.
//
// Shuffle side. The coproduct is defined by recursion on weight:
//   Delta(1)    = 1 (x) 1
//   Delta(x_1)  = 1 (x) x_1 + x_1 (x) 1
//   depth > 1, u = x_a v:
//     Delta(u)  = 1 (x) u + sum (a_u tr a_v) (x) (b_u sh b_v)
//     where a_u (x) b_u runs over Delta(x_a) without its 1 (x) x_a term and
//     a_v (x) b_v runs over all of Delta(v);
//   depth 1, w > 1: Delta(x_w) is solved out of the componentwise-shuffle
//     expansion of Delta(x_1) sh Delta(x_{w-1}) by subtracting the coproducts
//     of the depth-two words appearing in x_1 sh x_{w-1}.
// A second variant concatenates left factors on the deep step instead of
// using the triangle product; both are computed with independent memo tables
// so their agreement is a meaningful cross-check.
//
// The depth-one coproduct also has a closed evaluation
//   Delta(x_n) = 1 (x) x_n + sum over r >= 1 of x_r (x) P(r-1, n-r),
// where P(e, w) is the weight-w piece of the e-th shuffle power of the
// shuffle inverse of (1 + T), T being the sum of all letters with weight
// divisible by q-1.  This is the depth-grouped form of the bracket-operator
// sum: the depth-d layer of P(e, .) carries the binomial C(e-1+d, d) and the
// sign (-1)^d of the brackets, via the negative binomial series.
//
// Stuffle side. The coproduct is deconcatenation, the antipode has a
// blockwise-composition formula (alternating sum over ways to cut the word
// into consecutive blocks, stuffle-multiplying the blocks) and is also
// computed by the generic graded recursion for cross-checking.
//
// Depth-one shuffle coproducts are memoized in a CoproductCache that can be
// persisted:
//   header  "mzv.coproduct-cache/1 p=<p> k=<k> tag=<rule tag>"
//   record  "(<p>,<k>,<n>) -> <canonical tensor text>"
// A header whose format, field, or rule tag does not match invalidates the
// whole file (load returns 0 and keeps nothing).
//
// Engines are single-threaded and deterministic. For concurrent sweeps, give
// each worker its own engine (optionally seeded from the same cache file);
// results never depend on scheduling.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mzv/products.hpp"
#include "mzv/text_io.hpp"

namespace mzv {

// Coefficient of the empty word, extended linearly.
inline Scalar counit(const LinComb& x) { return x.coeff(Word()); }

// (counit (x) id) applied to a tensor, with the canonical identification.
inline LinComb contract_counit_left(const Tensor2& t) {
  LinComb r(t.field());
  for (const auto& [k, c] : t.terms())
    if (k.first.empty()) r.add_term(k.second, c);
  return r;
}

// (id (x) counit) applied to a tensor.
inline LinComb contract_counit_right(const Tensor2& t) {
  LinComb r(t.field());
  for (const auto& [k, c] : t.terms())
    if (k.second.empty()) r.add_term(k.first, c);
  return r;
}

// Deconcatenation: sum of prefix (x) suffix over all splits, empty ends
// included.
inline Tensor2 coproduct_stuffle(const FieldSpec& f, const Word& u) {
  Tensor2 r(f);
  const std::vector<u32>& l = u.letters();
  for (size_t i = 0; i <= l.size(); ++i) {
    Word a(std::vector<u32>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i)));
    Word b(std::vector<u32>(l.begin() + static_cast<std::ptrdiff_t>(i), l.end()));
    r.add_term(a, b, f.one());
  }
  return r;
}

inline Tensor2 coproduct_stuffle(const LinComb& x) {
  Tensor2 r(x.field());
  for (const auto& [w, c] : x.terms()) r.add_scaled_inplace(c, coproduct_stuffle(x.field(), w));
  return r;
}

// Persistent store of depth-one coproducts for one field.
class CoproductCache {
 public:
  static constexpr const char* kFormat = "mzv.coproduct-cache/1";
  // Bumped whenever the recursion or the canonical text form changes, so that
  // stale files are discarded instead of silently reused.
  static constexpr const char* kRuleTag = "triangle-r1";

  explicit CoproductCache(const FieldSpec& f) : f_(&f) {}

  const FieldSpec& field() const { return *f_; }
  size_t size() const { return t_.size(); }
  bool contains(u64 n) const { return t_.count(n) != 0; }
  const Tensor2& at(u64 n) const { return t_.at(n); }
  void put(u64 n, Tensor2 t) { t_.insert_or_assign(n, std::move(t)); }
  const std::map<u64, Tensor2>& entries() const { return t_; }

  // Largest m such that every weight 1..m is present (0 if 1 is missing).
  u64 contiguous_upper() const {
    u64 m = 0;
    while (t_.count(m + 1)) ++m;
    return m;
  }

  void save(std::ostream& out) const {
    out << header() << "\n";
    for (const auto& [n, t] : t_)
      out << "(" << f_->p() << "," << f_->k() << "," << n << ") -> " << canonical_serialize(t) << "\n";
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open cache file for writing: " + path);
    save(out);
    if (!out) throw std::runtime_error("failed while writing cache file: " + path);
  }

  // Returns the number of records accepted. A missing or mismatched header
  // invalidates the whole stream (returns 0, nothing kept). A record that is
  // present but malformed throws std::invalid_argument.
  size_t load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return 0;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header()) return 0;
    size_t accepted = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      size_t arrow = line.find(" -> ");
      if (arrow == std::string::npos || line.empty() || line[0] != '(')
        throw std::invalid_argument("cache record is not of the form \"(p,k,n) -> tensor\": " + line);
      size_t close = line.find(')');
      if (close == std::string::npos || close > arrow)
        throw std::invalid_argument("cache record key is not closed: " + line);
      u64 p = 0, k = 0, n = 0;
      parse_key(line.substr(1, close - 1), p, k, n);
      if (p != f_->p() || k != f_->k())
        throw std::invalid_argument("cache record field (" + std::to_string(p) + "," + std::to_string(k) +
                                    ") does not match the header field");
      if (n < 1 || n > kMaxLetter) throw std::invalid_argument("cache record weight out of range: " + std::to_string(n));
      put(n, parse_tensor2(*f_, line.substr(arrow + 4)));
      ++accepted;
    }
    return accepted;
  }

  // Missing file loads nothing (returns 0).
  size_t load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    return load(in);
  }

 private:
  std::string header() const {
    std::ostringstream h;
    h << kFormat << " p=" << f_->p() << " k=" << f_->k() << " tag=" << kRuleTag;
    return h.str();
  }

  static void parse_key(const std::string& s, u64& p, u64& k, u64& n) {
    size_t c1 = s.find(','), c2 = s.rfind(',');
    if (c1 == std::string::npos || c2 == c1) throw std::invalid_argument("cache record key needs three fields: (" + s + ")");
    try {
      p = std::stoull(s.substr(0, c1));
      k = std::stoull(s.substr(c1 + 1, c2 - c1 - 1));
      n = std::stoull(s.substr(c2 + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("cache record key is not numeric: (" + s + ")");
    }
  }

  const FieldSpec* f_;
  std::map<u64, Tensor2> t_;
};

class CoalgebraEngine {
 public:
  explicit CoalgebraEngine(const FieldSpec& f) : f_(&f), prod_(f), d1_(f) {}

  const FieldSpec& field() const { return *f_; }
  ProductEngine& products() { return prod_; }
  const CoproductCache& cache() const { return d1_; }

  // ---- shuffle-side coproduct -------------------------------------------

  const Tensor2& coproduct_shuffle(const Word& u) { return delta_word(u, /*concat_left=*/false); }

  Tensor2 coproduct_shuffle(const LinComb& x) {
    check_same_field(*f_, x.field());
    Tensor2 r(*f_);
    for (const auto& [w, c] : x.terms()) r.add_scaled_inplace(c, coproduct_shuffle(w));
    return r;
  }

  // Variant whose deep step concatenates left factors; agrees with
  // coproduct_shuffle as a theorem, computed independently here.
  const Tensor2& coproduct_shi(const Word& u) { return delta_word(u, /*concat_left=*/true); }

  // Closed evaluation of the depth-one coproduct (see file header).
  Tensor2 coproduct_depth_one_closed(u64 n) {
    if (n < 1) throw std::invalid_argument("coproduct_depth_one_closed: the letter weight must be positive");
    check_letter_bound(n);
    Tensor2 r(*f_);
    r.add_term(Word(), Word::letter(static_cast<u32>(n)), f_->one());
    for (u64 rr = 1; rr <= n; ++rr) {
      const LinComb& piece = inverse_power_piece(rr - 1, n - rr);
      for (const auto& [w, c] : piece.terms()) r.add_term(Word::letter(static_cast<u32>(rr)), w, c);
    }
    return r;
  }

  // ---- componentwise tensor products ------------------------------------

  // (a (x) b)(c (x) d) = (a sh c) (x) (b sh d), bilinearly.
  Tensor2 tensor_shuffle(const Tensor2& s, const Tensor2& t) {
    return tensor_componentwise(s, t, &ProductEngine::shuffle_words);
  }
  // Left slot triangle, right slot shuffle.
  Tensor2 tensor_triangle(const Tensor2& s, const Tensor2& t) {
    return tensor_componentwise(s, t, &ProductEngine::triangle_words);
  }
  // Both slots stuffle ... the right slot of the deconcatenation coalgebra
  // multiplies with the same product as the left.
  Tensor2 tensor_stuffle(const Tensor2& s, const Tensor2& t) {
    Tensor2 r(*f_);
    for (const auto& [ks, cs] : s.terms())
      for (const auto& [kt, ct] : t.terms()) {
        LinComb left = prod_.stuffle_words(ks.first, kt.first);
        LinComb right = prod_.stuffle_words(ks.second, kt.second);
        r.add_scaled_inplace(f_->mul(cs, ct), tensor_product(left, right));
      }
    return r;
  }

  // ---- antipodes ---------------------------------------------------------

  // Graded recursion: S(1) = 1 and, for u of positive weight,
  // S(u) = -u - sum S(a) sh b over the terms of Delta(u) with both factors
  // of positive weight.
  const LinComb& antipode_shuffle(const Word& u) {
    if (auto it = antish_.find(u.letters()); it != antish_.end()) return it->second;
    LinComb s(*f_);
    if (u.empty()) {
      s = LinComb::one(*f_);
    } else {
      const Tensor2 du = coproduct_shuffle(u);
      s = scale(f_->neg(f_->one()), LinComb::of_word(*f_, u));
      for (const auto& [k, c] : du.terms()) {
        if (k.first.empty() || k.second.empty()) continue;
        s.add_scaled_inplace(f_->neg(c), prod_.shuffle(antipode_shuffle(k.first), LinComb::of_word(*f_, k.second)));
      }
    }
    return antish_.emplace(u.letters(), std::move(s)).first->second;
  }

  LinComb antipode_shuffle(const LinComb& x) {
    check_same_field(*f_, x.field());
    LinComb r(*f_);
    for (const auto& [w, c] : x.terms()) r.add_scaled_inplace(c, antipode_shuffle(w));
    return r;
  }

  // Blockwise-composition formula: sum over the 2^(depth-1) ways to cut the
  // word into consecutive nonempty blocks of (-1)^(number of blocks) times
  // the stuffle product of the blocks.
  const LinComb& antipode_stuffle(const Word& u) {
    if (auto it = antist_.find(u.letters()); it != antist_.end()) return it->second;
    LinComb total(*f_);
    if (u.empty()) {
      total = LinComb::one(*f_);
    } else {
      const std::vector<u32>& l = u.letters();
      size_t n = l.size();
      if (n - 1 >= 63) throw std::invalid_argument("antipode block sum has 2^(depth-1) terms; depth is too large");
      for (u64 mask = 0; mask < (u64(1) << (n - 1)); ++mask) {
        LinComb acc(*f_);
        size_t start = 0;
        u32 blocks = 0;
        for (size_t i = 0; i < n; ++i) {
          bool cut = (i + 1 == n) || ((mask >> i) & 1);
          if (!cut) continue;
          Word block(std::vector<u32>(l.begin() + static_cast<std::ptrdiff_t>(start),
                                      l.begin() + static_cast<std::ptrdiff_t>(i + 1)));
          acc = (blocks == 0) ? LinComb::of_word(*f_, block) : prod_.stuffle(acc, LinComb::of_word(*f_, block));
          ++blocks;
          start = i + 1;
        }
        Scalar sign = (blocks & 1) ? f_->neg(f_->one()) : f_->one();
        total.add_scaled_inplace(sign, acc);
      }
    }
    return antist_.emplace(u.letters(), std::move(total)).first->second;
  }

  LinComb antipode_stuffle(const LinComb& x) {
    check_same_field(*f_, x.field());
    LinComb r(*f_);
    for (const auto& [w, c] : x.terms()) r.add_scaled_inplace(c, antipode_stuffle(w));
    return r;
  }

  // Same antipode through the graded recursion with deconcatenation and the
  // stuffle product; kept independent of the block formula for cross-checks.
  const LinComb& antipode_stuffle_recursive(const Word& u) {
    if (auto it = antistr_.find(u.letters()); it != antistr_.end()) return it->second;
    LinComb s(*f_);
    if (u.empty()) {
      s = LinComb::one(*f_);
    } else {
      const std::vector<u32>& l = u.letters();
      s = scale(f_->neg(f_->one()), LinComb::of_word(*f_, u));
      for (size_t i = 1; i < l.size(); ++i) {
        Word a(std::vector<u32>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i)));
        Word b(std::vector<u32>(l.begin() + static_cast<std::ptrdiff_t>(i), l.end()));
        s.add_scaled_inplace(f_->neg(f_->one()), prod_.stuffle(antipode_stuffle_recursive(a), LinComb::of_word(*f_, b)));
      }
    }
    return antistr_.emplace(u.letters(), std::move(s)).first->second;
  }

  // ---- cache persistence --------------------------------------------------

  void save_cache(std::ostream& out) const { d1_.save(out); }
  void save_cache_file(const std::string& path) const { d1_.save_file(path); }

  // Loading resets every derived memo so later results are computed from the
  // loaded depth-one entries.
  size_t load_cache(std::istream& in) {
    size_t n = d1_.load(in);
    if (n > 0) reset_derived();
    return n;
  }
  size_t load_cache_file(const std::string& path) {
    size_t n = d1_.load_file(path);
    if (n > 0) reset_derived();
    return n;
  }

  // Ensures every depth-one coproduct of weight <= n is present.
  void ensure_depth_one(u64 n) {
    if (n < 1) return;
    check_letter_bound(n);
    for (u64 w = d1_next_; w <= n; ++w) {
      if (!d1_.contains(w)) d1_.put(w, compute_depth_one(w, /*concat_left=*/false));
      d1_next_ = w + 1;
    }
  }

 private:
  using WordKey = std::vector<u32>;

  Tensor2 tensor_componentwise(const Tensor2& s, const Tensor2& t, LinComb (ProductEngine::*left_op)(const Word&, const Word&)) {
    check_same_field(*f_, s.field());
    check_same_field(*f_, t.field());
    Tensor2 r(*f_);
    for (const auto& [ks, cs] : s.terms())
      for (const auto& [kt, ct] : t.terms()) {
        LinComb left = (prod_.*left_op)(ks.first, kt.first);
        LinComb right = prod_.shuffle_words(ks.second, kt.second);
        r.add_scaled_inplace(f_->mul(cs, ct), tensor_product(left, right));
      }
    return r;
  }

  const Tensor2& depth_one(u64 n, bool concat_left) {
    if (!concat_left) {
      ensure_depth_one(n);
      return d1_.at(n);
    }
    check_letter_bound(n);
    for (u64 w = d1shi_next_; w <= n; ++w) {
      if (!d1shi_.count(w)) d1shi_.emplace(w, compute_depth_one(w, /*concat_left=*/true));
      d1shi_next_ = w + 1;
    }
    return d1shi_.at(n);
  }

  Tensor2 compute_depth_one(u64 w, bool concat_left) {
    Tensor2 r(*f_);
    if (w == 1) {
      r.add_term(Word(), Word::letter(1), f_->one());
      r.add_term(Word::letter(1), Word(), f_->one());
      return r;
    }
    const Tensor2 d1 = depth_one(1, concat_left);
    const Tensor2 dw1 = depth_one(w - 1, concat_left);
    r = tensor_shuffle(d1, dw1);
    Scalar minus = f_->neg(f_->one());
    r.add_scaled_inplace(minus, delta_two_letters(1, static_cast<u32>(w - 1), concat_left));
    r.add_scaled_inplace(minus, delta_two_letters(static_cast<u32>(w - 1), 1, concat_left));
    for (u64 j = 1; j < w; ++j) {
      u32 c = chen_delta(1, w - 1, static_cast<i64>(j), *f_);
      if (c == 0) continue;
      r.add_scaled_inplace(f_->neg(f_->from_int(c)),
                           delta_two_letters(static_cast<u32>(w - j), static_cast<u32>(j), concat_left));
    }
    return r;
  }

  Tensor2 delta_two_letters(u32 a, u32 b, bool concat_left) {
    return deep_expand(a, Word::letter(b), concat_left);
  }

  const Tensor2& delta_word(const Word& u, bool concat_left) {
    auto& memo = concat_left ? deepshi_ : deep_;
    if (auto it = memo.find(u.letters()); it != memo.end()) return it->second;
    Tensor2 r(*f_);
    if (u.empty()) {
      r.add_term(Word(), Word(), f_->one());
    } else if (u.depth() == 1) {
      r = depth_one(u.head(), concat_left);
    } else {
      r = deep_expand(u.head(), u.tail(), concat_left);
    }
    return memo.emplace(u.letters(), std::move(r)).first->second;
  }

  // 1 (x) u plus the combined terms from the head's coproduct (left factor
  // forced away from 1) and the tail's full coproduct.
  Tensor2 deep_expand(u32 head, const Word& tail, bool concat_left) {
    const Tensor2 dh = depth_one(head, concat_left);
    const Tensor2 dt = delta_word(tail, concat_left);
    std::vector<u32> full;
    full.reserve(tail.depth() + 1);
    full.push_back(head);
    full.insert(full.end(), tail.letters().begin(), tail.letters().end());
    Tensor2 r(*f_);
    r.add_term(Word(), Word(std::move(full)), f_->one());
    for (const auto& [kh, ch] : dh.terms()) {
      if (kh.first.empty()) continue;
      for (const auto& [kt, ct] : dt.terms()) {
        Scalar s = f_->mul(ch, ct);
        LinComb right = prod_.shuffle_words(kh.second, kt.second);
        if (concat_left) {
          Word left = concat(kh.first, kt.first);
          for (const auto& [rw, rc] : right.terms()) r.add_term(left, rw, f_->mul(s, rc));
        } else {
          LinComb left = prod_.triangle_words(kh.first, kt.first);
          r.add_scaled_inplace(s, tensor_product(left, right));
        }
      }
    }
    return r;
  }

  // Weight-graded pieces of the shuffle inverse of 1 + T, where T is the sum
  // of the letters whose weight is a positive multiple of q-1:
  //   piece(0) = 1,  piece(w) = - sum over those letters i <= w of
  //                              x_i sh piece(w - i).
  const LinComb& inverse_piece(u64 w) {
    if (inv_.empty()) inv_.push_back(LinComb::one(*f_));
    u64 step = f_->q() - 1;
    while (inv_.size() <= w) {
      u64 cw = inv_.size();
      LinComb piece(*f_);
      for (u64 i = step; i <= cw; i += step)
        piece.add_inplace(prod_.shuffle_word_lincomb(Word::letter(static_cast<u32>(i)), inv_[cw - i]));
      inv_.push_back(scale(f_->neg(f_->one()), piece));
    }
    return inv_[w];
  }

  // Weight-w piece of the e-th shuffle power of the inverse above.
  const LinComb& inverse_power_piece(u64 e, u64 w) {
    if (invpow_.size() <= e) invpow_.resize(e + 1);
    if (e > 0) inverse_power_piece(e - 1, w);
    inverse_piece(w);
    auto& row = invpow_[e];
    while (row.size() <= w) {
      u64 cw = row.size();
      LinComb piece(*f_);
      if (e == 0) {
        if (cw == 0) piece = LinComb::one(*f_);
      } else {
        for (u64 i = 0; i <= cw; ++i) piece.add_inplace(prod_.shuffle(invpow_[e - 1][cw - i], inv_[i]));
      }
      row.push_back(std::move(piece));
    }
    return row[w];
  }

  void reset_derived() {
    deep_.clear();
    deepshi_.clear();
    antish_.clear();
    antist_.clear();
    antistr_.clear();
    d1_next_ = d1_.contiguous_upper() + 1;
  }

  const FieldSpec* f_;
  ProductEngine prod_;
  CoproductCache d1_;
  u64 d1_next_ = 1;
  std::map<u64, Tensor2> d1shi_;
  u64 d1shi_next_ = 1;
  std::map<WordKey, Tensor2> deep_, deepshi_;
  std::map<WordKey, LinComb> antish_, antist_, antistr_;
  std::vector<LinComb> inv_;
  std::vector<std::vector<LinComb>> invpow_;
};

}  // namespace mzv
