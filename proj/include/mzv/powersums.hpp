#pragma once

// Power sums over the monic polynomials of F_q[θ], their degree-truncated
// variants, the Carlitz factorials and polylogarithm sums, the two-pole
// partial-fraction identity, and the dimension/basis enumerators for the
// conjectural weight filtration.
//
// Conventions: sums over an empty index range are 0, products over an empty
// tuple are 1. Enumeration work is metered: every computation that would touch
// more than `budget` monic polynomials (or build a polynomial of larger
// degree) is refused with budget_error before it starts.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mzv/poly.hpp"
#include "mzv/words.hpp"

namespace mzv {

// Exponent tuples share the Word representation: positive entries, weight =
// sum, depth = length. Here the entries are powers, not alphabet letters.
using IndexTuple = Word;

inline constexpr u64 kDefaultBudget = 1'000'000;

class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// q^d if it stays within `cap`, otherwise nullopt (covers u64 overflow).
inline std::optional<u64> pow_within(u64 q, u64 d, u64 cap) {
  u64 r = 1;
  for (u64 i = 0; i < d; ++i) {
    if (r > cap / q) return std::nullopt;
    r *= q;
    if (r > cap) return std::nullopt;
  }
  return r;
}

}  // namespace detail

// Memoizes monic enumerations, power sums and Carlitz sums for one field. Not
// thread safe; parallel sweeps use one engine per worker.
class PowerSumEngine {
 public:
  explicit PowerSumEngine(const FieldSpec& f, u64 budget = kDefaultBudget) : f_(&f), budget_(budget) {}

  const FieldSpec& field() const { return *f_; }
  u64 budget() const { return budget_; }
  u64 used() const { return used_; }

  // All q^d monic polynomials of degree d; entry i has lower coefficients
  // given by the base-q digits of i (packed scalar values).
  const std::vector<Poly>& monic_polys(u64 d) {
    auto it = monic_.find(d);
    if (it != monic_.end()) return it->second;
    u64 q = f_->q();
    auto count = detail::pow_within(q, d, ~u64(0));
    if (!count)
      throw budget_error("monic_polys: " + std::to_string(q) + "^" + std::to_string(d) +
                         " polynomials overflow a 64-bit count and exceed budget " + std::to_string(budget_));
    if (*count > budget_)
      throw budget_error("monic_polys: " + std::to_string(*count) + " polynomials of degree " + std::to_string(d) +
                         " exceed budget " + std::to_string(budget_));
    charge(*count, "monic_polys");
    std::vector<Poly> out;
    out.reserve(*count);
    for (u64 i = 0; i < *count; ++i) {
      std::vector<Scalar> c(d + 1, f_->zero());
      u64 v = i;
      for (u64 j = 0; j < d; ++j) {
        c[j] = f_->from_packed(v % q);
        v /= q;
      }
      c[d] = f_->one();
      out.push_back(Poly::from_coeffs(*f_, std::move(c)));
    }
    return monic_.emplace(d, std::move(out)).first->second;
  }

  // S_d(s) = sum over tuples (a_1,...,a_r) of monic polynomials with
  // d = deg a_1 > ... > deg a_r >= 0 of 1/(a_1^{s_1} ... a_r^{s_r}),
  // computed as S_d(s_1) * S_{<d}(s_2,...,s_r).
  RatFunc S(i64 d, const IndexTuple& s) {
    if (s.empty()) return RatFunc::one(*f_);
    if (d < 0) return RatFunc::zero(*f_);
    Key k{d, s.letters()};
    auto it = sd_.find(k);
    if (it != sd_.end()) return it->second;
    RatFunc r(*f_);
    if (s.depth() == 1) {
      for (const Poly& a : monic_polys(static_cast<u64>(d)))
        r = r + RatFunc(Poly::one(*f_), poly_pow(a, s.head()));
    } else {
      r = S(d, IndexTuple(std::vector<u32>{s.head()})) * Slt(d, s.tail());
    }
    return sd_.emplace(std::move(k), std::move(r)).first->second;
  }

  // S_{<d}(s) = sum over 0 <= i < d of S_i(s); 1 on the empty tuple.
  RatFunc Slt(i64 d, const IndexTuple& s) {
    if (s.empty()) return RatFunc::one(*f_);
    if (d <= 0) return RatFunc::zero(*f_);
    Key k{d, s.letters()};
    auto it = slt_.find(k);
    if (it != slt_.end()) return it->second;
    RatFunc r = Slt(d - 1, s) + S(d - 1, s);
    return slt_.emplace(std::move(k), std::move(r)).first->second;
  }

  // Literal definition of S_d(s): enumerate every strictly decreasing degree
  // chain and every tuple of monic polynomials along it.
  RatFunc S_enumerative(i64 d, const IndexTuple& s) {
    if (s.empty()) return RatFunc::one(*f_);
    if (d < 0) return RatFunc::zero(*f_);
    RatFunc total(*f_);
    std::vector<u64> chain{static_cast<u64>(d)};
    enum_chains(s, chain, total);
    return total;
  }

  // ell(0) = 1, ell(d) = prod over 1 <= i <= d of (θ - θ^{q^i}).
  const Poly& ell(u64 d) {
    if (ell_.empty()) ell_.emplace(0, Poly::one(*f_));
    while (ell_.size() <= d) {
      u64 i = ell_.size();
      auto e = detail::pow_within(f_->q(), i, budget_);
      if (!e)
        throw budget_error("ell: factor degree q^" + std::to_string(i) + " exceeds budget " + std::to_string(budget_));
      Poly factor = Poly::theta(*f_) - Poly::monomial(*f_, *e, f_->one());
      ell_.emplace(i, ell_.at(i - 1) * factor);
    }
    return ell_.at(d);
  }

  // Si_d(s) = sum over d = d_1 > ... > d_n >= 0 of 1/(ell(d_1)^{s_1} ...
  // ell(d_n)^{s_n}), computed as ell(d)^{-s_1} * Si_{<d}(s_2,...,s_n).
  RatFunc Si(i64 d, const IndexTuple& s) {
    if (s.empty()) return RatFunc::one(*f_);
    if (d < 0) return RatFunc::zero(*f_);
    Key k{d, s.letters()};
    auto it = si_.find(k);
    if (it != si_.end()) return it->second;
    RatFunc r = RatFunc(Poly::one(*f_), poly_pow(ell(static_cast<u64>(d)), s.head())) * Silt(d, s.tail());
    return si_.emplace(std::move(k), std::move(r)).first->second;
  }

  // Si_{<d}(s) = sum over 0 <= i < d of Si_i(s); 1 on the empty tuple.
  RatFunc Silt(i64 d, const IndexTuple& s) {
    if (s.empty()) return RatFunc::one(*f_);
    if (d <= 0) return RatFunc::zero(*f_);
    Key k{d, s.letters()};
    auto it = silt_.find(k);
    if (it != silt_.end()) return it->second;
    RatFunc r = Silt(d - 1, s) + Si(d - 1, s);
    return silt_.emplace(std::move(k), std::move(r)).first->second;
  }

 private:
  using Key = std::pair<i64, std::vector<u32>>;

  void charge(u64 n, const char* what) {
    used_ += n;
    if (used_ > budget_)
      throw budget_error(std::string(what) + ": " + std::to_string(used_) +
                         " enumerated polynomials exceed budget " + std::to_string(budget_));
  }

  void enum_chains(const IndexTuple& s, std::vector<u64>& chain, RatFunc& total) {
    if (chain.size() == s.depth()) {
      u64 tuples = 1;
      for (u64 di : chain) {
        auto c = detail::pow_within(f_->q(), di, budget_);
        if (!c || __builtin_mul_overflow(tuples, *c, &tuples))
          throw budget_error("power sum enumeration exceeds budget " + std::to_string(budget_));
      }
      charge(tuples, "power sum enumeration");
      accumulate_tuples(s, chain, 0, Poly::one(*f_), total);
      return;
    }
    u64 prev = chain.back();
    u64 remaining = s.depth() - chain.size();
    if (prev < remaining) return;
    for (u64 di = prev - 1;; --di) {
      if (di + 1 >= remaining) {
        chain.push_back(di);
        enum_chains(s, chain, total);
        chain.pop_back();
      }
      if (di == 0) break;
    }
  }

  void accumulate_tuples(const IndexTuple& s, const std::vector<u64>& chain, size_t idx, const Poly& den,
                         RatFunc& total) {
    if (idx == chain.size()) {
      total = total + RatFunc(Poly::one(*f_), den);
      return;
    }
    for (const Poly& a : monic_polys(chain[idx]))
      accumulate_tuples(s, chain, idx + 1, den * poly_pow(a, s.letters()[idx]), total);
  }

  const FieldSpec* f_;
  u64 budget_;
  u64 used_ = 0;
  std::map<u64, std::vector<Poly>> monic_;
  std::map<u64, Poly> ell_;
  std::map<Key, RatFunc> sd_, slt_, si_, silt_;
};

inline std::vector<Poly> monic_polys(const FieldSpec& f, u64 d, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.monic_polys(d);
}

inline RatFunc power_sum_S(const FieldSpec& f, i64 d, const IndexTuple& s, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.S(d, s);
}

inline RatFunc power_sum_S_enumerative(const FieldSpec& f, i64 d, const IndexTuple& s, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.S_enumerative(d, s);
}

inline RatFunc power_sum_Slt(const FieldSpec& f, i64 d, const IndexTuple& s, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.Slt(d, s);
}

inline Poly ell(const FieldSpec& f, u64 d, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.ell(d);
}

inline RatFunc carlitz_sum_Si(const FieldSpec& f, i64 d, const IndexTuple& s, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.Si(d, s);
}

inline RatFunc carlitz_sum_Silt(const FieldSpec& f, i64 d, const IndexTuple& s, u64 budget = kDefaultBudget) {
  PowerSumEngine e(f, budget);
  return e.Silt(d, s);
}

// Verifies 1/(a^r b^s) = sum over i+j = r+s, i,j >= 1 of
//   nabla^j_s / ((a-b)^j a^i) + nabla^j_r / ((b-a)^j b^i),
// where nabla^j_r = (-1)^r binom(j-1, r-1). Requires a != b.
inline bool check_partial_fraction(const Poly& a, const Poly& b, u64 r, u64 s) {
  check_same_field(a.field(), b.field());
  const FieldSpec& f = a.field();
  if (r < 1 || s < 1) throw std::invalid_argument("check_partial_fraction: exponents must be positive");
  if (a == b) throw std::invalid_argument("check_partial_fraction: requires a != b");
  RatFunc lhs(Poly::one(f), poly_pow(a, r) * poly_pow(b, s));
  Poly ab = a - b, ba = b - a;
  RatFunc rhs(f);
  for (u64 j = 1; j <= r + s - 1; ++j) {
    u64 i = r + s - j;
    Scalar cs = f.from_int(nabla(j, s, f.p()));
    if (!f.is_zero(cs)) rhs = rhs + scale(cs, RatFunc(Poly::one(f), poly_pow(ab, j) * poly_pow(a, i)));
    Scalar cr = f.from_int(nabla(j, r, f.p()));
    if (!f.is_zero(cr)) rhs = rhs + scale(cr, RatFunc(Poly::one(f), poly_pow(ba, j) * poly_pow(b, i)));
  }
  return lhs == rhs;
}

// d(0) = 1; d(w) = 2^{w-1} for 1 <= w <= q-1; d(q) = 2^{q-1} - 1;
// d(w) = sum over 1 <= i <= q of d(w-i) for w > q.
inline u64 hoffman_dimension(u64 q, u64 w) {
  if (q < 2) throw std::invalid_argument("hoffman_dimension: q must be at least 2");
  if (w == 0) return 1;
  auto two_pow = [](u64 e) {
    if (e >= 64) throw std::overflow_error("hoffman_dimension exceeds 64 bits");
    return u64(1) << e;
  };
  if (w <= q - 1) return two_pow(w - 1);
  if (w == q) return two_pow(q - 1) - 1;
  std::vector<u64> d(w + 1);
  for (u64 v = 0; v <= w; ++v) {
    if (v == 0)
      d[v] = 1;
    else if (v <= q - 1)
      d[v] = two_pow(v - 1);
    else if (v == q)
      d[v] = two_pow(q - 1) - 1;
    else {
      u64 acc = 0;
      for (u64 i = 1; i <= q; ++i)
        if (__builtin_add_overflow(acc, d[v - i], &acc)) throw std::overflow_error("hoffman_dimension exceeds 64 bits");
      d[v] = acc;
    }
  }
  return d[w];
}

// All weight-w tuples (s_1,...,s_r) with s_i <= q for i < r and s_r < q, in
// lexicographic order; the empty tuple for w = 0.
inline std::vector<IndexTuple> hoffman_basis(u64 q, u64 w, u64 budget = kDefaultBudget) {
  if (q < 2) throw std::invalid_argument("hoffman_basis: q must be at least 2");
  u64 count = hoffman_dimension(q, w);
  if (count > budget)
    throw budget_error("hoffman_basis: " + std::to_string(count) + " tuples exceed budget " + std::to_string(budget));
  std::vector<IndexTuple> out;
  std::vector<u32> cur;
  auto rec = [&](auto&& self, u64 rem) -> void {
    if (rem == 0) {
      out.push_back(IndexTuple(cur));
      return;
    }
    for (u64 s = 1; s <= q && s <= rem; ++s) {
      if (s == rem && s >= q) continue;  // the final entry must be < q
      cur.push_back(static_cast<u32>(s));
      self(self, rem - s);
      cur.pop_back();
    }
  };
  rec(rec, w);
  return out;
}

}  // namespace mzv
