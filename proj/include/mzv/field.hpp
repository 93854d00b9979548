#pragma once

// Exact arithmetic in F_p and F_q = F_{p^k}, binomial coefficients mod p,
// and the structure coefficients used by the word products and coproducts.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzv {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Letters and weights are capped; larger inputs are rejected, never wrapped.
inline constexpr u64 kMaxLetter = 0x7fffffffULL;

// Element of F_q. For k=1 the value is a residue in [0,p); for k>1 it packs
// the coefficient vector (c_0,...,c_{k-1}) of F_p[x]/(m(x)) as sum c_i p^i.
struct Scalar {
  u64 v = 0;
  friend bool operator==(Scalar a, Scalar b) { return a.v == b.v; }
  friend bool operator!=(Scalar a, Scalar b) { return a.v != b.v; }
  friend bool operator<(Scalar a, Scalar b) { return a.v < b.v; }
};

inline bool is_prime_u32(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class FieldSpec {
 public:
  explicit FieldSpec(u32 p, u32 k = 1) : p_(p), k_(k) {
    if (!is_prime_u32(p_)) throw std::invalid_argument("FieldSpec: p = " + std::to_string(p_) + " is not prime");
    if (k_ < 1) throw std::invalid_argument("FieldSpec: k must be >= 1");
    q_ = 1;
    for (u32 i = 0; i < k_; ++i) {
      if (q_ > (u64(1) << 62) / p_) throw std::invalid_argument("FieldSpec: p^k overflows");
      q_ *= p_;
    }
    if (k_ > 1) {
      if (q_ > 4096) throw std::invalid_argument("FieldSpec: extension field too large for table arithmetic");
      find_modulus();
      build_tables();
    }
  }

  // Factors q as p^k with p prime; rejects anything that is not a prime power.
  static FieldSpec from_order(u64 q) {
    if (q < 2) throw std::invalid_argument("FieldSpec: field order must be >= 2");
    u64 p = q;
    for (u64 d = 2; d * d <= q; ++d)
      if (q % d == 0) { p = d; break; }
    u32 k = 0;
    u64 t = q;
    while (t > 1) {
      if (t % p != 0) throw std::invalid_argument("FieldSpec: " + std::to_string(q) + " is not a prime power");
      t /= p;
      ++k;
    }
    return FieldSpec(static_cast<u32>(p), k);
  }

  u32 p() const { return p_; }
  u32 k() const { return k_; }
  u64 q() const { return q_; }
  bool same_field(const FieldSpec& o) const { return p_ == o.p_ && k_ == o.k_; }

  // Modulus coefficients (c_0,...,c_k), low to high, monic; empty for k=1.
  const std::vector<u32>& modulus() const { return modulus_; }

  std::string modulus_text() const {
    if (k_ == 1) return "";
    std::string s;
    for (u32 d = k_ + 1; d-- > 0;) {
      u32 c = modulus_[d];
      if (c == 0) continue;
      if (!s.empty()) s += " + ";
      if (c != 1 || d == 0) s += std::to_string(c);
      if (d >= 1) {
        s += "x";
        if (d >= 2) s += "^" + std::to_string(d);
      }
    }
    return s;
  }

  Scalar zero() const { return Scalar{0}; }
  Scalar one() const { return Scalar{1}; }
  bool is_zero(Scalar a) const { return a.v == 0; }

  // Embeds an integer via reduction mod p into the prime subfield.
  Scalar from_int(i64 n) const {
    i64 r = n % static_cast<i64>(p_);
    if (r < 0) r += p_;
    return Scalar{static_cast<u64>(r)};
  }

  // Validates a packed representation: all base-p digits < p and value < q.
  Scalar from_packed(u64 v) const {
    if (v >= q_) throw std::invalid_argument("Scalar: packed value " + std::to_string(v) + " out of range for field of order " + std::to_string(q_));
    return Scalar{v};
  }

  Scalar add(Scalar a, Scalar b) const {
    if (k_ == 1) {
      u64 s = a.v + b.v;
      return Scalar{s >= p_ ? s - p_ : s};
    }
    u64 r = 0, m = 1;
    u64 x = a.v, y = b.v;
    for (u32 i = 0; i < k_; ++i) {
      u64 d = (x % p_) + (y % p_);
      if (d >= p_) d -= p_;
      r += d * m;
      m *= p_;
      x /= p_;
      y /= p_;
    }
    return Scalar{r};
  }

  Scalar neg(Scalar a) const {
    if (k_ == 1) return Scalar{a.v == 0 ? 0 : p_ - a.v};
    u64 r = 0, m = 1, x = a.v;
    for (u32 i = 0; i < k_; ++i) {
      u64 d = x % p_;
      r += (d == 0 ? 0 : p_ - d) * m;
      m *= p_;
      x /= p_;
    }
    return Scalar{r};
  }

  Scalar sub(Scalar a, Scalar b) const { return add(a, neg(b)); }

  Scalar mul(Scalar a, Scalar b) const {
    if (k_ == 1) return Scalar{(a.v * b.v) % p_};
    return Scalar{mul_table_[a.v * q_ + b.v]};
  }

  Scalar inv(Scalar a) const {
    if (a.v == 0) throw std::domain_error("Scalar: division by zero");
    if (k_ == 1) return pow(a, static_cast<i64>(p_) - 2);
    return Scalar{inv_table_[a.v]};
  }

  Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }

  Scalar pow(Scalar a, i64 e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Scalar r = one(), base = a;
    u64 n = static_cast<u64>(e);
    while (n > 0) {
      if (n & 1) r = mul(r, base);
      base = mul(base, base);
      n >>= 1;
    }
    return r;
  }

 private:
  u32 p_, k_;
  u64 q_;
  std::vector<u32> modulus_;
  std::vector<u64> mul_table_;
  std::vector<u64> inv_table_;

  static std::vector<u32> poly_mod(std::vector<u32> a, const std::vector<u32>& m, u32 p) {
    // Reduces a by the monic polynomial m over F_p; coefficients low to high.
    while (a.size() >= m.size()) {
      u32 lead = a.back();
      if (lead != 0) {
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
          u64 t = a[off + i] + u64(p - (u64(lead) * m[i]) % p);
          a[off + i] = static_cast<u32>(t % p);
        }
      }
      a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }

  static bool poly_divides(const std::vector<u32>& d, std::vector<u32> a, u32 p) {
    return poly_mod(std::move(a), d, p).empty();
  }

  void find_modulus() {
    // Lexicographically smallest monic irreducible of degree k over F_p,
    // comparing coefficient vectors (c_0,...,c_{k-1}) from c_0 upward.
    std::vector<u32> c(k_, 0);
    for (;;) {
      std::vector<u32> f(c);
      f.push_back(1);
      if (is_irreducible(f)) {
        modulus_ = f;
        return;
      }
      u32 i = k_;
      while (i-- > 0) {
        if (++c[i] < p_) break;
        c[i] = 0;
        if (i == 0) throw std::logic_error("FieldSpec: no irreducible polynomial found");
      }
    }
  }

  bool is_irreducible(const std::vector<u32>& f) const {
    u32 deg = static_cast<u32>(f.size()) - 1;
    for (u32 d = 1; 2 * d <= deg; ++d) {
      std::vector<u32> g(d + 1, 0);
      g[d] = 1;
      u64 total = 1;
      for (u32 i = 0; i < d; ++i) total *= p_;
      for (u64 idx = 0; idx < total; ++idx) {
        u64 t = idx;
        for (u32 i = d; i-- > 0;) {
          g[i] = static_cast<u32>(t % p_);
          t /= p_;
        }
        if (poly_divides(g, f, p_)) return false;
      }
    }
    return true;
  }

  std::vector<u32> unpack(u64 v) const {
    std::vector<u32> c(k_);
    for (u32 i = 0; i < k_; ++i) {
      c[i] = static_cast<u32>(v % p_);
      v /= p_;
    }
    return c;
  }

  static u64 pack(const std::vector<u32>& c, u32 p, u32 k) {
    u64 v = 0;
    for (u32 i = k; i-- > 0;) v = v * p + c[i];
    return v;
  }

  void build_tables() {
    mul_table_.assign(q_ * q_, 0);
    for (u64 a = 0; a < q_; ++a) {
      std::vector<u32> ca = unpack(a);
      for (u64 b = a; b < q_; ++b) {
        std::vector<u32> cb = unpack(b);
        std::vector<u32> prod(2 * k_ - 1, 0);
        for (u32 i = 0; i < k_; ++i)
          for (u32 j = 0; j < k_; ++j)
            prod[i + j] = static_cast<u32>((prod[i + j] + u64(ca[i]) * cb[j]) % p_);
        std::vector<u32> red = poly_mod(std::move(prod), modulus_, p_);
        red.resize(k_, 0);
        u64 v = pack(red, p_, k_);
        mul_table_[a * q_ + b] = v;
        mul_table_[b * q_ + a] = v;
      }
    }
    inv_table_.assign(q_, 0);
    for (u64 a = 1; a < q_; ++a) {
      for (u64 b = 1; b < q_; ++b)
        if (mul_table_[a * q_ + b] == 1) {
          inv_table_[a] = b;
          break;
        }
      if (inv_table_[a] == 0) throw std::logic_error("FieldSpec: element without inverse; modulus not irreducible");
    }
  }
};

// binom(a,b) mod p by Lucas' theorem: product of digitwise binomials base p.
inline u32 lucas_binomial(u64 a, u64 b, u32 p) {
  if (b > a) return 0;
  u64 r = 1;
  while (b > 0 || a > 0) {
    u64 ad = a % p, bd = b % p;
    a /= p;
    b /= p;
    if (bd > ad) return 0;
    if (bd > ad - bd) bd = ad - bd;
    u64 num = 1, den = 1;
    for (u64 t = 1; t <= bd; ++t) {
      num = num * ((ad - bd + t) % p) % p;
      den = den * (t % p) % p;
    }
    // den is invertible mod p: t < p for every factor
    u64 dinv = 1, e = p - 2, base = den;
    while (e > 0) {
      if (e & 1) dinv = dinv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    r = r * num % p * dinv % p;
  }
  return static_cast<u32>(r);
}

// (-1)^r binom(j-1, r-1) mod p, for j,r >= 1.
inline u32 nabla(u64 j, u64 r, u32 p) {
  u32 b = lucas_binomial(j - 1, r - 1, p);
  return (r & 1) ? (p - b) % p : b;
}

// Sum over lambda in F_q^* of lambda^{-j}: p-1 when (q-1) | j, else 0.
inline u32 delta_j(u64 j, const FieldSpec& f) {
  return j % (f.q() - 1) == 0 ? f.p() - 1 : 0;
}

// Chen coefficient: (-1)^{a-1} binom(i-1,a-1) + (-1)^{b-1} binom(i-1,b-1)
// when (q-1) | i and 0 < i < a+b; zero otherwise. Symmetric in (a,b).
inline u32 chen_delta(u64 a, u64 b, i64 i, const FieldSpec& f) {
  if (i <= 0 || static_cast<u64>(i) >= a + b) return 0;
  u64 iu = static_cast<u64>(i);
  if (iu % (f.q() - 1) != 0) return 0;
  u32 p = f.p();
  u32 t1 = lucas_binomial(iu - 1, a - 1, p);
  if ((a - 1) & 1) t1 = (p - t1) % p;
  u32 t2 = lucas_binomial(iu - 1, b - 1, p);
  if ((b - 1) & 1) t2 = (p - t2) % p;
  return (t1 + t2) % p;
}

// Sum over distinct lambda, mu in F_q^* of lambda^{-j} mu^{-k}, by literal
// double enumeration of the field (O(q^2) scalar powers).
inline Scalar delta_jk(u64 j, u64 k, const FieldSpec& f) {
  Scalar acc = f.zero();
  for (u64 a = 1; a < f.q(); ++a)
    for (u64 b = 1; b < f.q(); ++b) {
      if (a == b) continue;
      Scalar la = f.from_packed(a), mu = f.from_packed(b);
      acc = f.add(acc, f.mul(f.pow(la, -static_cast<i64>(j)), f.pow(mu, -static_cast<i64>(k))));
    }
  return acc;
}

}  // namespace mzv
