#pragma once

// Dense univariate polynomials over F_q in the variable θ, and canonical
// rational functions (denominator monic, fraction fully reduced).
//
// Text grammar:  poly    = term { ("+"|"-") term }  |  "0"
//                term    = COEFF | [COEFF ["*"]] THETA ["^" INT]
//                ratfunc = poly " / " poly  |  poly
// THETA is the UTF-8 character θ (the letter "t" is accepted on input).
// Coefficients are packed base-p integers, as in the word-combination grammar.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mzv/json_io.hpp"
#include "mzv/text_io.hpp"
#include "mzv/words.hpp"

namespace mzv {

// Coefficients lowest degree first, no trailing zeros; the zero polynomial has
// an empty coefficient vector and degree() == -1.
class Poly {
 public:
  explicit Poly(const FieldSpec& f) : f_(&f) {}

  static Poly zero(const FieldSpec& f) { return Poly(f); }
  static Poly one(const FieldSpec& f) { return constant(f, f.one()); }
  static Poly constant(const FieldSpec& f, Scalar c) {
    Poly p(f);
    if (!f.is_zero(c)) p.c_.push_back(c);
    return p;
  }
  static Poly theta(const FieldSpec& f) { return monomial(f, 1, f.one()); }
  static Poly monomial(const FieldSpec& f, u64 deg, Scalar c) {
    Poly p(f);
    if (!f.is_zero(c)) {
      p.c_.assign(deg + 1, f.zero());
      p.c_.back() = c;
    }
    return p;
  }
  static Poly from_coeffs(const FieldSpec& f, std::vector<Scalar> c) {
    Poly p(f);
    p.c_ = std::move(c);
    p.normalize();
    return p;
  }

  const FieldSpec& field() const { return *f_; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  i64 degree() const { return static_cast<i64>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0].v == 1; }
  Scalar coeff(u64 i) const { return i < c_.size() ? c_[i] : f_->zero(); }
  Scalar leading() const { return c_.empty() ? f_->zero() : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back().v == 1; }

  bool operator==(const Poly& o) const {
    check_same_field(*f_, *o.f_);
    return c_ == o.c_;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

 private:
  void normalize() {
    while (!c_.empty() && f_->is_zero(c_.back())) c_.pop_back();
  }

  const FieldSpec* f_;
  std::vector<Scalar> c_;
};

inline Poly operator+(const Poly& a, const Poly& b) {
  const FieldSpec& f = a.field();
  check_same_field(f, b.field());
  std::vector<Scalar> c(std::max(a.coeffs().size(), b.coeffs().size()), f.zero());
  for (size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.coeff(i), b.coeff(i));
  return Poly::from_coeffs(f, std::move(c));
}

inline Poly operator-(const Poly& a) {
  const FieldSpec& f = a.field();
  std::vector<Scalar> c(a.coeffs());
  for (Scalar& x : c) x = f.neg(x);
  return Poly::from_coeffs(f, std::move(c));
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly scale(Scalar s, const Poly& a) {
  const FieldSpec& f = a.field();
  if (f.is_zero(s)) return Poly::zero(f);
  std::vector<Scalar> c(a.coeffs());
  for (Scalar& x : c) x = f.mul(s, x);
  return Poly::from_coeffs(f, std::move(c));
}

inline Poly operator*(const Poly& a, const Poly& b) {
  const FieldSpec& f = a.field();
  check_same_field(f, b.field());
  if (a.is_zero() || b.is_zero()) return Poly::zero(f);
  std::vector<Scalar> c(a.coeffs().size() + b.coeffs().size() - 1, f.zero());
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    Scalar ai = a.coeffs()[i];
    if (f.is_zero(ai)) continue;
    for (size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] = f.add(c[i + j], f.mul(ai, b.coeffs()[j]));
  }
  return Poly::from_coeffs(f, std::move(c));
}

// Euclidean division: a = q*b + r with deg r < deg b.
inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  const FieldSpec& f = a.field();
  check_same_field(f, b.field());
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly::zero(f), a};
  std::vector<Scalar> r(a.coeffs());
  std::vector<Scalar> qc(a.coeffs().size() - b.coeffs().size() + 1, f.zero());
  Scalar lead_inv = f.inv(b.leading());
  for (size_t i = r.size(); i-- >= b.coeffs().size();) {
    if (f.is_zero(r[i])) continue;
    Scalar t = f.mul(r[i], lead_inv);
    size_t shift = i - (b.coeffs().size() - 1);
    qc[shift] = t;
    for (size_t j = 0; j < b.coeffs().size(); ++j)
      r[shift + j] = f.sub(r[shift + j], f.mul(t, b.coeffs()[j]));
  }
  return {Poly::from_coeffs(f, std::move(qc)), Poly::from_coeffs(f, std::move(r))};
}

inline Poly make_monic(const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a.field().inv(a.leading()), a);
}

// Monic gcd; gcd(0, 0) = 0.
inline Poly poly_gcd(Poly a, Poly b) {
  check_same_field(a.field(), b.field());
  while (!b.is_zero()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

inline Poly poly_pow(const Poly& a, u64 e) {
  Poly r = Poly::one(a.field()), base = a;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// Canonical fraction in F_q(θ): denominator monic and nonzero, gcd(num, den)
// = 1, zero represented as 0/1. Every operation re-reduces, so equality is a
// plain member comparison.
class RatFunc {
 public:
  explicit RatFunc(const FieldSpec& f) : num_(Poly::zero(f)), den_(Poly::one(f)) {}
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    check_same_field(num_.field(), den_.field());
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    reduce();
  }

  static RatFunc zero(const FieldSpec& f) { return RatFunc(f); }
  static RatFunc one(const FieldSpec& f) { return of(Poly::one(f)); }
  static RatFunc of(const Poly& p) { return RatFunc(p, Poly::one(p.field())); }

  const FieldSpec& field() const { return num_.field(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

 private:
  void reduce() {
    const FieldSpec& f = num_.field();
    if (num_.is_zero()) {
      den_ = Poly::one(f);
      return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = poly_divmod(num_, g).first;
      den_ = poly_divmod(den_, g).first;
    }
    if (!den_.is_monic()) {
      Scalar li = f.inv(den_.leading());
      num_ = scale(li, num_);
      den_ = scale(li, den_);
    }
  }

  Poly num_, den_;
};

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  check_same_field(a.field(), b.field());
  return RatFunc(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

inline RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num(), a.den()); }

inline RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

inline RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  check_same_field(a.field(), b.field());
  return RatFunc(a.num() * b.num(), a.den() * b.den());
}

inline RatFunc inv(const RatFunc& a) {
  if (a.is_zero()) throw std::domain_error("RatFunc: division by zero");
  return RatFunc(a.den(), a.num());
}

inline RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * inv(b); }

inline RatFunc scale(Scalar s, const RatFunc& a) {
  return RatFunc(scale(s, a.num()), a.den());
}

inline RatFunc pow(const RatFunc& a, i64 e) {
  RatFunc base = e < 0 ? inv(a) : a;
  u64 n = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
  RatFunc r = RatFunc::one(a.field());
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

inline constexpr std::string_view kThetaUtf8 = "\xce\xb8";

inline std::string poly_to_text(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (i64 i = p.degree(); i >= 0; --i) {
    Scalar c = p.coeff(static_cast<u64>(i));
    if (p.field().is_zero(c)) continue;
    if (!s.empty()) s += " + ";
    if (i == 0) {
      s += std::to_string(c.v);
      continue;
    }
    if (c.v != 1) s += std::to_string(c.v);
    s += kThetaUtf8;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

inline std::string ratfunc_to_text(const RatFunc& r) {
  return poly_to_text(r.num()) + " / " + poly_to_text(r.den());
}

namespace detail {

inline bool eat_theta(TextCursor& c) {
  return c.eat_str(kThetaUtf8) || c.eat('t');
}

// term = COEFF | [COEFF ["*"]] THETA ["^" INT]
inline Poly parse_poly_term_at(const FieldSpec& f, TextCursor& c) {
  Scalar coeff = f.one();
  bool have_coeff = false;
  if (c.peek() >= '0' && c.peek() <= '9') {
    u64 v = c.parse_uint();
    coeff = f.k() == 1 ? f.from_int(static_cast<i64>(v)) : f.from_packed(v);
    have_coeff = true;
    c.eat('*');
  }
  if (eat_theta(c)) {
    u64 e = 1;
    if (c.eat('^')) e = c.parse_uint();
    return Poly::monomial(f, e, coeff);
  }
  if (!have_coeff) c.fail("expected coefficient or \xce\xb8");
  return Poly::constant(f, coeff);
}

inline Poly parse_poly_at(const FieldSpec& f, TextCursor& c, bool stop_at_slash) {
  Poly r = Poly::zero(f);
  bool negate = c.eat('-');
  while (true) {
    Poly t = parse_poly_term_at(f, c);
    r = negate ? r - t : r + t;
    if (stop_at_slash && c.peek() == '/') break;
    if (c.eat('+')) {
      negate = false;
    } else if (c.eat('-')) {
      negate = true;
    } else {
      break;
    }
  }
  return r;
}

}  // namespace detail

inline Poly parse_poly(const FieldSpec& f, std::string_view text) {
  detail::TextCursor c(text);
  Poly r = detail::parse_poly_at(f, c, false);
  if (!c.done()) c.fail("unexpected trailing input");
  return r;
}

// Splits at the fraction bar; a bare polynomial denotes denominator 1.
inline RatFunc parse_ratfunc(const FieldSpec& f, std::string_view text) {
  detail::TextCursor c(text);
  Poly num = detail::parse_poly_at(f, c, true);
  if (c.eat('/')) {
    Poly den = detail::parse_poly_at(f, c, false);
    if (!c.done()) c.fail("unexpected trailing input");
    return RatFunc(std::move(num), std::move(den));
  }
  if (!c.done()) c.fail("unexpected trailing input");
  return RatFunc::of(num);
}

inline nlohmann::json to_json(const Poly& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (Scalar c : p.coeffs()) coeffs.push_back(c.v);
  return {{"format", "mzv.poly/1"}, {"field", field_to_json(p.field())}, {"coeffs", coeffs}};
}

inline Poly poly_from_json(const FieldSpec& f, const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "mzv.poly/1")
    throw std::invalid_argument("unexpected JSON format tag " + j.at("format").dump());
  check_json_field(f, j);
  std::vector<Scalar> c;
  for (const auto& v : j.at("coeffs")) c.push_back(f.from_packed(v.get<u64>()));
  return Poly::from_coeffs(f, std::move(c));
}

inline nlohmann::json to_json(const RatFunc& r) {
  nlohmann::json num = nlohmann::json::array(), den = nlohmann::json::array();
  for (Scalar c : r.num().coeffs()) num.push_back(c.v);
  for (Scalar c : r.den().coeffs()) den.push_back(c.v);
  return {{"format", "mzv.ratfunc/1"}, {"field", field_to_json(r.field())}, {"num", num}, {"den", den}};
}

inline RatFunc ratfunc_from_json(const FieldSpec& f, const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "mzv.ratfunc/1")
    throw std::invalid_argument("unexpected JSON format tag " + j.at("format").dump());
  check_json_field(f, j);
  std::vector<Scalar> num, den;
  for (const auto& v : j.at("num")) num.push_back(f.from_packed(v.get<u64>()));
  for (const auto& v : j.at("den")) den.push_back(f.from_packed(v.get<u64>()));
  return RatFunc(Poly::from_coeffs(f, std::move(num)), Poly::from_coeffs(f, std::move(den)));
}

}  // namespace mzv
