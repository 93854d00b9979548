// Library API walkthrough: everything here is header-only — construct a
// field, multiply words, take coproducts and antipodes, evaluate power sums,
// and verify one identity programmatically.

#include <iostream>

#include "mzv/coalgebra.hpp"
#include "mzv/powersums.hpp"
#include "mzv/products.hpp"
#include "mzv/text_io.hpp"

int main() {
  using namespace mzv;

  // A base field is (p, k); FieldSpec::from_order accepts any prime power.
  FieldSpec f(3);
  std::cout << "working over F_" << f.q() << "\n\n";

  // Words parse from "x" syntax; combinations allow coefficients and +/-.
  Word u = parse_word("x1x2");
  LinComb v = parse_lincomb(f, "x3 + 2*x1x2");

  // Products: shuffle, diamond (the collision part), triangle, stuffle.
  ProductEngine pe(f);
  std::cout << "x1 shuffled with x2          = "
            << canonical_serialize(pe.shuffle_words(parse_word("x1"), parse_word("x2"))) << "\n";
  std::cout << "x1x2 stuffled with x3+2*x1x2 = " << canonical_serialize(pe.stuffle(LinComb::of_word(f, u), v))
            << "\n\n";

  // Coproducts: the recursive one, its concatenation variant, the closed
  // depth-one form, and the deconcatenation coproduct.
  CoalgebraEngine eng(f);
  std::cout << "coproduct of x10             = " << canonical_serialize(eng.coproduct_shuffle(Word::letter(10)))
            << "\n";
  std::cout << "closed form at n=10          = " << canonical_serialize(eng.coproduct_depth_one_closed(10)) << "\n";
  std::cout << "deconcatenation of x1x2      = " << canonical_serialize(coproduct_stuffle(f, u)) << "\n\n";

  // Antipodes on both sides; the convolution with the identity is the
  // counit projection, verified here for one word.
  std::cout << "shuffle antipode of x1x2     = " << canonical_serialize(eng.antipode_shuffle(u)) << "\n";
  std::cout << "stuffle antipode of x1x2     = " << canonical_serialize(eng.antipode_stuffle(u)) << "\n";
  LinComb conv(f);
  Tensor2 du = eng.coproduct_shuffle(LinComb::of_word(f, u));
  for (const auto& [k, c] : du.terms())
    conv.add_scaled_inplace(c, pe.shuffle(eng.antipode_shuffle(k.first), LinComb::of_word(f, k.second)));
  std::cout << "S*(id) convolution on x1x2   = " << canonical_serialize(conv) << "  (the counit projection)\n\n";

  // Power sums over monic polynomials of F_q[θ] are exact rational
  // functions; the shuffle product mirrors their multiplication.
  PowerSumEngine ps(f);
  IndexTuple one = parse_word("x1"), two = parse_word("x2");
  std::cout << "S_{<2}(1)                    = " << ratfunc_to_text(ps.Slt(2, one)) << "\n";
  std::cout << "S_{<2}(2)                    = " << ratfunc_to_text(ps.Slt(2, two)) << "\n";
  RatFunc lhs = ps.Slt(2, one) * ps.Slt(2, two);
  RatFunc rhs(f);
  LinComb prod = pe.shuffle_words(one, two);
  for (const auto& [w, c] : prod.terms()) rhs = rhs + scale(c, ps.Slt(2, w));
  std::cout << "product vs shuffled sum      : " << (lhs == rhs ? "equal, as the shuffle law demands" : "MISMATCH")
            << "\n";
  return 0;
}
