#include "doctest.h"
#include "twistconj/ring.hpp"

using namespace twistconj;

namespace {

const char* kAllRings[] = {"gf(2)",      "gf(4)",        "gf(5)",   "gf(9)",  "gf(3)[t]", "gf(4)[t]",
                           "gf(5)[t,t^-1]", "gf(8)[t,t^-1]", "z",       "z[1/6]", "z[1/2]",   "z[t]",
                           "z[t,t^-1]"};

// GF(4) multiplication done by hand on bit pairs, modulus x^2+x+1
unsigned gf4_mul(unsigned a, unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 2; ++i)
    if (b >> i & 1) r ^= a << i;
  if (r & 4) r ^= 0b111;
  return r;
}

}  // namespace

TEST_CASE("gf4 table matches the x^2+x+1 model") {
  const GaloisField& F = GaloisField::get(4);
  CHECK(F.modulus() == std::vector<unsigned>{1, 1, 1});
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) {
      CHECK(F.mul(a, b) == gf4_mul(a, b));
      CHECK(F.add(a, b) == (a ^ b));
    }
  FieldElem w(F, F.parse("w"));
  FieldElem w2 = w * w;
  CHECK((w * w2).is_one());
  CHECK((FieldElem(F, 1) + w + w2).is_zero());
  CHECK(w2.str() == "w+1");
}

TEST_CASE("documented moduli for gf(8) and gf(9)") {
  CHECK(GaloisField::get(8).modulus() == std::vector<unsigned>{1, 1, 0, 1});
  CHECK(GaloisField::get(9).modulus() == std::vector<unsigned>{1, 0, 1});
}

TEST_CASE("prime field inverses and errors") {
  const GaloisField& F5 = GaloisField::get(5);
  CHECK(F5.inv(2) == 3);
  CHECK_THROWS_AS(GaloisField::get(2).inv(0), MathError);
  CHECK_THROWS_AS(GaloisField::get(6), MathError);
  CHECK_THROWS_AS(GaloisField::get(1), MathError);
  CHECK_THROWS_AS(GaloisField::with_modulus(2, {1, 0, 1}), MathError);  // x^2+1 = (x+1)^2
  CHECK_NOTHROW(GaloisField::with_modulus(3, {1, 0, 1}));
}

TEST_CASE("x^(q-1) = 1 exhaustively for q <= 9") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const GaloisField& F = GaloisField::get(q);
    for (auto& x : field_elements(F)) {
      if (x.is_zero()) continue;
      CHECK(x.pow(q - 1).is_one());
      CHECK((x * x.inv()).is_one());
    }
  }
}

TEST_CASE("field element parse and print round trip") {
  for (unsigned q : {4u, 8u, 9u, 27u}) {
    const GaloisField& F = GaloisField::get(q);
    for (uint32_t v = 0; v < q; ++v) CHECK(F.parse(F.print(v)) == v);
  }
  CHECK_THROWS_AS(GaloisField::get(5).parse("w"), MathError);
  CHECK_THROWS_AS(GaloisField::get(4).parse("w^"), MathError);
}

TEST_CASE("ring tag grammar") {
  for (auto tag : kAllRings) CHECK(RingDescriptor::parse(tag).tag() == tag);
  CHECK(RingDescriptor::parse(" GF( 5 ) [ t , t^-1 ] ").tag() == "gf(5)[t,t^-1]");
  CHECK(RingDescriptor::parse("Z[1/6]").kind == RingKind::ZLocal);
  CHECK_THROWS_AS(RingDescriptor::parse("gf(6)"), MathError);
  CHECK_THROWS_AS(RingDescriptor::parse("q[t]"), MathError);
  CHECK_THROWS_AS(RingDescriptor::parse("z[1/1]"), MathError);
}

TEST_CASE("unit groups") {
  auto ug = Ring::parse("z[1/6]").unit_group();
  REQUIRE(ug.torsion.size() == 1);
  CHECK(ug.torsion[0].str() == "-1");
  REQUIRE(ug.free.size() == 2);
  CHECK(ug.free[0].str() == "2");
  CHECK(ug.free[1].str() == "3");

  auto l5 = Ring::parse("gf(5)[t,t^-1]").unit_group();
  REQUIRE(l5.torsion.size() == 1);
  CHECK(l5.torsion[0].str() == "2");
  REQUIRE(l5.free.size() == 1);
  CHECK(l5.free[0].str() == "t");

  auto p2 = Ring::parse("gf(2)[t]").unit_group();
  CHECK(p2.torsion.empty());
  CHECK(p2.free.empty());
}

TEST_CASE("unit decomposition round trip") {
  Rng rng(7);
  for (auto tag : kAllRings) {
    const Ring& R = Ring::parse(tag);
    for (int i = 0; i < 50; ++i) {
      RingElem u = R.random_unit(rng);
      REQUIRE(R.is_unit(u));
      auto [tors, e] = R.split_unit(u);
      CHECK(tors * R.tf_element(e) == u);
      RingElem v = R.random_tf_unit(rng);
      auto ev = R.tf_exponents(v);
      REQUIRE(ev.has_value());
      CHECK(R.tf_element(*ev) == v);
    }
  }
}

TEST_CASE("ring axioms on random triples") {
  Rng rng(11);
  for (auto tag : kAllRings) {
    const Ring& R = Ring::parse(tag);
    INFO(tag);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
      RingElem a = R.random(rng), b = R.random(rng), c = R.random(rng);
      if (!((a + b) + c == a + (b + c))) ++failures;
      if (!((a * b) * c == a * (b * c))) ++failures;
      if (!(a * (b + c) == a * b + a * c)) ++failures;
      if (!(a * b == b * a)) ++failures;
      if (!(a + (-a)).is_zero()) ++failures;
      if (!(a * R.one() == a)) ++failures;
      if (!a.is_zero() && !b.is_zero() && (a * b).is_zero()) ++failures;  // no zero divisors
      if (a.is_unit() && !(a * a.inv()).is_one()) ++failures;
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("localized integers keep a canonical form") {
  const Ring& R = Ring::parse("z[1/6]");
  RingElem a = R.from_rational(Rational(2, 4));
  RingElem b = R.from_rational(Rational(1, 2));
  CHECK(a == b);
  CHECK(R.from_rational(a.rational()) == a);
  CHECK(R.parse_elem("-10/12").str() == "-5/6");
  CHECK_THROWS_AS(R.from_rational(Rational(1, 5)), MathError);
  CHECK(R.is_unit(R.parse_elem("-4/3")));
  CHECK(!R.is_unit(R.parse_elem("5")));
  CHECK_THROWS_AS(R.parse_elem("5").inv(), MathError);
}

TEST_CASE("arbitrary precision integers") {
  const Ring& Z = Ring::parse("z");
  RingElem big = Z.from_int(3).pow(200);
  CHECK(big.str().size() > 90);
  CHECK((big - big).is_zero());
}

TEST_CASE("unit equation over z[1/w] forces the identity") {
  for (const char* tag : {"z[1/6]", "z[1/2]", "z[1/30]"}) {
    const Ring& R = Ring::parse(tag);
    auto res = solve_unit_equation(R);
    CHECK(res.identity);
    CHECK(res.consistent);
    for (size_t i = 0; i < res.primes.size(); ++i)
      for (size_t j = 0; j < res.primes.size(); ++j) CHECK(res.lambda[i][j] == (i == j ? 1 : 0));
  }
  const Ring& R = Ring::parse("z[1/6]");
  // swapped images: factorization is fine but the constraint fails
  auto swapped = solve_unit_equation(R, {R.from_int(3), R.from_int(2)}, R.from_int(5));
  CHECK(!swapped.consistent);
  CHECK(!swapped.identity);
  CHECK(swapped.lambda[1][0] == 1);
  auto neg = solve_unit_equation(R, {R.from_int(-2), R.from_int(3)}, R.one());
  CHECK(neg.signs[0] == -1);
  CHECK(!neg.consistent);
  CHECK_THROWS_AS(solve_unit_equation(R, {R.from_int(5), R.from_int(3)}, R.one()), MathError);
}
