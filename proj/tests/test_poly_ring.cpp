#include "doctest.h"
#include "twistconj/poly_ring.hpp"

using namespace twistconj;

TEST_CASE("polynomial arithmetic examples") {
  const Ring& F2 = Ring::parse("gf(2)[t]");
  RingElem x = F2.parse_elem("t+1");
  CHECK(x * x == F2.parse_elem("t^2+1"));
  const Ring& F3 = Ring::parse("gf(3)[t]");
  RingElem y = F3.parse_elem("t^2+1");
  CHECK((y * y).str() == "1 + 2*t^2 + t^4");
  const Ring& L5 = Ring::parse("gf(5)[t,t^-1]");
  CHECK((L5.t_pow(-1) * L5.t_pow(1)).is_one());
  CHECK(y.pow(3) == y * y * y);
  CHECK_THROWS_AS(F3.parse_elem("t") + F2.parse_elem("t"), MathError);
  CHECK_THROWS_AS(F2.parse_elem("t^-1"), MathError);
}

TEST_CASE("polynomial grammar round trip") {
  const Ring& Z = Ring::parse("z[t,t^-1]");
  RingElem p = Z.parse_elem("3*t^-2 + 1 + 2*t^5");
  CHECK(p.str() == "3*t^-2 + 1 + 2*t^5");
  CHECK(Z.parse_elem("-t + 4 - 2*t^3").str() == "4 - t - 2*t^3");
  const Ring& F4 = Ring::parse("gf(4)[t]");
  CHECK(F4.parse_elem("(w+1)*t^2 + w*t + 1").str() == "1 + w*t + (w+1)*t^2");
  Rng rng(3);
  for (const char* tag : {"gf(2)[t]", "gf(9)[t,t^-1]", "gf(8)[t]", "z[t]", "z[t,t^-1]", "gf(7)[t,t^-1]"}) {
    const Ring& R = Ring::parse(tag);
    for (int i = 0; i < 200; ++i) {
      RingElem a = R.random(rng);
      CHECK(R.parse_elem(a.str()) == a);
    }
  }
  CHECK_THROWS_AS(Z.parse_elem("3*t^"), MathError);
  CHECK_THROWS_AS(Z.parse_elem("3t"), MathError);
  CHECK_THROWS_AS(Z.parse_elem("1 ++ t"), MathError);
  CHECK_THROWS_AS(Z.parse_elem(""), MathError);
}

TEST_CASE("ring automorphism examples") {
  const Ring& F2 = Ring::parse("gf(2)[t]");
  auto alpha = RingAutoDesc::parse("t->t+1", F2);
  CHECK(apply_ring_auto(alpha, F2.parse_elem("t^2")) == F2.parse_elem("t^2+1"));
  const Ring& L5 = Ring::parse("gf(5)[t,t^-1]");
  CHECK(apply_ring_auto(RingAutoDesc::flip(), L5.parse_elem("t^3 + 2*t^-1")) == L5.parse_elem("t^-3 + 2*t"));
  RingElem p = L5.parse_elem("t^2 + 3*t^-4");
  CHECK(apply_ring_auto(RingAutoDesc::identity(), p) == p);
  CHECK_THROWS_AS(apply_ring_auto(RingAutoDesc::flip(), F2.parse_elem("t")), MathError);
  CHECK_THROWS_AS(check_ring_auto(RingAutoDesc::parse("t->t+1", L5), L5), MathError);
  CHECK(RingAutoDesc::parse("t->t", F2).is_identity());
  CHECK_THROWS_AS(RingAutoDesc::parse("t->0*t+1", F2), MathError);
  CHECK_THROWS_AS(RingAutoDesc::parse("t->t^2", F2), MathError);
}

TEST_CASE("ring automorphisms are ring homomorphisms and preserve degree") {
  Rng rng(5);
  struct Case {
    const char* ring;
    const char* alpha;
  };
  for (Case c : {Case{"gf(2)[t]", "t->t+1"}, Case{"gf(3)[t]", "t->2*t+1"}, Case{"gf(5)[t]", "t->3*t"},
                 Case{"gf(4)[t]", "t->w*t+(w+1)"}, Case{"gf(5)[t,t^-1]", "t->t^-1"}, Case{"gf(7)[t,t^-1]", "t->3*t"},
                 Case{"z[t]", "t->-t+2"}, Case{"z[t,t^-1]", "t->t^-1"}}) {
    const Ring& R = Ring::parse(c.ring);
    auto alpha = RingAutoDesc::parse(c.alpha, R);
    check_ring_auto(alpha, R);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      RingElem a = R.random(rng), b = R.random(rng);
      if (!(apply_ring_auto(alpha, a * b) == apply_ring_auto(alpha, a) * apply_ring_auto(alpha, b))) ++bad;
      if (!(apply_ring_auto(alpha, a + b) == apply_ring_auto(alpha, a) + apply_ring_auto(alpha, b))) ++bad;
      if (alpha.kind == RingAutoDesc::Kind::PolySub && !a.is_zero()) {
        long d1 = R.over_field() ? a.fpoly().deg() : a.zpoly().deg();
        RingElem im = apply_ring_auto(alpha, a);
        long d2 = R.over_field() ? im.fpoly().deg() : im.zpoly().deg();
        if (d1 != d2) ++bad;
      }
    }
    INFO(c.ring << " " << c.alpha);
    CHECK(bad == 0);
  }
}

TEST_CASE("composition of ring automorphisms") {
  const Ring& L = Ring::parse("gf(5)[t,t^-1]");
  CHECK(compose(RingAutoDesc::flip(), RingAutoDesc::flip()).is_identity());
  const Ring& P = Ring::parse("gf(5)[t]");
  auto a = RingAutoDesc::parse("t->2*t+1", P), b = RingAutoDesc::parse("t->3*t+4", P);
  auto ab = compose(a, b);
  RingElem x = P.parse_elem("t^3 + 2*t + 1");
  CHECK(apply_ring_auto(ab, x) == apply_ring_auto(a, apply_ring_auto(b, x)));
  (void)L;
}

TEST_CASE("augmentation") {
  CHECK(augmentation(parse_zpoly("t^2 + 3*t")) == 4);
  CHECK(sign_augmentation(parse_zpoly("t^2 + 3*t")) == 1);
  CHECK(sign_augmentation(parse_zpoly("t")) == -1);
  CHECK(augmentation(ZPoly()) == 0);
  CHECK(sign_augmentation(ZPoly()) == 1);
  Rng rng(9);
  const Ring& R = Ring::parse("z[t]");
  for (int i = 0; i < 300; ++i) {
    RingElem a = R.random(rng), b = R.random(rng);
    CHECK(augmentation((a + b).zpoly()) == augmentation(a.zpoly()) + augmentation(b.zpoly()));
    CHECK(sign_augmentation((-a).zpoly()) == sign_augmentation(a.zpoly()));
  }
}

TEST_CASE("f-adic valuation") {
  const GaloisField& F3 = GaloisField::get(3);
  FPoly f = parse_fpoly("t^2+1", F3);
  FPoly x = f * f * parse_fpoly("t", F3);
  CHECK(f_adic_valuation(x, f) == 2);
  CHECK(f_adic_valuation(parse_fpoly("t^5", F3), f) == 0);
  CHECK(!f_adic_valuation(FPoly(), f).has_value());
  CHECK(f_adic_valuation(x.shifted(-7), f) == 2);
  CHECK_THROWS_AS(f_adic_valuation(x, parse_fpoly("t^2+2", F3)), MathError);  // (t-1)(t+1)
  CHECK_THROWS_AS(f_adic_valuation(x, parse_fpoly("t", F3)), MathError);
  CHECK_THROWS_AS(f_adic_valuation(x, parse_fpoly("2", F3)), MathError);

  Rng rng(21);
  const Ring& L = Ring::parse("gf(3)[t,t^-1]");
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    RingElem a = L.random(rng), b = L.random(rng);
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) a = a * L.from_fpoly(f);
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) b = b * L.from_fpoly(f * f);
    auto va = f_adic_valuation(a.fpoly(), f), vb = f_adic_valuation(b.fpoly(), f);
    auto vab = f_adic_valuation((a * b).fpoly(), f);
    if (va && vb) {
      if (vab != *va + *vb) ++bad;
    } else if (vab) {
      ++bad;
    }
    auto vs = f_adic_valuation((a + b).fpoly(), f);
    if (va && vb && vs) {
      if (*vs < std::min(*va, *vb)) ++bad;
      if (*va != *vb && *vs != std::min(*va, *vb)) ++bad;
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("irreducibility") {
  const GaloisField& F2 = GaloisField::get(2);
  CHECK(is_irreducible(parse_fpoly("t^2+t+1", F2), F2));
  CHECK(!is_irreducible(parse_fpoly("t^2+1", F2), F2));
  CHECK(is_irreducible(parse_fpoly("t^4+t+1", F2), F2));
  CHECK(!is_irreducible(parse_fpoly("t^4+t^2+1", F2), F2));  // (t^2+t+1)^2
  CHECK(monic_irreducibles(F2, 2).size() == 1);
  CHECK(monic_irreducibles(F2, 3).size() == 2);
  CHECK(monic_irreducibles(GaloisField::get(3), 2).size() == 3);
  CHECK(monic_irreducibles(GaloisField::get(4), 2).size() == 6);
}

TEST_CASE("coefficient split of h - alpha(h)") {
  const GaloisField& F2 = GaloisField::get(2);
  const Ring& P2 = Ring::parse("gf(2)[t]");
  auto s = claimFpt_decompose(parse_fpoly("t^3", F2), RingAutoDesc::parse("t->t+1", P2), F2);
  REQUIRE(s.principal.size() == 1);
  CHECK(s.principal.at(3).is_zero());
  CHECK(s.remainder == parse_fpoly("t^2+t+1", F2));

  const GaloisField& F3 = GaloisField::get(3);
  const Ring& P3 = Ring::parse("gf(3)[t]");
  auto s3 = claimFpt_decompose(parse_fpoly("t^5", F3), RingAutoDesc::parse("t->2*t", P3), F3);
  CHECK(s3.principal.at(5).v == 2);

  auto s0 = claimFpt_decompose(parse_fpoly("2", F3), RingAutoDesc::parse("t->2*t", P3), F3);
  CHECK(s0.principal.empty());
  CHECK(s0.remainder.is_zero());

  CHECK_THROWS_AS(claimFpt_decompose(FPoly(), RingAutoDesc::parse("t->t", P3), F3), MathError);
  const Ring& P4 = Ring::parse("gf(4)[t]");
  CHECK_THROWS_AS(claimFpt_decompose(FPoly(), RingAutoDesc::parse("t->t+1", P4), GaloisField::get(4)), MathError);
}

TEST_CASE("coefficient split: remainder leaks into pk+p-1 when b != 0") {
  // frozen from a sympy expansion of t^7 - (t+1)^7 over GF(2)
  const GaloisField& F2 = GaloisField::get(2);
  const Ring& P2 = Ring::parse("gf(2)[t]");
  auto s = claimFpt_decompose(parse_fpoly("t^7", F2), RingAutoDesc::parse("t->t+1", P2), F2);
  CHECK(s.difference == parse_fpoly("1 + t + t^2 + t^3 + t^4 + t^5 + t^6", F2));
  CHECK(!s.remainder_clean);
  CHECK(s.remainder.coeff(5).is_one());
  CHECK(s.remainder.coeff(3).is_one());
  // p=3, t->t+1, h=t^8: leak at exponent 5
  const GaloisField& F3 = GaloisField::get(3);
  const Ring& P3 = Ring::parse("gf(3)[t]");
  auto s3 = claimFpt_decompose(parse_fpoly("t^8", F3), RingAutoDesc::parse("t->t+1", P3), F3);
  CHECK(!s3.remainder_clean);
  CHECK(!s3.remainder.coeff(5).is_zero());
}

TEST_CASE("coefficient split recombines; remainder avoids pk+p-1 when b = 0") {
  Rng rng(33);
  for (unsigned p : {2u, 3u, 5u}) {
    const Ring& P = Ring::parse("gf(" + std::to_string(p) + ")[t]");
    const GaloisField& F = *P.field();
    for (const char* a : {"t->t+1", "t->2*t+1", "t->4*t+3", "t->2*t", "t->3*t"}) {
      RingAutoDesc alpha;
      try {
        alpha = RingAutoDesc::parse(a, P);
      } catch (const MathError&) {
        continue;
      }
      if (alpha.is_identity()) continue;
      for (int i = 0; i < 500; ++i) {
        RandomOpts o;
        o.deg_hi = 30;
        FPoly h = P.random(rng, o).fpoly();
        auto s = claimFpt_decompose(h, alpha, F);
        FPoly principal;
        for (auto& [e, c] : s.principal) principal.add_term(e, c);
        CHECK(principal + s.remainder == s.difference);
        CHECK(s.remainder_clean == avoids_principal_exponents(s.remainder, p));
        if (alpha.b.is_zero()) CHECK(s.remainder_clean);
      }
    }
  }
}
