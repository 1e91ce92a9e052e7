#include "doctest.h"
#include "twistconj/automorphy.hpp"

using namespace twistconj;

namespace {

RingElem E(const Ring& R, const char* s) { return R.parse_elem(s); }

RandomOpts small() {
  RandomOpts o;
  o.deg_hi = 2;
  o.coeff_bound = 4;
  o.unit_exp = 2;
  return o;
}

struct Case {
  const char* ring;
  const char* group;
  const char* word;
};

// Every catalog family over the rings it applies to.
const Case kCatalog[] = {
    {"gf(5)[t]", "b3", "inner(e(1,2;t) e(2,3;1+t^2) d(1;2) d(3;3))"},
    {"z[1/6]", "pb3", "inner(e(1,3;5/6) d(2;-3))"},
    {"gf(4)[t,t^-1]", "u4", "central(2,mul(w*t))"},
    {"z[t,t^-1]", "u5", "central(1,mul(t^-1-2))"},
    {"gf(4)[t]", "u4", "central(3,window(0,1;1,w|0,1))"},
    {"gf(5)[t]", "u5", "sigma(half(3),3)"},
    {"z[1/2]", "u4", "sigma(half(5/2),5/2)"},
    {"z[1/6]", "u5", "sigmap(half(1/3),1/3)"},
    {"gf(2)[t]", "u5", "sigma(mul(t),0)"},
    {"gf(9)", "u6", "flip"},
    {"z[t]", "u5", "flip"},
    {"gf(4)", "b3", "flipb"},
    {"z[1/6]", "b4", "flipb"},
    {"gf(5)[t]", "b3", "ring(t->2*t+1)"},
    {"gf(4)[t,t^-1]", "b3", "ring(t->t^-1)"},
    {"z[t]", "u4", "ring(t->-t+3)"},
    {"z[t,t^-1]", "b2plus", "ring(t->t^-1)"},
    {"gf(3)[t]", "b2", "phiP(t^2+1)"},
    {"gf(2)[t]", "aff", "phiP(t^3+t+1)"},
    {"gf(4)[t]", "u2", "mul(w)*phiP(t^2+t+w)"},
    {"gf(4)[t,t^-1]", "aff-plus", "phiA(w)"},
    {"gf(5)[t,t^-1]", "b2plus", "phiB(2)"},
    {"gf(9)[t,t^-1]", "u2", "phiB(w)"},
    {"z[t]", "b2", "augB2"},
    {"z[t,t^-1]", "b2plus", "augB2plus"},
    {"gf(5)[t]", "u5", "flip*sigma(half(2),2)*central(1,mul(t))*ring(t->3*t)"},
};

}  // namespace

TEST_CASE("flip on U_3 and its involution property") {
  const Ring& R = Ring::parse("z[t]");
  GroupDesc U{GroupKind::U, 3, &R};
  auto tau = auto_flip();
  RingElem r = E(R, "2*t-5");
  CHECK(apply(tau, U, elementary(R, 3, 1, 2, r)) == elementary(R, 3, 2, 3, r));
  CHECK(apply(tau, U, elementary(R, 3, 1, 3, r)) == elementary(R, 3, 1, 3, -r));
  CHECK_THROWS_AS(apply(tau, GroupDesc{GroupKind::B, 3, &R}, elem_diag(R, 3, 1, R.from_int(-1))), MathError);

  Rng rng(1);
  for (unsigned n = 2; n <= 6; ++n) {
    GroupDesc Un{GroupKind::U, n, &R};
    for (unsigned i = 1; i <= n; ++i)
      for (unsigned j = i + 1; j <= n; ++j) {
        int sign = (j - i - 1) % 2 ? -1 : 1;
        CHECK(apply(tau, Un, elementary(R, n, i, j, r)) == elementary(R, n, n - j + 1, n - i + 1, R.from_int(sign) * r));
      }
    for (int k = 0; k < 50; ++k) {
      TriMat g = Un.random(rng, small());
      CHECK(apply(tau, Un, apply(tau, Un, g)) == g);
    }
  }
}

TEST_CASE("companion automorphism on the monomial basis") {
  const Ring& R = Ring::parse("gf(2)[t]");
  AutoDescriptor phi = parse_additive_auto("phiP(t^2+t+1)", R);
  CHECK(apply_additive(phi, E(R, "1")) == E(R, "t"));
  CHECK(apply_additive(phi, E(R, "t")) == E(R, "1+t"));
  CHECK(apply_additive(phi, E(R, "t^2")) == E(R, "t^3"));
  auto C = companion_matrix(parse_fpoly("t^2+t+1", *R.field()));
  CHECK(C[0][0].v == 0);
  CHECK(C[0][1].v == 1);
  CHECK(C[1][0].v == 1);
  CHECK(C[1][1].v == 1);
  CHECK_THROWS_AS(parse_additive_auto("phiP(t^2+1)", R), MathError);  // (t+1)^2
  CHECK_THROWS_AS(parse_additive_auto("phiP(t+1)", R), MathError);
  // blockwise: degree-preserving on windows [0, kd-1]
  GroupDesc U2{GroupKind::U, 2, &R};
  CHECK(apply(phi, U2, elementary(R, 2, 1, 2, E(R, "t^5"))) == elementary(R, 2, 1, 2, E(R, "t^4+t^5")));
}

TEST_CASE("phiB example and parity of exponents") {
  const Ring& R = Ring::parse("gf(5)[t,t^-1]");
  GroupDesc B{GroupKind::BPlus, 2, &R};
  TriMat g = TriMat::identity(R, 2);
  g.at(1, 1) = E(R, "t");
  g.at(1, 2) = E(R, "t^2");
  TriMat img = apply(auto_phiB(R.from_int(2)), B, g);
  CHECK(img.at(1, 1) == E(R, "t^-1"));
  CHECK(img.at(1, 2) == E(R, "2*t^-2"));
  CHECK(img.at(2, 2) == R.one());
  CHECK_THROWS_AS(apply(auto_phiB(R.from_int(2)), GroupDesc{GroupKind::B, 2, &R}, g), MathError);
  CHECK_THROWS_AS(apply(auto_phiA(R.from_int(2)), B, g), MathError);
}

TEST_CASE("catalog descriptors are homomorphisms") {
  Rng rng(2);
  for (auto& c : kCatalog) {
    const Ring& R = Ring::parse(c.ring);
    GroupDesc G = GroupDesc::parse(c.group, R);
    AutoDescriptor phi = parse_auto(c.word, G);
    HomReport rep = verify_homomorphism(phi, G, 120, rng, small());
    INFO(c.word << " on " << c.group << "(" << c.ring << "): " << rep.detail);
    CHECK(rep.passed);
    CHECK(rep.checked == 120);
  }
}

TEST_CASE("homomorphism check catches a corrupted sigma pair") {
  const Ring& R = Ring::parse("gf(5)[t]");
  GroupDesc U{GroupKind::U, 4, &R};
  CHECK_THROWS_AS(auto_sigma(EndoDesc::mul_by(R.one()), R.one()), MathError);
  AutoDescriptor bad = auto_sigma(EndoDesc::mul_by(R.one()), R.one(), false, 0);
  Rng rng(3);
  HomReport rep = verify_homomorphism(bad, U, 200, rng, small());
  CHECK_FALSE(rep.passed);
  REQUIRE(rep.witness.has_value());
  TriMat g = rep.witness->first, h = rep.witness->second;
  CHECK(apply(bad, U, U.mul(g, h)) != U.mul(apply(bad, U, g), apply(bad, U, h)));
}

TEST_CASE("half-square pairs satisfy the sigma condition") {
  Rng rng(4);
  for (const char* tag : {"z[1/2]", "gf(5)[t]", "z[1/6]", "gf(9)[t,t^-1]"}) {
    const Ring& R = Ring::parse(tag);
    RingElem a = R.random(rng);
    EndoDesc lam = EndoDesc::half_square(a);
    for (int k = 0; k < 300; ++k) {
      RingElem r = R.random(rng), s = R.random(rng);
      CHECK(lam(r + s) == a * r * s + lam(r) + lam(s));
    }
  }
  CHECK_THROWS_AS(EndoDesc::half_square(Ring::parse("gf(4)[t]").one()), MathError);
  CHECK_THROWS_AS(EndoDesc::half_square(Ring::parse("z[t]").one()), MathError);
}

TEST_CASE("sigma and central maps are trivial on the abelianization") {
  Rng rng(5);
  const Ring& R = Ring::parse("gf(5)[t]");
  for (unsigned n = 4; n <= 6; ++n) {
    GroupDesc U{GroupKind::U, n, &R};
    std::vector<AutoDescriptor> maps = {auto_sigma(EndoDesc::half_square(R.from_int(3)), R.from_int(3)),
                                        auto_sigma(EndoDesc::half_square(R.from_int(2)), R.from_int(2), true),
                                        auto_central(1, EndoDesc::mul_by(E(R, "t+1"))),
                                        auto_central(n - 1, EndoDesc::mul_by(R.from_int(4)))};
    for (auto& phi : maps) {
      InducedMap ab = induced_on_quotient(phi, U, QuotientTag::Abelianization, rng);
      CHECK(ab.arity == n - 1);
      for (int k = 0; k < 20; ++k) {
        std::vector<RingElem> v;
        for (unsigned i = 1; i < n; ++i) v.push_back(R.random(rng, small()));
        CHECK(ab.map(v) == v);
      }
    }
    // central maps fix every factor gamma_k / gamma_{k+1} with k < n-1
    AutoDescriptor z = auto_central(2, EndoDesc::mul_by(E(R, "t")));
    for (unsigned k = 1; k + 1 < n; ++k)
      for (int it = 0; it < 10; ++it) {
        TriMat g = U.random(rng, small());
        for (unsigned i = 1; i <= n; ++i)
          for (unsigned j = i + 1; j <= n && j - i < k; ++j) g.at(i, j) = R.zero();
        CHECK(gamma_k_member(apply(z, U, g) * inverse(g), k + 1));
      }
  }
  GroupDesc U3{GroupKind::U, 3, &R};
  CHECK_THROWS_AS(apply(auto_sigma(EndoDesc::half_square(R.one()), R.one()), U3, U3.identity()), MathError);
  CHECK_THROWS_AS(auto_central(1, EndoDesc::half_square(R.one())), MathError);
}

TEST_CASE("flip reverses the abelianization and swaps the middle factors") {
  Rng rng(6);
  const Ring& L = Ring::parse("gf(3)[t,t^-1]");
  GroupDesc U5{GroupKind::U, 5, &L};
  InducedMap ab = induced_on_quotient(auto_flip(), U5, QuotientTag::Abelianization, rng);
  std::vector<RingElem> v{E(L, "t"), E(L, "1"), E(L, "t^-2"), E(L, "2+t")};
  CHECK(ab.map(v) == std::vector<RingElem>{v[3], v[2], v[1], v[0]});

  RingAutoDesc flip = RingAutoDesc::flip();
  AutoDescriptor phi = auto_compose({auto_flip(), auto_ring(flip)});
  InducedMap mid = induced_on_quotient(phi, U5, QuotientTag::EMid, rng);
  CHECK(mid.arity == 2);
  for (int k = 0; k < 20; ++k) {
    RingElem r = L.random(rng, small()), s = L.random(rng, small());
    CHECK(mid.map({r, s}) == std::vector<RingElem>{apply_ring_auto(flip, s), apply_ring_auto(flip, r)});
    CHECK(apply_additive(auto_tau_alpha(flip), {r, s}) == mid.map({r, s}));
  }
  GroupDesc U4{GroupKind::U, 4, &L};
  CHECK(induced_on_quotient(auto_ring(flip), U4, QuotientTag::EMid, rng).arity == 1);
}

TEST_CASE("augmentation automorphism leaves U_2 exactly on odd augmentation") {
  const Ring& R = Ring::parse("z[t]");
  GroupDesc B{GroupKind::B, 2, &R};
  auto phi = auto_augB2(false);
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    RingElem r = R.random(rng);
    TriMat img = apply(phi, B, elementary(R, 2, 1, 2, r));
    CHECK(img.is_unitriangular() == (sign_augmentation(r.zpoly()) == 1));
  }
  Rng rng2(8);
  CHECK_THROWS_AS(make_phi0(phi, B, 200, rng2), MathError);
}

TEST_CASE("phi0 normalisation") {
  const Ring& F5 = Ring::parse("gf(5)");
  GroupDesc A{GroupKind::Aff, 2, &F5};
  Rng rng(9);
  auto inner = auto_inner(elementary(F5, 2, 1, 2, F5.one()));
  Phi0Result r = make_phi0(inner, A, 100, rng);
  CHECK_FALSE(r.factor_preserving);
  CHECK(r.restriction_agrees);
  CHECK(r.quotient_agrees);
  CHECK(r.hom.passed);
  for (const TriMat& g : A.enumerate()) CHECK(apply(r.phi0, A, g) == g);

  const Ring& L = Ring::parse("gf(4)[t,t^-1]");
  GroupDesc Ap{GroupKind::AffPlus, 2, &L};
  Phi0Result s = make_phi0(auto_phiA(L.parse_elem("w")), Ap, 100, rng, small());
  CHECK(s.factor_preserving);
  CHECK(s.phi0.str() == auto_phiA(L.parse_elem("w")).str());

  const Ring& Z6 = Ring::parse("z[1/6]");
  GroupDesc W{GroupKind::W, 3, &Z6};
  TriMat g = elem_diag(Z6, 3, 2, Z6.from_int(3));
  g = g * elementary(Z6, 3, 1, 3, Z6.parse_elem("1/2"));
  Phi0Result w = make_phi0(auto_inner(g), W, 100, rng, small());
  CHECK(w.restriction_agrees);
  CHECK(w.quotient_agrees);
  CHECK(w.hom.passed);

  GroupDesc B3{GroupKind::B, 3, &F5};
  CHECK_THROWS_AS(make_phi0(auto_identity(), B3, 10, rng), MathError);
}

TEST_CASE("induced maps on the diagonal quotient") {
  Rng rng(10);
  const Ring& L = Ring::parse("gf(5)[t,t^-1]");
  GroupDesc B{GroupKind::BPlus, 2, &L};
  auto M = induced_on_quotient(auto_phiB(L.from_int(3)), B, QuotientTag::Diagonal, rng).M;
  CHECK(M == std::vector<std::vector<long>>{{-1, 0}, {0, -1}});
  GroupDesc Ap{GroupKind::AffPlus, 2, &L};
  CHECK(induced_on_quotient(auto_phiA(L.from_int(2)), Ap, QuotientTag::Diagonal, rng).M ==
        std::vector<std::vector<long>>{{-1}});

  const Ring& Z6 = Ring::parse("z[1/6]");
  GroupDesc A{GroupKind::Aff, 2, &Z6};
  TriMat g = elementary(Z6, 2, 1, 2, Z6.parse_elem("5/3")) * elem_diag(Z6, 2, 1, Z6.from_int(-2));
  CHECK(induced_on_quotient(auto_inner(g), A, QuotientTag::Diagonal, rng).M ==
        std::vector<std::vector<long>>{{1, 0}, {0, 1}});
  GroupDesc PB3{GroupKind::PB, 3, &Z6};
  auto F = induced_on_quotient(auto_flip(true), PB3, QuotientTag::Diagonal, rng).M;
  CHECK(F.size() == 4);
}

TEST_CASE("descriptor parsing") {
  const Ring& R = Ring::parse("gf(4)[t]");
  GroupDesc U{GroupKind::U, 4, &R};
  AutoDescriptor phi = parse_auto("Flip * central(2, mul(t)) * RING(t->w*t+1)", U);
  CHECK(phi.kind == AutoDescriptor::Kind::Compose);
  CHECK(phi.parts.size() == 3);
  CHECK(parse_auto(phi.str(), U).str() == phi.str());
  CHECK(parse_auto("id", U).kind == AutoDescriptor::Kind::Identity);
  CHECK(parse_auto("inner(e(1,4;t) d(2;w))", GroupDesc{GroupKind::B, 4, &R}).kind == AutoDescriptor::Kind::Inner);
  CHECK_THROWS_AS(parse_auto("frobnicate", U), MathError);
  CHECK_THROWS_AS(parse_auto("central(9,mul(1))", U), MathError);
  CHECK_THROWS_AS(parse_auto("mul(0)", U), MathError);
  CHECK_THROWS_AS(parse_auto("flip*(", U), MathError);
  CHECK(additive_arity(parse_additive_auto("tauAlpha(t->t+1)", R)) == 2);
  CHECK_THROWS_AS(additive_arity(parse_additive_auto("tauAlpha(t->t+1)*mul(w)", R)), MathError);

  EndoDesc e = EndoDesc::parse("window(0,1;1,w|0,1)", R);
  CHECK(e(R.parse_elem("t")) == R.parse_elem("w+t"));
  CHECK(e(R.parse_elem("t^2+1")) == R.one());
  CHECK(EndoDesc::parse(e.str(), R).str() == e.str());
  CHECK_FALSE(EndoDesc::parse("half(1)", Ring::parse("gf(5)")).additive());
}
