#include "doctest.h"
#include <set>
#include "twistconj/tri_group.hpp"

using namespace twistconj;

namespace {

const char* kRings[] = {"gf(5)", "gf(4)[t]", "gf(5)[t,t^-1]", "z[1/6]", "z[t]", "z[t,t^-1]"};

RandomOpts small() {
  RandomOpts o;
  o.deg_hi = 2;
  o.coeff_bound = 4;
  o.unit_exp = 2;
  return o;
}

RingElem E(const Ring& R, const char* s) { return R.parse_elem(s); }

}  // namespace

TEST_CASE("elementary and diagonal generators") {
  const Ring& Z = Ring::parse("z");
  TriMat e = elementary(Z, 2, 1, 2, Z.from_int(2));
  CHECK(e.at(1, 1) == Z.one());
  CHECK(e.at(1, 2) == Z.from_int(2));
  CHECK(e.at(2, 2) == Z.one());
  TriMat d = elem_diag(Z, 2, 2, Z.from_int(-1));
  CHECK(d.at(1, 1) == Z.one());
  CHECK(d.at(1, 2).is_zero());
  CHECK(d.at(2, 2) == Z.from_int(-1));
  CHECK(elementary(Z, 3, 1, 2, Z.zero()).is_identity());
  CHECK_THROWS_AS(elementary(Z, 3, 2, 2, Z.one()), MathError);
  CHECK_THROWS_AS(elementary(Z, 3, 3, 1, Z.one()), MathError);
  CHECK_THROWS_AS(elem_diag(Z, 2, 1, Z.from_int(2)), MathError);
}

TEST_CASE("commutator and conjugation examples") {
  const Ring& R = Ring::parse("gf(2)[t]");
  TriMat c = commutator(elementary(R, 3, 1, 2, E(R, "t")), elementary(R, 3, 2, 3, E(R, "t+1")));
  CHECK(c == elementary(R, 3, 1, 3, E(R, "t^2+t")));

  const Ring& L = Ring::parse("gf(5)[t,t^-1]");
  RingElem f = E(L, "3+t^2+4*t^-1");
  TriMat d = elem_diag(L, 2, 1, E(L, "t"));
  CHECK(d * elementary(L, 2, 1, 2, f) * inverse(d) == elementary(L, 2, 1, 2, E(L, "t") * f));

  const Ring& Z6 = Ring::parse("z[1/6]");
  CHECK(commutator(elementary(Z6, 4, 1, 2, E(Z6, "5/6")), elementary(Z6, 4, 3, 4, E(Z6, "7"))).is_identity());
}

TEST_CASE("elementary relations hold on random data") {
  Rng rng(11);
  auto o = small();
  for (const char* tag : kRings) {
    const Ring& R = Ring::parse(tag);
    for (unsigned n = 2; n <= 6; ++n) {
      std::uniform_int_distribution<unsigned> pick(1, n);
      for (int it = 0; it < 200; ++it) {
        unsigned i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
        if (i >= j) std::swap(i, j);
        if (k >= l) std::swap(k, l);
        RingElem r = R.random(rng, o), s = R.random(rng, o);
        RingElem u = R.random_unit(rng, o), v = R.random_unit(rng, o);
        if (i == j || k == l) {
          // diagonal relation d e_ij(r) d^-1 = e_ij(u_i u_j^-1 r)
          if (n < 2) continue;
          unsigned a = pick(rng), b = pick(rng);
          if (a == b) continue;
          if (a > b) std::swap(a, b);
          std::vector<RingElem> dv(n, R.one());
          dv[a - 1] = u;
          dv[b - 1] = v;
          TriMat d = TriMat::diag(R, dv);
          CHECK(d * elementary(R, n, a, b, r) * inverse(d) == elementary(R, n, a, b, u * v.inv() * r));
          continue;
        }
        TriMat eij = elementary(R, n, i, j, r), ekl = elementary(R, n, k, l, s);
        // additivity
        CHECK(eij * elementary(R, n, i, j, s) == elementary(R, n, i, j, r + s));
        TriMat c = commutator(eij, ekl);
        if (j == k && i != l)
          CHECK(c == elementary(R, n, i, l, r * s));
        else if (i == l && j != k)
          CHECK(c == elementary(R, n, k, j, -(r * s)));
        else if (j != k && i != l)
          CHECK(c.is_identity());
        CHECK(inverse(eij) == elementary(R, n, i, j, -r));
      }
    }
  }
}

TEST_CASE("normal form examples and round trip") {
  const Ring& F2 = Ring::parse("gf(2)");
  TriMat u = TriMat::identity(F2, 3);
  u.at(1, 2) = F2.one();
  u.at(2, 3) = F2.one();
  u.at(1, 3) = F2.one();
  UniNormalForm nf = normal_form(u);
  CHECK(nf.at(1, 2) == F2.one());
  CHECK(nf.at(2, 3) == F2.one());
  CHECK(nf.at(1, 3).is_zero());
  CHECK(nf.r.size() == 3);

  for (auto& x : normal_form(TriMat::identity(F2, 4)).r) CHECK(x.is_zero());

  const Ring& Zt = Ring::parse("z[t]");
  UniNormalForm c = normal_form(elementary(Zt, 3, 1, 3, E(Zt, "2*t-1")));
  CHECK(c.r == std::vector<RingElem>{Zt.zero(), Zt.zero(), E(Zt, "2*t-1")});
  CHECK_THROWS_AS(normal_form(elem_diag(Zt, 3, 1, Zt.from_int(-1))), MathError);

  Rng rng(5);
  for (const char* tag : kRings) {
    const Ring& R = Ring::parse(tag);
    for (unsigned n = 2; n <= 6; ++n) {
      GroupDesc U{GroupKind::U, n, &R};
      for (int it = 0; it < 40; ++it) {
        TriMat g = U.random(rng, small());
        CHECK(recompose(normal_form(g), R) == g);
      }
    }
  }
}

TEST_CASE("lower central series membership") {
  const Ring& R = Ring::parse("gf(3)[t]");
  CHECK(gamma_k_member(elementary(R, 3, 1, 3, E(R, "t")), 2));
  CHECK_FALSE(gamma_k_member(elementary(R, 3, 1, 2, R.one()), 2));
  for (unsigned k = 1; k <= 4; ++k) CHECK(gamma_k_member(TriMat::identity(R, 4), k));

  Rng rng(8);
  for (unsigned n = 3; n <= 6; ++n) {
    GroupDesc U{GroupKind::U, n, &R};
    for (unsigned k = 1; k + 1 < n; ++k)
      for (int it = 0; it < 30; ++it) {
        TriMat u = U.random(rng, small());
        // a random element of gamma_k: zero out short distances
        TriMat g = U.random(rng, small());
        for (unsigned i = 1; i <= n; ++i)
          for (unsigned j = i + 1; j <= n && j - i < k; ++j) g.at(i, j) = R.zero();
        REQUIRE(gamma_k_member(g, k));
        CHECK(gamma_k_member(commutator(u, g), k + 1));
      }
    // gamma_{n-1} is the corner subgroup
    TriMat z = elementary(R, n, 1, n, E(R, "t+2"));
    CHECK(gamma_k_member(z, n - 1));
    CHECK_FALSE(gamma_k_member(z * elementary(R, n, 1, n - 1, R.one()), n - 1));
  }
}

TEST_CASE("abelianization adds superdiagonals") {
  Rng rng(3);
  for (const char* tag : kRings) {
    const Ring& R = Ring::parse(tag);
    GroupDesc U{GroupKind::U, 5, &R};
    for (int it = 0; it < 40; ++it) {
      TriMat u = U.random(rng, small()), v = U.random(rng, small()), w = u * v;
      for (unsigned i = 1; i < 5; ++i) CHECK(w.at(i, i + 1) == u.at(i, i + 1) + v.at(i, i + 1));
    }
  }
}

TEST_CASE("group tags, membership and canonical forms") {
  const Ring& R = Ring::parse("gf(4)[t,t^-1]");
  CHECK(GroupDesc::parse("b2plus", R).kind == GroupKind::BPlus);
  CHECK(GroupDesc::parse("PB3", R).kind == GroupKind::PB);
  CHECK(GroupDesc::parse("aff-plus", R).kind == GroupKind::AffPlus);
  CHECK(GroupDesc::parse("u4", R).n == 4);
  CHECK(GroupDesc::parse("w3", R).tag() == "w3");
  CHECK_THROWS_AS(GroupDesc::parse("u1", R), MathError);
  CHECK_THROWS_AS(GroupDesc::parse("x3", R), MathError);

  GroupDesc Bp = GroupDesc::parse("b2plus", R);
  TriMat g = elem_diag(R, 2, 1, E(R, "t^2"));
  CHECK(Bp.contains(g));
  CHECK_FALSE(Bp.contains(elem_diag(R, 2, 1, E(R, "w*t^2"))));
  CHECK(GroupDesc::parse("b2", R).contains(elem_diag(R, 2, 1, E(R, "w*t^2"))));

  GroupDesc PB = GroupDesc::parse("pb3", R);
  TriMat m = elem_diag(R, 3, 1, E(R, "t")) * elementary(R, 3, 2, 3, E(R, "1+t"));
  TriMat c = PB.canonical(m);
  CHECK(c.at(1, 1).is_one());
  CHECK(PB.equal(m, m.scaled(E(R, "w*t^-3"))));
}

TEST_CASE("projective classes are invariant under scalars") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const Ring& R = Ring::parse("gf(" + std::to_string(q) + ")");
    GroupDesc PB{GroupKind::PB, 2, &R};
    for (auto& d1 : R.units())
      for (auto& d2 : R.units()) {
        TriMat d = TriMat::diag(R, {d1, d2});
        for (auto& u : R.units()) CHECK(PB.canonical(d) == PB.canonical(d.scaled(u)));
      }
  }
}

TEST_CASE("finite enumeration") {
  const Ring& F2 = Ring::parse("gf(2)");
  const Ring& F3 = Ring::parse("gf(3)");
  GroupDesc U3{GroupKind::U, 3, &F2};
  auto all = U3.enumerate();
  CHECK(all.size() == 8);
  CHECK(all.front().is_identity());
  // lexicographic: last normal-form coefficient moves fastest
  CHECK(all[1] == elementary(F2, 3, 1, 3, F2.one()));
  CHECK(GroupDesc{GroupKind::B, 2, &F3}.order() == 12);
  CHECK(GroupDesc{GroupKind::PB, 3, &F3}.order() == 27 * 4);
  CHECK(GroupDesc{GroupKind::Aff, 2, &Ring::parse("gf(5)")}.enumerate().size() == 20);
  CHECK(GroupDesc{GroupKind::W, 4, &Ring::parse("gf(4)")}.enumerate().size() == 4 * 27);
  CHECK_THROWS_AS(GroupDesc({GroupKind::U, 3, &Ring::parse("gf(2)[t]")}).enumerate(), MathError);
  CHECK_THROWS_AS(GroupDesc({GroupKind::B, 5, &Ring::parse("gf(4)")}).enumerate(1000), MathError);
  std::set<TriMat> distinct;
  for (auto& g : GroupDesc{GroupKind::PB, 3, &F3}.enumerate()) distinct.insert(g);
  CHECK(distinct.size() == 108);
}

TEST_CASE("centers of small finite groups") {
  const Ring& F3 = Ring::parse("gf(3)");
  auto zb = center_bruteforce({GroupKind::B, 2, &F3});
  REQUIRE(zb.size() == 2);
  CHECK(zb[0].is_identity());
  CHECK(zb[1] == TriMat::identity(F3, 2).scaled(F3.from_int(2)));

  const Ring& F2 = Ring::parse("gf(2)");
  auto zu = center_bruteforce({GroupKind::U, 3, &F2});
  REQUIRE(zu.size() == 2);
  CHECK(zu[0] == elementary(F2, 3, 1, 3, F2.zero()));
  CHECK(zu[1] == elementary(F2, 3, 1, 3, F2.one()));

  const Ring& F4 = Ring::parse("gf(4)");
  auto zw = center_bruteforce({GroupKind::W, 3, &F4});
  CHECK(zw.size() == 3);  // r = 0 and u1 = u3, u2 free
  for (auto& z : zw) CHECK(wn_in_kernel(wn_from_matrix(z)));
}

TEST_CASE("W_n to Aff") {
  const Ring& L = Ring::parse("gf(4)[t,t^-1]");
  WnElem id = wn_make(L.zero(), {L.one(), L.one(), L.one()});
  CHECK(wn_to_aff(id) == AffElem{L.one(), L.zero()});
  WnElem w = wn_make(E(L, "t"), {E(L, "t"), L.one(), L.one()});
  CHECK(wn_to_aff(w) == AffElem{E(L, "t"), E(L, "t")});

  const Ring& Z2 = Ring::parse("z[1/2]");
  WnElem v = wn_make(Z2.from_int(5), {Z2.from_int(2), Z2.one(), Z2.from_int(4), Z2.from_int(2)});
  CHECK(wn_to_aff(v) == AffElem{Z2.one(), Z2.from_int(5)});
  CHECK_FALSE(wn_in_kernel(v));

  Rng rng(21);
  for (const char* tag : kRings) {
    const Ring& R = Ring::parse(tag);
    GroupDesc W{GroupKind::W, 4, &R};
    for (int it = 0; it < 60; ++it) {
      WnElem a = wn_from_matrix(W.random(rng, small())), b = wn_from_matrix(W.random(rng, small()));
      CHECK(wn_to_aff(wn_mul(a, b)) == aff_mul(wn_to_aff(a), wn_to_aff(b)));
      // the coordinate product agrees with the matrix product in PB_n
      CHECK(wn_to_matrix(wn_mul(a, b), R) == W.mul(wn_to_matrix(a, R), wn_to_matrix(b, R)));
      CHECK(wn_mul(a, wn_inv(a)) == wn_make(R.zero(), std::vector<RingElem>(4, R.one())));
      bool ker = wn_to_aff(a) == AffElem{R.one(), R.zero()};
      CHECK(ker == wn_in_kernel(a));
    }
  }
}

TEST_CASE("Aff is isomorphic to PB2") {
  Rng rng(4);
  for (const char* tag : kRings) {
    const Ring& R = Ring::parse(tag);
    GroupDesc PB{GroupKind::PB, 2, &R}, A{GroupKind::Aff, 2, &R};
    for (int it = 0; it < 60; ++it) {
      AffElem a = pb2_to_aff(A.random(rng, small())), b = pb2_to_aff(A.random(rng, small()));
      CHECK(PB.contains(aff_to_pb2(a)));
      CHECK(aff_to_pb2(aff_mul(a, b)) == PB.mul(aff_to_pb2(a), aff_to_pb2(b)));
      CHECK(pb2_to_aff(aff_to_pb2(a)) == a);
      CHECK(aff_to_matrix(aff_mul(a, aff_inv(a))).is_identity());
      TriMat g = PB.random(rng, small());
      CHECK(aff_to_pb2(pb2_to_aff(g)) == g);
    }
  }
}

TEST_CASE("word and JSON forms") {
  const Ring& R = Ring::parse("gf(4)[t]");
  TriMat g = elementary(R, 3, 1, 2, E(R, "(w+1)*t^2")) * elementary(R, 3, 2, 3, E(R, "t")) *
             TriMat::diag(R, {E(R, "w"), R.one(), E(R, "w+1")});
  std::string w = to_word(g);
  CHECK(w.rfind("e(1,2;", 0) == 0);
  CHECK(parse_word(w, R, 3) == g);
  CHECK(matrix_from_json(to_json(g)) == g);
  CHECK(to_json(g)["ring"] == "gf(4)[t]");
  CHECK(to_word(TriMat::identity(R, 2)) == "e(1,2;0) d(1;1) d(2;1)");
  CHECK_THROWS_AS(parse_word("e(1,2;t) x", R, 3), MathError);
  CHECK_THROWS_AS(parse_word("e(2,1;t)", R, 3), MathError);
  nlohmann::json bad = to_json(g);
  bad["rows"][1][0] = "1";
  CHECK_THROWS_AS(matrix_from_json(bad), MathError);
}

TEST_CASE("iterated commutators escape every nilpotency bound") {
  const Ring& F4 = Ring::parse("gf(4)");
  GroupDesc PB2{GroupKind::PB, 2, &F4};
  auto res = iterated_commutator_escape(PB2.canonical(elem_diag(F4, 2, 1, E(F4, "w"))), 5);
  CHECK(res.seeded);
  CHECK(res.iterates.size() == 5);
  CHECK(res.all_nonzero);
  CHECK(res.matches_closed_form);
  for (auto& x : res.iterates) CHECK_FALSE(x.is_identity());

  // (k,k+1) coefficient of [s,_l m] carries (1 - rho)^(l+1): s already has one factor.
  // Frozen from an independent iteration: t, -t, t, ... over F5[t].
  const Ring& R = Ring::parse("gf(5)[t]");
  TriMat m = elementary(R, 3, 1, 2, E(R, "t")) * elem_diag(R, 3, 1, R.from_int(2));
  auto r2 = iterated_commutator_escape(m, 8);
  CHECK_FALSE(r2.seeded);
  CHECK(r2.k == 1);
  CHECK(r2.rho == R.from_int(2));
  CHECK(r2.s.at(1, 2) == E(R, "4*t"));
  for (unsigned l = 1; l <= 8; ++l) CHECK(r2.leading[l - 1] == E(R, l % 2 ? "t" : "4*t"));
  CHECK(r2.all_nonzero);
  CHECK(r2.matches_closed_form);

  CHECK_THROWS_AS(iterated_commutator_escape(elementary(R, 3, 1, 2, E(R, "t")), 3), MathError);
  CHECK_THROWS_AS(iterated_commutator_escape(TriMat::identity(R, 3).scaled(R.from_int(3)), 3), MathError);
}
