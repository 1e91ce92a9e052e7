#include "twistconj/automorphy.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace twistconj {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Splits on sep at parenthesis depth 0.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw MathError("unbalanced parentheses in '" + s + "'");
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw MathError("unbalanced parentheses in '" + s + "'");
  out.push_back(trim(cur));
  return out;
}

// "name(args)" -> (name, args); "name" -> (name, nullopt)
std::pair<std::string, std::optional<std::string>> call_form(const std::string& s0) {
  std::string s = trim(s0);
  size_t open = s.find('(');
  if (open == std::string::npos) return {s, std::nullopt};
  if (s.back() != ')') throw MathError("malformed term '" + s + "'");
  return {trim(s.substr(0, open)), s.substr(open + 1, s.size() - open - 2)};
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Last top-level comma splits "<endo>,<a>".
std::pair<std::string, std::string> split_last_comma(const std::string& s) {
  auto parts = split_top(s, ',');
  if (parts.size() < 2) throw MathError("expected two arguments in '" + s + "'");
  std::string head = parts[0];
  for (size_t i = 1; i + 1 < parts.size(); ++i) head += "," + parts[i];
  return {head, parts.back()};
}

RingElem two_inverse(const Ring& R) {
  RingElem two = R.from_int(2);
  if (!two.is_unit()) throw MathError("2 is not a unit of " + R.tag());
  return two.inv();
}

bool is_diagonal(const TriMat& m) {
  for (unsigned i = 1; i <= m.n(); ++i)
    for (unsigned j = i + 1; j <= m.n(); ++j)
      if (!m.at(i, j).is_zero()) return false;
  return true;
}

TriMat diag_part(const TriMat& m) { return TriMat::diag(m.ring(), m.diagonal()); }

[[noreturn]] void domain_error(const AutoDescriptor& phi, const GroupDesc& G) {
  throw MathError(phi.str() + " does not act on " + G.tag() + "(" + G.ring().tag() + "); domain: " + phi.domain());
}

}  // namespace

// ---------------------------------------------------------------- EndoDesc

EndoDesc EndoDesc::half_square(const RingElem& a) {
  two_inverse(a.ring());
  return {Kind::HalfSquare, a, 0, -1, {}};
}

EndoDesc EndoDesc::linear_on_window(long lo, long hi, std::vector<std::vector<FieldElem>> M) {
  size_t d = hi >= lo ? size_t(hi - lo + 1) : 0;
  if (M.size() != d) throw MathError("window matrix has wrong size");
  for (auto& row : M)
    if (row.size() != d) throw MathError("window matrix is not square");
  return {Kind::LinearOnWindow, {}, lo, hi, std::move(M)};
}

EndoDesc EndoDesc::parse(const std::string& s, const Ring& R) {
  auto [name, args] = call_form(s);
  name = lower(name);
  if (name == "zero" && !args) return zero();
  if (name == "mul" && args) return mul_by(R.parse_elem(*args));
  if ((name == "half" || name == "halfsquare") && args) return half_square(R.parse_elem(*args));
  if (name == "window" && args) {
    if (!R.field()) throw MathError("window endomorphisms need a ring over a finite field");
    size_t semi = args->find(';');
    if (semi == std::string::npos) throw MathError("window(lo,hi;rows) expected");
    auto bounds = split_top(args->substr(0, semi), ',');
    if (bounds.size() != 2) throw MathError("window(lo,hi;rows) expected");
    long lo = std::stol(bounds[0]), hi = std::stol(bounds[1]);
    std::vector<std::vector<FieldElem>> M;
    for (auto& row : split_top(args->substr(semi + 1), '|')) {
      std::vector<FieldElem> r;
      for (auto& c : split_top(row, ',')) r.emplace_back(*R.field(), R.field()->parse(c));
      M.push_back(r);
    }
    return linear_on_window(lo, hi, M);
  }
  throw MathError("unknown endomorphism '" + s + "'");
}

RingElem EndoDesc::operator()(const RingElem& r) const {
  const Ring& R = r.ring();
  switch (kind) {
    case Kind::Zero: return R.zero();
    case Kind::MulBy: return c * r;
    case Kind::HalfSquare: return c * r * r * two_inverse(R);
    case Kind::LinearOnWindow: {
      const GaloisField* F = R.field();
      if (!F) throw MathError("window endomorphism on a ring without coefficient field");
      FPoly in = R.kind() == RingKind::GF ? FPoly::constant(r.fe()) : r.fpoly();
      FPoly out;
      size_t d = M.size();
      for (size_t j = 0; j < d; ++j) {
        FieldElem x = in.coeff(lo + long(j));
        if (x.is_zero()) continue;
        for (size_t i = 0; i < d; ++i) out.add_term(lo + long(i), M[i][j] * x);
      }
      return R.from_fpoly(out);
    }
  }
  return R.zero();
}

std::string EndoDesc::str() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::MulBy: return "mul(" + c.str() + ")";
    case Kind::HalfSquare: return "half(" + c.str() + ")";
    case Kind::LinearOnWindow: {
      std::string s = "window(" + std::to_string(lo) + "," + std::to_string(hi) + ";";
      for (size_t i = 0; i < M.size(); ++i) {
        if (i) s += "|";
        for (size_t j = 0; j < M[i].size(); ++j) s += (j ? "," : "") + M[i][j].str();
      }
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------- descriptors

std::string AutoDescriptor::str() const {
  switch (kind) {
    case Kind::Identity: return "id";
    case Kind::Inner: return "inner(" + to_word(g) + ")";
    case Kind::Central: return "central(" + std::to_string(index) + "," + lambda.str() + ")";
    case Kind::SigmaA: return "sigma(" + lambda.str() + "," + a.str() + ")";
    case Kind::SigmaAPrime: return "sigmap(" + lambda.str() + "," + a.str() + ")";
    case Kind::Flip: return "flip";
    case Kind::FlipB: return "flipb";
    case Kind::RingAuto: return "ring(" + alpha.str() + ")";
    case Kind::CompanionPhi: return "phiP(" + print_poly(P) + ")";
    case Kind::MulCenter: return "mul(" + a.str() + ")";
    case Kind::PhiA: return "phiA(" + a.str() + ")";
    case Kind::PhiB: return "phiB(" + a.str() + ")";
    case Kind::AugB2: return "augB2";
    case Kind::AugB2Plus: return "augB2plus";
    case Kind::TauAlpha: return "tauAlpha(" + alpha.str() + ")";
    case Kind::Compose: {
      std::string s;
      for (size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i].str();
      return s.empty() ? "id" : s;
    }
    case Kind::Phi0: return "phi0[" + parts.at(0).str() + "]";
  }
  return "?";
}

std::string AutoDescriptor::domain() const {
  switch (kind) {
    case Kind::Identity: return "any group";
    case Kind::Inner: return "groups normalised by the conjugating element";
    case Kind::Central:
    case Kind::Flip: return "U_n";
    case Kind::SigmaA:
    case Kind::SigmaAPrime: return "U_n, n >= 4";
    case Kind::FlipB: return "B_n, U_n, PB_n";
    case Kind::RingAuto: return "groups over R stable under the ring automorphism";
    case Kind::CompanionPhi: return "U_2, B_2, Aff over F_q[t]";
    case Kind::MulCenter: return "U_2";
    case Kind::PhiA: return "Aff+, U_2 over F_q[t,t^-1]";
    case Kind::PhiB: return "B_2+, Aff+, U_2 over F_q[t,t^-1]";
    case Kind::AugB2: return "B_2(Z[t])";
    case Kind::AugB2Plus: return "B_2+(Z[t,t^-1])";
    case Kind::TauAlpha: return "R x R (additive)";
    case Kind::Compose: return "intersection of the parts";
    case Kind::Phi0: return "N x| Q with N abelian";
  }
  return "?";
}

AutoDescriptor auto_identity() { return {}; }

AutoDescriptor auto_inner(const TriMat& g) {
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::Inner;
  inverse(g);  // throws for a singular matrix
  d.g = g;
  return d;
}

AutoDescriptor auto_central(unsigned i, const EndoDesc& lambda) {
  if (!lambda.additive()) throw MathError("central automorphisms need an additive endomorphism");
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::Central;
  d.index = i;
  d.lambda = lambda;
  return d;
}

AutoDescriptor auto_sigma(const EndoDesc& lambda, const RingElem& a, bool prime, size_t checks) {
  const Ring& R = a.ring();
  if (lambda.kind == EndoDesc::Kind::HalfSquare) two_inverse(R);
  Rng rng(0);
  for (size_t k = 0; k < checks; ++k) {
    RingElem r = R.random(rng), s = R.random(rng);
    if (lambda(r + s) != a * r * s + lambda(r) + lambda(s))
      throw MathError("lambda(r+s) != a r s + lambda(r) + lambda(s) for r = " + r.str() + ", s = " + s.str());
  }
  AutoDescriptor d;
  d.kind = prime ? AutoDescriptor::Kind::SigmaAPrime : AutoDescriptor::Kind::SigmaA;
  d.lambda = lambda;
  d.a = a;
  return d;
}

AutoDescriptor auto_flip(bool whole_borel) {
  AutoDescriptor d;
  d.kind = whole_borel ? AutoDescriptor::Kind::FlipB : AutoDescriptor::Kind::Flip;
  return d;
}

AutoDescriptor auto_ring(const RingAutoDesc& alpha) {
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::RingAuto;
  d.alpha = alpha;
  return d;
}

AutoDescriptor auto_companion(const FPoly& P) {
  if (P.is_zero() || P.low() < 0 || P.deg() < 2) throw MathError("companion automorphism needs a polynomial of degree >= 2");
  if (!P.lead().is_one()) throw MathError("companion polynomial must be monic");
  if (!is_irreducible(P, *P.lead().f)) throw MathError("companion polynomial " + print_poly(P) + " is reducible");
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::CompanionPhi;
  d.P = P;
  return d;
}

AutoDescriptor auto_mul(const RingElem& a) {
  if (!a.is_unit()) throw MathError("multiplication automorphism needs a unit, got " + a.str());
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::MulCenter;
  d.a = a;
  return d;
}

AutoDescriptor auto_phiA(const RingElem& a) {
  AutoDescriptor d = auto_mul(a);
  d.kind = AutoDescriptor::Kind::PhiA;
  return d;
}

AutoDescriptor auto_phiB(const RingElem& a) {
  AutoDescriptor d = auto_mul(a);
  d.kind = AutoDescriptor::Kind::PhiB;
  return d;
}

AutoDescriptor auto_augB2(bool plus) {
  AutoDescriptor d;
  d.kind = plus ? AutoDescriptor::Kind::AugB2Plus : AutoDescriptor::Kind::AugB2;
  return d;
}

AutoDescriptor auto_tau_alpha(const RingAutoDesc& alpha) {
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::TauAlpha;
  d.alpha = alpha;
  return d;
}

AutoDescriptor auto_compose(std::vector<AutoDescriptor> parts) {
  if (parts.size() == 1) return parts[0];
  AutoDescriptor d;
  d.kind = AutoDescriptor::Kind::Compose;
  d.parts = std::move(parts);
  return d;
}

// ---------------------------------------------------------------- parsing

namespace {

AutoDescriptor parse_factor(const std::string& f, const Ring& R, const GroupDesc* G) {
  auto [name0, args] = call_form(f);
  std::string name = lower(name0);
  auto need = [&](bool has) {
    if (has != args.has_value()) throw MathError("bad arguments for '" + name0 + "'");
  };
  if (name == "id") return need(false), auto_identity();
  if (name == "flip") return need(false), auto_flip(false);
  if (name == "flipb") return need(false), auto_flip(true);
  if (name == "augb2") return need(false), auto_augB2(false);
  if (name == "augb2plus") return need(false), auto_augB2(true);
  need(true);
  if (name == "inner") {
    if (!G) throw MathError("inner automorphisms need a group");
    return auto_inner(parse_word(*args, R, G->n));
  }
  if (name == "central") {
    auto parts = split_top(*args, ',');
    if (parts.size() < 2) throw MathError("central(i,<endo>) expected");
    std::string endo = parts[1];
    for (size_t i = 2; i < parts.size(); ++i) endo += "," + parts[i];
    unsigned i = static_cast<unsigned>(std::stoul(parts[0]));
    if (G && (i < 1 || i >= G->n)) throw MathError("central index " + parts[0] + " out of range for " + G->tag());
    return auto_central(i, EndoDesc::parse(endo, R));
  }
  if (name == "sigma" || name == "sigmap") {
    auto [endo, a] = split_last_comma(*args);
    return auto_sigma(EndoDesc::parse(endo, R), R.parse_elem(a), name == "sigmap");
  }
  if (name == "ring") return auto_ring(RingAutoDesc::parse(*args, R));
  if (name == "taualpha") return auto_tau_alpha(RingAutoDesc::parse(*args, R));
  if (name == "phip") {
    if (!R.field()) throw MathError("phiP needs a ring over a finite field");
    return auto_companion(parse_fpoly(*args, *R.field()));
  }
  if (name == "mul") return auto_mul(R.parse_elem(*args));
  if (name == "phia") return auto_phiA(R.parse_elem(*args));
  if (name == "phib") return auto_phiB(R.parse_elem(*args));
  throw MathError("unknown automorphism '" + name0 + "'");
}

AutoDescriptor parse_word_impl(const std::string& word, const Ring& R, const GroupDesc* G) {
  std::vector<AutoDescriptor> parts;
  for (auto& f : split_top(word, '*')) {
    if (f.empty()) throw MathError("empty factor in automorphism word '" + word + "'");
    parts.push_back(parse_factor(f, R, G));
  }
  return auto_compose(parts);
}

}  // namespace

AutoDescriptor parse_auto(const std::string& word, const GroupDesc& G) { return parse_word_impl(word, G.ring(), &G); }
AutoDescriptor parse_additive_auto(const std::string& word, const Ring& R) { return parse_word_impl(word, R, nullptr); }

// ---------------------------------------------------------------- companion

std::vector<std::vector<FieldElem>> companion_matrix(const FPoly& P) {
  long d = P.deg();
  const GaloisField& F = *P.lead().f;
  std::vector<std::vector<FieldElem>> C(d, std::vector<FieldElem>(d, FieldElem(F, 0)));
  for (long i = 1; i < d; ++i) C[i][i - 1] = FieldElem(F, 1);
  for (long i = 0; i < d; ++i) C[i][d - 1] = -P.coeff(i);
  return C;
}

FPoly companion_apply(const FPoly& P, const FPoly& r) {
  if (r.is_zero()) return r;
  if (r.low() < 0) throw MathError("companion automorphism acts on F_q[t] only");
  long d = P.deg();
  FPoly out;
  for (long blk = 0; blk * d <= r.deg(); ++blk) {
    long base = blk * d;
    FieldElem top = r.coeff(base + d - 1);
    for (long i = 0; i < d; ++i) {
      FieldElem v = i ? r.coeff(base + i - 1) : FieldElem();
      if (!top.is_zero()) v = v - P.coeff(i) * top;
      out.add_term(base + i, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------- apply

namespace {

bool over_laurent_field(const Ring& R) { return R.kind() == RingKind::GFLaurent; }

// Images of e_{i,j}(r) under a map given on superdiagonal generators.
TriMat sigma_elem(const AutoDescriptor& phi, const Ring& R, unsigned n, unsigned i, unsigned j, const RingElem& r) {
  if (j > i + 1) return commutator(sigma_elem(phi, R, n, i, i + 1, r), sigma_elem(phi, R, n, i + 1, j, R.one()));
  bool sp = phi.kind == AutoDescriptor::Kind::SigmaAPrime;
  TriMat e = elementary(R, n, i, j, r);
  if (!sp && i == 1)
    return e * elementary(R, n, 2, n, phi.a * r) * elementary(R, n, 1, n, phi.lambda(r) - phi.a * r * r);
  if (sp && i == n - 1) return e * elementary(R, n, 1, n - 1, phi.a * r) * elementary(R, n, 1, n, phi.lambda(r));
  return e;
}

TriMat flip_matrix(const TriMat& A) {
  TriMat B = inverse(A), out(A.ring(), A.n());
  unsigned n = A.n();
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i; j <= n; ++j) {
      const RingElem& x = B.at(n + 1 - j, n + 1 - i);
      out.at(i, j) = (i + j) % 2 ? -x : x;
    }
  return out;
}

TriMat map_entries(const TriMat& g, const std::function<RingElem(const RingElem&)>& f) {
  TriMat out(g.ring(), g.n());
  for (unsigned i = 1; i <= g.n(); ++i)
    for (unsigned j = i; j <= g.n(); ++j) out.at(i, j) = f(g.at(i, j));
  return out;
}

}  // namespace

TriMat apply(const AutoDescriptor& phi, const GroupDesc& G, const TriMat& g0) {
  using K = AutoDescriptor::Kind;
  TriMat g = G.canonical(g0);
  const Ring& R = G.ring();
  unsigned n = G.n;
  switch (phi.kind) {
    case K::Identity: return g;
    case K::Inner:
      if (phi.g.n() != n || phi.g.ring_ptr() != G.R) domain_error(phi, G);
      return G.canonical(phi.g * g * inverse(phi.g));
    case K::Central: {
      if (G.kind != GroupKind::U || phi.index < 1 || phi.index >= n) domain_error(phi, G);
      return g * elementary(R, n, 1, n, phi.lambda(g.at(phi.index, phi.index + 1)));
    }
    case K::SigmaA:
    case K::SigmaAPrime: {
      if (G.kind != GroupKind::U || n < 4) domain_error(phi, G);
      UniNormalForm nf = normal_form(g);
      TriMat out = TriMat::identity(R, n);
      size_t idx = 0;
      for (auto [i, j] : nf.positions()) {
        const RingElem& r = nf.r[idx++];
        if (!r.is_zero()) out = out * sigma_elem(phi, R, n, i, j, r);
      }
      return out;
    }
    case K::Flip:
      if (G.kind != GroupKind::U) domain_error(phi, G);
      return flip_matrix(g);
    case K::FlipB:
      if (G.kind != GroupKind::B && G.kind != GroupKind::U && G.kind != GroupKind::PB) domain_error(phi, G);
      return G.canonical(flip_matrix(g));
    case K::RingAuto:
      check_ring_auto(phi.alpha, R);
      return G.canonical(map_entries(g, [&](const RingElem& x) { return apply_ring_auto(phi.alpha, x); }));
    case K::CompanionPhi: {
      bool ok = n == 2 && R.kind() == RingKind::GFPoly &&
                (G.kind == GroupKind::U || G.kind == GroupKind::B || G.kind == GroupKind::Aff);
      if (!ok || phi.P.lead().f != R.field()) domain_error(phi, G);
      TriMat out = g;
      out.at(1, 2) = R.from_fpoly(companion_apply(phi.P, g.at(1, 2).fpoly()));
      return out;
    }
    case K::MulCenter: {
      if (G.kind != GroupKind::U || n != 2 || phi.a.ring_ptr() != G.R) domain_error(phi, G);
      TriMat out = g;
      out.at(1, 2) = phi.a * g.at(1, 2);
      return out;
    }
    case K::PhiA:
    case K::PhiB: {
      bool ok = n == 2 && over_laurent_field(R) && phi.a.ring_ptr() == G.R &&
                (G.kind == GroupKind::U || G.kind == GroupKind::AffPlus ||
                 (phi.kind == K::PhiB && G.kind == GroupKind::BPlus));
      if (!ok) domain_error(phi, G);
      TriMat out = map_entries(g, [](const RingElem& x) { return apply_ring_auto(RingAutoDesc::flip(), x); });
      out.at(1, 2) = phi.a * out.at(1, 2);
      return G.canonical(out);
    }
    case K::AugB2: {
      if (G.kind != GroupKind::B || n != 2 || R.kind() != RingKind::ZPoly) domain_error(phi, G);
      return g.scaled(R.from_int(sign_augmentation(g.at(1, 2).zpoly())));
    }
    case K::AugB2Plus: {
      if (G.kind != GroupKind::BPlus || n != 2 || R.kind() != RingKind::ZLaurent) domain_error(phi, G);
      BigInt e = augmentation(g.at(1, 2).zpoly());
      if (!e.fits_slong_p()) throw MathError("augmentation exponent out of range");
      return g.scaled(R.t_pow(e.get_si()));
    }
    case K::TauAlpha: throw MathError("tauAlpha acts on R x R only; use the additive interface");
    case K::Compose: {
      TriMat x = g;
      for (auto it = phi.parts.rbegin(); it != phi.parts.rend(); ++it) x = apply(*it, G, x);
      return x;
    }
    case K::Phi0: {
      // g = v q: phi0(g) = phi(v) * (diagonal part of phi(q))
      TriMat v = unipotent_part(g), q = diag_part(g);
      return G.canonical(apply(phi.parts.at(0), G, v) * diag_part(apply(phi.parts.at(0), G, q)));
    }
  }
  domain_error(phi, G);
}

size_t additive_arity(const AutoDescriptor& phi) {
  using K = AutoDescriptor::Kind;
  switch (phi.kind) {
    case K::TauAlpha: return 2;
    case K::Compose: {
      size_t a = 0;
      for (auto& p : phi.parts) {
        size_t b = additive_arity(p);
        if (p.kind == K::Identity) continue;
        if (a && b != a) throw MathError("composition mixes R and R x R maps");
        a = b;
      }
      return a ? a : 1;
    }
    default: return 1;
  }
}

std::vector<RingElem> apply_additive(const AutoDescriptor& phi, const std::vector<RingElem>& x) {
  using K = AutoDescriptor::Kind;
  auto each = [&](const std::function<RingElem(const RingElem&)>& f) {
    if (x.size() != 1) throw MathError(phi.str() + " acts on R, got a tuple of size " + std::to_string(x.size()));
    return std::vector<RingElem>{f(x[0])};
  };
  switch (phi.kind) {
    case K::Identity: return x;
    case K::RingAuto:
      return each([&](const RingElem& r) {
        check_ring_auto(phi.alpha, r.ring());
        return apply_ring_auto(phi.alpha, r);
      });
    case K::CompanionPhi:
      return each([&](const RingElem& r) {
        if (r.ring().kind() != RingKind::GFPoly) throw MathError("phiP acts on F_q[t] only");
        return r.ring().from_fpoly(companion_apply(phi.P, r.fpoly()));
      });
    case K::MulCenter: return each([&](const RingElem& r) { return phi.a * r; });
    case K::PhiA:
    case K::PhiB:
      return each([&](const RingElem& r) {
        if (!over_laurent_field(r.ring())) throw MathError("phiA/phiB act on F_q[t,t^-1] only");
        return phi.a * apply_ring_auto(RingAutoDesc::flip(), r);
      });
    case K::TauAlpha: {
      if (x.size() != 2) throw MathError("tauAlpha acts on pairs");
      check_ring_auto(phi.alpha, x[0].ring());
      return {apply_ring_auto(phi.alpha, x[1]), apply_ring_auto(phi.alpha, x[0])};
    }
    case K::Compose: {
      std::vector<RingElem> y = x;
      for (auto it = phi.parts.rbegin(); it != phi.parts.rend(); ++it) y = apply_additive(*it, y);
      return y;
    }
    default: throw MathError(phi.str() + " has no additive form");
  }
}

RingElem apply_additive(const AutoDescriptor& phi, const RingElem& x) { return apply_additive(phi, std::vector<RingElem>{x}).at(0); }

// ---------------------------------------------------------------- checks

HomReport verify_homomorphism(const AutoDescriptor& phi, const GroupDesc& G, size_t samples, Rng& rng,
                              const RandomOpts& o) {
  HomReport rep;
  for (size_t k = 0; k < samples; ++k) {
    TriMat g = G.random(rng, o), h = G.random(rng, o);
    ++rep.checked;
    try {
      TriMat lhs = apply(phi, G, G.mul(g, h));
      TriMat rhs = G.mul(apply(phi, G, g), apply(phi, G, h));
      if (lhs != rhs) {
        rep.passed = false;
        rep.witness = {g, h};
        rep.detail = "phi(gh) = " + to_word(lhs) + " but phi(g)phi(h) = " + to_word(rhs);
        return rep;
      }
    } catch (const MathError& e) {
      rep.passed = false;
      rep.witness = {g, h};
      rep.detail = e.what();
      return rep;
    }
  }
  return rep;
}

namespace {

bool abelian_kernel_group(const GroupDesc& G) { return G.n == 2 || G.kind == GroupKind::W; }

// random element of the abelian normal factor N
TriMat random_N(const GroupDesc& G, Rng& rng, const RandomOpts& o) {
  if (G.kind == GroupKind::W || G.n == 2) return elementary(G.ring(), G.n, 1, G.n, G.ring().random(rng, o));
  return GroupDesc{GroupKind::U, G.n, G.R}.random(rng, o);
}

void check_unipotent_invariant(const AutoDescriptor& phi, const GroupDesc& G, size_t samples, Rng& rng,
                               const RandomOpts& o) {
  for (size_t k = 0; k < samples; ++k) {
    TriMat x = random_N(G, rng, o);
    TriMat y = apply(phi, G, x);
    if (!y.is_unitriangular())
      throw MathError("the unipotent subgroup is not invariant under " + phi.str() + ": " + to_word(x) + " -> " +
                      to_word(y));
  }
}

}  // namespace

Phi0Result make_phi0(const AutoDescriptor& phi, const GroupDesc& G, size_t samples, Rng& rng, const RandomOpts& o) {
  if (!abelian_kernel_group(G)) throw MathError("the normal factor of " + G.tag() + " is not abelian");
  check_unipotent_invariant(phi, G, samples, rng, o);
  Phi0Result res;
  res.factor_preserving = true;
  for (size_t k = 0; k < samples && res.factor_preserving; ++k) {
    TriMat q = G.canonical(diag_part(G.random(rng, o)));
    if (!is_diagonal(apply(phi, G, q))) res.factor_preserving = false;
  }
  if (res.factor_preserving) {
    res.phi0 = phi;
  } else {
    res.phi0.kind = AutoDescriptor::Kind::Phi0;
    res.phi0.parts = {phi};
  }
  for (size_t k = 0; k < samples; ++k) {
    TriMat x = random_N(G, rng, o);
    if (apply(res.phi0, G, x) != apply(phi, G, x)) res.restriction_agrees = false;
    TriMat g = G.random(rng, o);
    if (G.canonical(diag_part(apply(res.phi0, G, g))) != G.canonical(diag_part(apply(phi, G, g))))
      res.quotient_agrees = false;
  }
  res.hom = verify_homomorphism(res.phi0, G, samples, rng, o);
  return res;
}

InducedMap induced_on_quotient(const AutoDescriptor& phi, const GroupDesc& G, QuotientTag tag, Rng& rng,
                               size_t samples, const RandomOpts& o) {
  InducedMap out;
  out.tag = tag;
  const Ring& R = G.ring();
  unsigned n = G.n;
  if (tag == QuotientTag::Diagonal) {
    check_unipotent_invariant(phi, G, samples, rng, o);
    std::vector<unsigned> pos;
    if (G.kind == GroupKind::Aff || G.kind == GroupKind::AffPlus) pos = {1};
    else
      for (unsigned i = G.projective() ? 2 : 1; i <= n; ++i) pos.push_back(i);
    if (G.kind == GroupKind::U) pos.clear();
    auto gens = R.unit_group().free;
    size_t dim = pos.size() * gens.size();
    out.M.assign(dim, std::vector<long>(dim, 0));
    size_t col = 0;
    for (unsigned p : pos)
      for (auto& u : gens) {
        TriMat d = TriMat::identity(R, n);
        d.at(p, p) = u;
        TriMat img = apply(phi, G, G.canonical(d));
        size_t row = 0;
        for (unsigned p2 : pos) {
          auto exps = R.split_unit(img.at(p2, p2)).second;
          for (long e : exps) out.M[row++][col] = e;
        }
        ++col;
      }
    return out;
  }
  if (G.kind != GroupKind::U || n < 2) throw MathError("abelianization actions are defined on U_n");
  auto ab = [phi, G, n, &R](const std::vector<RingElem>& r) {
    TriMat x = TriMat::identity(R, n);
    for (unsigned i = 1; i < n; ++i) x = x * elementary(R, n, i, i + 1, r.at(i - 1));
    TriMat y = apply(phi, G, x);
    std::vector<RingElem> s;
    for (unsigned i = 1; i < n; ++i) s.push_back(y.at(i, i + 1));
    return s;
  };
  if (tag == QuotientTag::Abelianization) {
    out.arity = n - 1;
    out.map = ab;
    return out;
  }
  // E_mid: factors c and n - c with c = ceil((n-1)/2), 1-based
  unsigned c = n / 2, c2 = n - c;
  std::vector<unsigned> idx = c == c2 ? std::vector<unsigned>{c} : std::vector<unsigned>{c, c2};
  if (c > c2) std::swap(idx[0], idx[1]);
  for (size_t k = 0; k < samples; ++k) {
    std::vector<RingElem> v(n - 1, R.zero());
    for (unsigned i : idx) v[i - 1] = R.random(rng, o);
    auto w = ab(v);
    for (unsigned i = 1; i < n; ++i)
      if (std::find(idx.begin(), idx.end(), i) == idx.end() && !w[i - 1].is_zero())
        throw MathError("the middle subgroup is not invariant under " + phi.str());
  }
  out.arity = idx.size();
  out.map = [ab, idx, n, &R](const std::vector<RingElem>& r) {
    std::vector<RingElem> v(n - 1, R.zero());
    for (size_t k = 0; k < idx.size(); ++k) v[idx[k] - 1] = r.at(k);
    auto w = ab(v);
    std::vector<RingElem> s;
    for (unsigned i : idx) s.push_back(w[i - 1]);
    return s;
  };
  return out;
}

}  // namespace twistconj
