#include "twistconj/poly_ring.hpp"

#include <cctype>

namespace twistconj {

namespace {

struct RawTerm {
  bool neg = false;
  std::string coeff;  // may be empty (meaning 1)
  long exp = 0;
};

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(c));
  return out;
}

long parse_exp(const std::string& s, const std::string& whole) {
  std::string e = s;
  if (e.size() >= 2 && e.front() == '(' && e.back() == ')') e = e.substr(1, e.size() - 2);
  size_t i = (e.size() && (e[0] == '-' || e[0] == '+')) ? 1 : 0;
  if (i == e.size()) throw MathError("malformed exponent in '" + whole + "'");
  for (size_t k = i; k < e.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(e[k]))) throw MathError("malformed exponent in '" + whole + "'");
  return std::stol(e);
}

std::vector<RawTerm> split_terms(const std::string& input) {
  std::string s = squash(input);
  if (s.empty()) throw MathError("empty polynomial");
  std::vector<std::string> pieces;
  std::vector<bool> negs;
  int depth = 0;
  std::string cur;
  bool neg = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw MathError("unbalanced parentheses in '" + input + "'");
    bool sep = depth == 0 && (c == '+' || c == '-') && !(i > 0 && s[i - 1] == '^');
    if (sep) {
      if (cur.empty()) {
        if (i != 0) throw MathError("malformed polynomial '" + input + "'");
      } else {
        pieces.push_back(cur);
        negs.push_back(neg);
      }
      cur.clear();
      neg = c == '-';
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw MathError("unbalanced parentheses in '" + input + "'");
  if (cur.empty()) throw MathError("malformed polynomial '" + input + "'");
  pieces.push_back(cur);
  negs.push_back(neg);

  std::vector<RawTerm> out;
  for (size_t k = 0; k < pieces.size(); ++k) {
    const std::string& p = pieces[k];
    RawTerm t;
    t.neg = negs[k];
    size_t tpos = std::string::npos;
    int d = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] == '(') ++d;
      if (p[i] == ')') --d;
      if (d == 0 && p[i] == 't') {
        tpos = i;
        break;
      }
    }
    if (tpos == std::string::npos) {
      t.coeff = p;
      t.exp = 0;
    } else {
      t.coeff = p.substr(0, tpos);
      if (!t.coeff.empty()) {
        if (t.coeff.back() != '*') throw MathError("expected '*' before t in '" + input + "'");
        t.coeff.pop_back();
        if (t.coeff.empty()) throw MathError("malformed term in '" + input + "'");
      }
      std::string rest = p.substr(tpos + 1);
      if (rest.empty())
        t.exp = 1;
      else if (rest[0] == '^')
        t.exp = parse_exp(rest.substr(1), input);
      else
        throw MathError("malformed term in '" + input + "'");
    }
    out.push_back(t);
  }
  return out;
}

std::string strip_parens(const std::string& s) {
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') return s.substr(1, s.size() - 2);
  return s;
}

template <class C, class CoeffStr>
std::string print_generic(const LaurentPoly<C>& p, CoeffStr cstr, bool signed_coeffs) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto& [e, c0] : p.terms()) {
    C c = c0;
    bool negative = false;
    if constexpr (std::is_same_v<C, BigInt>) {
      if (signed_coeffs && c < 0) {
        negative = true;
        c = -c;
      }
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string cs = cstr(c);
    bool unit = cs == "1";
    if (e == 0) {
      out += cs;
      continue;
    }
    if (!unit) {
      if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
      out += cs + "*";
    }
    out += "t";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace

FPoly parse_fpoly(const std::string& s, const GaloisField& F) {
  FPoly p;
  for (auto& t : split_terms(s)) {
    uint32_t c = t.coeff.empty() ? 1 : F.parse(strip_parens(t.coeff));
    if (t.neg) c = F.neg(c);
    p.add_term(t.exp, FieldElem(F, c));
  }
  return p;
}

ZPoly parse_zpoly(const std::string& s) {
  ZPoly p;
  for (auto& t : split_terms(s)) {
    std::string cs = strip_parens(t.coeff);
    BigInt c = 1;
    if (!cs.empty()) {
      size_t i = (cs[0] == '-' || cs[0] == '+') ? 1 : 0;
      if (i == cs.size()) throw MathError("malformed integer coefficient in '" + s + "'");
      for (size_t k = i; k < cs.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(cs[k])))
          throw MathError("malformed integer coefficient in '" + s + "'");
      c = BigInt(cs[0] == '+' ? cs.substr(1) : cs);
    }
    if (t.neg) c = -c;
    p.add_term(t.exp, c);
  }
  return p;
}

std::string print_poly(const FPoly& p) {
  return print_generic(p, [](const FieldElem& c) { return c.str(); }, false);
}

std::string print_poly(const ZPoly& p) {
  return print_generic(p, [](const BigInt& c) { return c.get_str(); }, true);
}

FDivMod divmod(const FPoly& a, const FPoly& b) {
  if (b.is_zero()) throw MathError("division by zero polynomial");
  if (b.low() < 0 || (!a.is_zero() && a.low() < 0)) throw MathError("divmod needs non-negative exponents");
  FDivMod r;
  r.rem = a;
  long db = b.deg();
  FieldElem lb_inv = b.lead().inv();
  while (!r.rem.is_zero() && r.rem.deg() >= db) {
    long shift = r.rem.deg() - db;
    FieldElem c = r.rem.lead() * lb_inv;
    r.quot.add_term(shift, c);
    r.rem -= b.shifted(shift).scaled(c);
  }
  return r;
}

bool is_irreducible(const FPoly& f, const GaloisField& F) {
  if (f.is_zero() || f.low() < 0) return false;
  long d = f.deg();
  if (d <= 0) return false;
  if (d == 1) return true;
  if (f.low() > 0) return false;
  if (d <= 3) {
    for (auto& x : field_elements(F)) {
      FieldElem acc;
      for (auto& [e, c] : f.terms()) acc += c * x.pow(e);
      if (acc.is_zero()) return false;
    }
    return true;
  }
  for (long dg = 1; dg <= d / 2; ++dg) {
    unsigned long count = 1;
    for (long i = 0; i < dg; ++i) count *= F.q();
    for (unsigned long idx = 0; idx < count; ++idx) {
      FPoly g = FPoly::monomial(FieldElem(F, 1), dg);
      unsigned long v = idx;
      for (long i = 0; i < dg; ++i) {
        g.add_term(i, FieldElem(F, static_cast<uint32_t>(v % F.q())));
        v /= F.q();
      }
      if (divmod(f, g).rem.is_zero()) return false;
    }
  }
  return true;
}

std::vector<FPoly> monic_irreducibles(const GaloisField& F, unsigned degree) {
  std::vector<FPoly> out;
  unsigned long count = 1;
  for (unsigned i = 0; i < degree; ++i) count *= F.q();
  for (unsigned long idx = 0; idx < count; ++idx) {
    FPoly g = FPoly::monomial(FieldElem(F, 1), degree);
    unsigned long v = idx;
    for (unsigned i = 0; i < degree; ++i) {
      g.add_term(i, FieldElem(F, static_cast<uint32_t>(v % F.q())));
      v /= F.q();
    }
    if (is_irreducible(g, F)) out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------- ring automorphisms

namespace {

FieldElem const_field(const RingElem& x) {
  if (x.ring().kind() == RingKind::GF) return x.fe();
  const FPoly& p = x.fpoly();
  if (!p.is_zero() && (p.size() > 1 || p.low() != 0)) throw MathError("expected a constant, got " + x.str());
  return p.is_zero() ? FieldElem(*x.ring().field(), 0) : p.coeff(0);
}

BigInt const_int(const RingElem& x) {
  switch (x.ring().kind()) {
    case RingKind::Z: return x.integer();
    case RingKind::ZPoly:
    case RingKind::ZLaurent: {
      const ZPoly& p = x.zpoly();
      if (!p.is_zero() && (p.size() > 1 || p.low() != 0)) throw MathError("expected a constant, got " + x.str());
      return p.coeff(0);
    }
    default: throw MathError("expected an integer constant");
  }
}

template <class C>
LaurentPoly<C> substitute(const LaurentPoly<C>& x, const C& a, const C& b) {
  LaurentPoly<C> out;
  if (is_zero(b)) {
    for (auto& [e, c] : x.terms()) {
      C ae = a;
      if constexpr (std::is_same_v<C, FieldElem>) {
        ae = a.pow(e);
      } else {
        ae = (e % 2 == 0) ? C(1) : a;  // a = +-1
      }
      out.add_term(e, c * ae);
    }
    return out;
  }
  if (!x.is_zero() && x.low() < 0) throw MathError("t -> a*t+b with b != 0 needs non-negative exponents");
  if (x.is_zero()) return out;
  LaurentPoly<C> lin = LaurentPoly<C>::monomial(a, 1);
  lin.add_term(0, b);
  LaurentPoly<C> pw;
  if constexpr (std::is_same_v<C, FieldElem>)
    pw = LaurentPoly<C>::constant(FieldElem(*a.f, 1));
  else
    pw = LaurentPoly<C>::constant(C(1));
  long e = 0;
  for (auto& [ex, c] : x.terms()) {
    while (e < ex) {
      pw = pw * lin;
      ++e;
    }
    out += pw.scaled(c);
  }
  return out;
}

}  // namespace

RingAutoDesc RingAutoDesc::poly_sub(const RingElem& a, const RingElem& b) {
  if (a.ring_ptr() != b.ring_ptr()) throw MathError("t -> a*t+b: a and b from different rings");
  const Ring& R = a.ring();
  if (R.over_field()) {
    if (const_field(a).is_zero()) throw MathError("t -> a*t+b needs a != 0");
    const_field(b);
  } else {
    BigInt ai = const_int(a);
    const_int(b);
    if (ai != 1 && ai != -1) throw MathError("t -> a*t+b needs a unit a");
  }
  return {Kind::PolySub, a, b};
}

RingAutoDesc RingAutoDesc::parse(const std::string& text, const Ring& R) {
  std::string s = squash(text);
  if (s == "id" || s == "identity") return identity();
  if (s.rfind("t->", 0) != 0) throw MathError("ring automorphism must look like t->a*t+b or t->t^-1: '" + text + "'");
  std::string rhs = s.substr(3);
  if (rhs == "t^-1" || rhs == "1/t" || rhs == "t^(-1)") return flip();
  RingElem a, b;
  if (R.over_field()) {
    FPoly p = parse_fpoly(rhs, *R.field());
    for (auto& [e, c] : p.terms())
      if (e != 0 && e != 1) throw MathError("ring automorphism must be affine in t: '" + text + "'");
    a = R.from_field(p.coeff(1));
    b = R.from_field(p.coeff(0));
  } else if (R.kind() == RingKind::Z || R.kind() == RingKind::ZPoly || R.kind() == RingKind::ZLaurent) {
    ZPoly p = parse_zpoly(rhs);
    for (auto& [e, c] : p.terms())
      if (e != 0 && e != 1) throw MathError("ring automorphism must be affine in t: '" + text + "'");
    a = R.from_bigint(p.coeff(1));
    b = R.from_bigint(p.coeff(0));
  } else {
    throw MathError("ring automorphisms of " + R.tag() + " are not supported");
  }
  RingAutoDesc d = poly_sub(a, b);
  if (d.is_identity()) return identity();
  return d;
}

bool RingAutoDesc::is_identity() const {
  if (kind == Kind::Identity) return true;
  if (kind == Kind::LaurentFlip) return false;
  return a.is_one() && b.is_zero();
}

std::string RingAutoDesc::str() const {
  switch (kind) {
    case Kind::Identity: return "id";
    case Kind::LaurentFlip: return "t->t^-1";
    case Kind::PolySub: {
      std::string as = a.str(), bs = b.str();
      if (as.find_first_of("+ ") != std::string::npos) as = "(" + as + ")";
      std::string out = "t->" + (as == "1" ? std::string() : as + "*") + "t";
      if (!b.is_zero()) out += "+" + ((bs.find_first_of("+- ") != std::string::npos) ? "(" + bs + ")" : bs);
      return out;
    }
  }
  return "?";
}

FPoly apply_ring_auto(const RingAutoDesc& alpha, const FPoly& x) {
  switch (alpha.kind) {
    case RingAutoDesc::Kind::Identity: return x;
    case RingAutoDesc::Kind::LaurentFlip: return x.flipped();
    case RingAutoDesc::Kind::PolySub: return substitute(x, const_field(alpha.a), const_field(alpha.b));
  }
  return x;
}

RingElem apply_ring_auto(const RingAutoDesc& alpha, const RingElem& x) {
  if (alpha.kind == RingAutoDesc::Kind::Identity) return x;
  const Ring& R = x.ring();
  if (!R.has_t()) {
    if (alpha.kind == RingAutoDesc::Kind::LaurentFlip) throw MathError("t -> t^-1 needs a Laurent ring, got " + R.tag());
    return x;
  }
  if (alpha.kind == RingAutoDesc::Kind::LaurentFlip) {
    if (!R.is_laurent()) throw MathError("t -> t^-1 does not preserve " + R.tag());
    if (R.over_field()) return R.from_fpoly(x.fpoly().flipped());
    return R.from_zpoly(x.zpoly().flipped());
  }
  if (alpha.a.ring_ptr() != &R) throw MathError("ring automorphism defined over a different ring");
  if (R.over_field()) return R.from_fpoly(substitute(x.fpoly(), const_field(alpha.a), const_field(alpha.b)));
  return R.from_zpoly(substitute(x.zpoly(), const_int(alpha.a), const_int(alpha.b)));
}

RingAutoDesc compose(const RingAutoDesc& alpha, const RingAutoDesc& beta) {
  using K = RingAutoDesc::Kind;
  if (alpha.is_identity()) return beta.is_identity() ? RingAutoDesc::identity() : beta;
  if (beta.is_identity()) return alpha;
  if (alpha.kind == K::LaurentFlip && beta.kind == K::LaurentFlip) return RingAutoDesc::identity();
  if (alpha.kind == K::PolySub && beta.kind == K::PolySub) {
    RingAutoDesc d = RingAutoDesc::poly_sub(alpha.a * beta.a, beta.a * alpha.b + beta.b);
    return d.is_identity() ? RingAutoDesc::identity() : d;
  }
  throw MathError("composition " + alpha.str() + " o " + beta.str() + " is not in the descriptor set");
}

void check_ring_auto(const RingAutoDesc& alpha, const Ring& R) {
  switch (alpha.kind) {
    case RingAutoDesc::Kind::Identity: return;
    case RingAutoDesc::Kind::LaurentFlip:
      if (!R.is_laurent()) throw MathError("t -> t^-1 is not an automorphism of " + R.tag());
      return;
    case RingAutoDesc::Kind::PolySub:
      if (alpha.a.ring_ptr() != &R) throw MathError("ring automorphism defined over a different ring");
      if (R.is_laurent() && !alpha.b.is_zero())
        throw MathError("t -> a*t+b with b != 0 is not an automorphism of " + R.tag());
      return;
  }
}

BigInt augmentation(const ZPoly& p) {
  BigInt s = 0;
  for (auto& [e, c] : p.terms()) s += c;
  return s;
}

int sign_augmentation(const ZPoly& p) {
  BigInt s = augmentation(p);
  return mpz_odd_p(s.get_mpz_t()) ? -1 : 1;
}

std::optional<long> f_adic_valuation(const FPoly& x, const FPoly& f) {
  if (f.is_zero() || f.deg() < 1) throw MathError("f must be non-constant");
  if (!f.lead().is_one()) throw MathError("f must be monic");
  if (f.low() < 0) throw MathError("f must be a polynomial");
  if (f.is_monomial() && f.deg() == 1) throw MathError("f = t is excluded");
  if (!is_irreducible(f, *f.lead().f)) throw MathError("f = " + print_poly(f) + " is reducible");
  if (x.is_zero()) return std::nullopt;
  FPoly y = x.shifted(-x.low());
  long v = 0;
  for (;;) {
    FDivMod qr = divmod(y, f);
    if (!qr.rem.is_zero()) break;
    y = qr.quot;
    ++v;
  }
  return v;
}

bool avoids_principal_exponents(const FPoly& p, unsigned char_p) {
  long P = static_cast<long>(char_p);
  for (auto& [e, c] : p.terms())
    if (e >= 2 * P - 1 && (e + 1) % P == 0) return false;
  return true;
}

ClaimFptSplit claimFpt_decompose(const FPoly& h, const RingAutoDesc& alpha, const GaloisField& F) {
  if (F.degree() != 1) throw MathError("claimFpt decomposition needs a prime field");
  if (alpha.kind != RingAutoDesc::Kind::PolySub || alpha.is_identity())
    throw MathError("claimFpt decomposition needs t -> a*t+b with (a,b) != (1,0)");
  if (!h.is_zero() && h.low() < 0) throw MathError("claimFpt decomposition needs a polynomial");
  long p = F.p();
  FieldElem a = const_field(alpha.a);
  ClaimFptSplit out;
  out.difference = h - apply_ring_auto(alpha, h);
  FPoly principal;
  for (auto& [e, c] : h.terms()) {
    if (e >= 2 * p - 1 && (e + 1) % p == 0) {
      long k = (e - (p - 1)) / p;
      FieldElem coef = c * (FieldElem(F, 1) - a.pow(p * k));
      out.principal[e] = coef;
      principal.add_term(e, coef);
    }
  }
  out.remainder = out.difference - principal;
  out.remainder_clean = avoids_principal_exponents(out.remainder, F.p());
  return out;
}

}  // namespace twistconj
