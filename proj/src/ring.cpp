#include "twistconj/ring.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>

#include "twistconj/poly_ring.hpp"

namespace twistconj {

namespace {

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(c));
  return out;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

RingDescriptor RingDescriptor::parse(const std::string& tag) {
  std::string s = squash(tag);
  RingDescriptor d;
  auto bad = [&]() { return MathError("unrecognised ring tag: '" + tag + "'"); };
  if (s.rfind("gf(", 0) == 0) {
    size_t close = s.find(')');
    if (close == std::string::npos) throw bad();
    std::string num = s.substr(3, close - 3);
    if (!all_digits(num) || num.size() > 6) throw bad();
    d.q = static_cast<unsigned>(std::stoul(num));
    std::string rest = s.substr(close + 1);
    if (rest.empty())
      d.kind = RingKind::GF;
    else if (rest == "[t]")
      d.kind = RingKind::GFPoly;
    else if (rest == "[t,t^-1]" || rest == "[t,1/t]")
      d.kind = RingKind::GFLaurent;
    else
      throw bad();
    GaloisField::get(d.q);  // validates q
    return d;
  }
  if (s == "z") return d;
  if (s == "z[t]") {
    d.kind = RingKind::ZPoly;
    return d;
  }
  if (s == "z[t,t^-1]" || s == "z[t,1/t]") {
    d.kind = RingKind::ZLaurent;
    return d;
  }
  if (s.rfind("z[1/", 0) == 0 && s.back() == ']') {
    std::string num = s.substr(4, s.size() - 5);
    if (!all_digits(num)) throw bad();
    d.kind = RingKind::ZLocal;
    d.w = BigInt(num);
    if (d.w < 2) throw MathError("z[1/w] needs w >= 2");
    return d;
  }
  throw bad();
}

std::string RingDescriptor::tag() const {
  switch (kind) {
    case RingKind::GF: return "gf(" + std::to_string(q) + ")";
    case RingKind::GFPoly: return "gf(" + std::to_string(q) + ")[t]";
    case RingKind::GFLaurent: return "gf(" + std::to_string(q) + ")[t,t^-1]";
    case RingKind::Z: return "z";
    case RingKind::ZLocal: return "z[1/" + w.get_str() + "]";
    case RingKind::ZPoly: return "z[t]";
    case RingKind::ZLaurent: return "z[t,t^-1]";
  }
  return "?";
}

// ---------------------------------------------------------------- Ring

Ring::Ring(const RingDescriptor& d) : d_(d) {
  if (d.kind == RingKind::GF || d.kind == RingKind::GFPoly || d.kind == RingKind::GFLaurent)
    F_ = &GaloisField::get(d.q);
  if (d.kind == RingKind::ZLocal) primes_ = prime_factors(d.w);
}

const Ring& Ring::get(const RingDescriptor& d) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Ring>> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::string key = d.tag();
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto R = std::unique_ptr<Ring>(new Ring(d));
  return *(cache[key] = std::move(R));
}

bool Ring::has_t() const {
  switch (d_.kind) {
    case RingKind::GFPoly:
    case RingKind::GFLaurent:
    case RingKind::ZPoly:
    case RingKind::ZLaurent: return true;
    default: return false;
  }
}

bool Ring::two_invertible() const {
  if (F_) return F_->p() != 2;
  if (d_.kind == RingKind::ZLocal) return d_.w % 2 == 0;
  return false;
}

RingElem Ring::zero() const { return from_int(0); }
RingElem Ring::one() const { return from_int(1); }

RingElem Ring::from_int(long n) const {
  switch (d_.kind) {
    case RingKind::GF: return RingElem(this, FieldElem(*F_, F_->from_int(n)));
    case RingKind::GFPoly:
    case RingKind::GFLaurent: return RingElem(this, FPoly::constant(FieldElem(*F_, F_->from_int(n))));
    case RingKind::Z: return RingElem(this, BigInt(n));
    case RingKind::ZLocal: return RingElem(this, Rational(n));
    case RingKind::ZPoly:
    case RingKind::ZLaurent: return RingElem(this, ZPoly::constant(BigInt(n)));
  }
  throw MathError("bad ring");
}

RingElem Ring::from_field(const FieldElem& c) const {
  if (!F_) throw MathError("field constant in non-field ring " + tag());
  FieldElem x = c.f ? c : FieldElem(*F_, 0);
  if (x.f != F_) throw MathError("field constant from a different field");
  if (d_.kind == RingKind::GF) return RingElem(this, x);
  return RingElem(this, FPoly::constant(x));
}

RingElem Ring::t_pow(long e) const {
  if (!has_t()) throw MathError("ring " + tag() + " has no variable t");
  if (e < 0 && !is_laurent()) throw MathError("negative power of t in " + tag());
  if (F_) return RingElem(this, FPoly::monomial(FieldElem(*F_, 1), e));
  return RingElem(this, ZPoly::monomial(BigInt(1), e));
}

RingElem Ring::from_fpoly(const FPoly& p) const {
  if (!F_) throw MathError("polynomial over a field given for " + tag());
  if (d_.kind == RingKind::GF) {
    if (!p.is_zero() && (p.size() > 1 || p.low() != 0)) throw MathError("non-constant element for " + tag());
    return RingElem(this, p.is_zero() ? FieldElem(*F_, 0) : p.coeff(0));
  }
  if (d_.kind == RingKind::GFPoly && !p.is_zero() && p.low() < 0)
    throw MathError("negative exponent in polynomial ring " + tag());
  return RingElem(this, p);
}

RingElem Ring::from_zpoly(const ZPoly& p) const {
  switch (d_.kind) {
    case RingKind::ZPoly:
      if (!p.is_zero() && p.low() < 0) throw MathError("negative exponent in polynomial ring " + tag());
      return RingElem(this, p);
    case RingKind::ZLaurent: return RingElem(this, p);
    case RingKind::Z:
    case RingKind::ZLocal:
      if (!p.is_zero() && (p.size() > 1 || p.low() != 0)) throw MathError("non-constant element for " + tag());
      return from_bigint(p.coeff(0));
    default: throw MathError("integer polynomial given for " + tag());
  }
}

RingElem Ring::from_rational(const Rational& r0) const {
  Rational r(r0);
  r.canonicalize();
  if (d_.kind == RingKind::ZLocal) {
    BigInt rest;
    split_smooth(r.get_den(), primes_, rest);
    if (rest != 1) throw MathError("denominator " + r.get_den().get_str() + " is not invertible in " + tag());
    return RingElem(this, r);
  }
  if (r.get_den() != 1) throw MathError("fraction in " + tag());
  return from_bigint(r.get_num());
}

RingElem Ring::from_bigint(const BigInt& n) const {
  switch (d_.kind) {
    case RingKind::Z: return RingElem(this, n);
    case RingKind::ZLocal: return RingElem(this, Rational(n));
    case RingKind::ZPoly:
    case RingKind::ZLaurent: return RingElem(this, ZPoly::constant(n));
    default: {
      BigInt r = n % F_->p();
      return from_int(r.get_si());
    }
  }
}

RingElem Ring::parse_elem(const std::string& s) const {
  switch (d_.kind) {
    case RingKind::GF: return RingElem(this, FieldElem(*F_, F_->parse(s)));
    case RingKind::GFPoly:
    case RingKind::GFLaurent: return from_fpoly(parse_fpoly(s, *F_));
    case RingKind::Z:
    case RingKind::ZPoly:
    case RingKind::ZLaurent: return from_zpoly(parse_zpoly(s));
    case RingKind::ZLocal: {
      std::string t = squash(s);
      Rational r;
      try {
        size_t slash = t.find('/');
        if (slash == std::string::npos)
          r = Rational(BigInt(t));
        else
          r = Rational(BigInt(t.substr(0, slash)), BigInt(t.substr(slash + 1)));
      } catch (const std::invalid_argument&) {
        throw MathError("malformed element of " + tag() + ": '" + s + "'");
      }
      if (r.get_den() == 0) throw MathError("zero denominator");
      return from_rational(r);
    }
  }
  throw MathError("bad ring");
}

bool Ring::is_unit(const RingElem& a) const {
  switch (d_.kind) {
    case RingKind::GF: return !a.fe().is_zero();
    case RingKind::GFPoly: return a.fpoly().is_monomial() && a.fpoly().low() == 0;
    case RingKind::GFLaurent: return a.fpoly().is_monomial();
    case RingKind::Z: return abs(a.integer()) == 1;
    case RingKind::ZLocal: {
      const Rational& r = a.rational();
      if (r == 0) return false;
      BigInt rest;
      split_smooth(r.get_num(), primes_, rest);
      return abs(rest) == 1;
    }
    case RingKind::ZPoly: {
      const ZPoly& p = a.zpoly();
      return p.is_monomial() && p.low() == 0 && abs(p.lead()) == 1;
    }
    case RingKind::ZLaurent: {
      const ZPoly& p = a.zpoly();
      return p.is_monomial() && abs(p.lead()) == 1;
    }
  }
  return false;
}

RingElem Ring::inv(const RingElem& a) const {
  if (!is_unit(a)) throw MathError("element " + a.str() + " is not a unit of " + tag());
  switch (d_.kind) {
    case RingKind::GF: return RingElem(this, a.fe().inv());
    case RingKind::GFPoly:
    case RingKind::GFLaurent: {
      auto [e, c] = *a.fpoly().terms().begin();
      return RingElem(this, FPoly::monomial(c.inv(), -e));
    }
    case RingKind::Z: return a;
    case RingKind::ZLocal: return RingElem(this, Rational(1 / a.rational()));
    case RingKind::ZPoly:
    case RingKind::ZLaurent: {
      auto [e, c] = *a.zpoly().terms().begin();
      return RingElem(this, ZPoly::monomial(c, -e));
    }
  }
  throw MathError("bad ring");
}

UnitGroup Ring::unit_group() const {
  UnitGroup g;
  if (F_) {
    if (F_->q() > 2) g.torsion.push_back(from_field(FieldElem(*F_, F_->primitive())));
  } else {
    g.torsion.push_back(from_int(-1));
  }
  if (is_laurent()) g.free.push_back(t_pow(1));
  if (d_.kind == RingKind::ZLocal)
    for (auto& p : primes_) g.free.push_back(from_bigint(p));
  return g;
}

std::optional<std::vector<long>> Ring::tf_exponents(const RingElem& u) const {
  switch (d_.kind) {
    case RingKind::GF:
    case RingKind::GFPoly:
    case RingKind::Z:
    case RingKind::ZPoly:
      if (u.is_one()) return std::vector<long>{};
      return std::nullopt;
    case RingKind::GFLaurent: {
      const FPoly& p = u.fpoly();
      if (p.is_monomial() && p.lead().is_one()) return std::vector<long>{p.low()};
      return std::nullopt;
    }
    case RingKind::ZLaurent: {
      const ZPoly& p = u.zpoly();
      if (p.is_monomial() && p.lead() == 1) return std::vector<long>{p.low()};
      return std::nullopt;
    }
    case RingKind::ZLocal: {
      const Rational& r = u.rational();
      if (r <= 0) return std::nullopt;
      BigInt rn, rd;
      auto en = split_smooth(r.get_num(), primes_, rn);
      auto ed = split_smooth(r.get_den(), primes_, rd);
      if (rn != 1 || rd != 1) return std::nullopt;
      for (size_t i = 0; i < en.size(); ++i) en[i] -= ed[i];
      return en;
    }
  }
  return std::nullopt;
}

RingElem Ring::tf_element(const std::vector<long>& e) const {
  UnitGroup g = unit_group();
  if (e.size() != g.free.size()) throw MathError("exponent vector has wrong length for " + tag());
  RingElem r = one();
  for (size_t i = 0; i < e.size(); ++i) r = r * g.free[i].pow(e[i]);
  return r;
}

std::pair<RingElem, std::vector<long>> Ring::split_unit(const RingElem& u) const {
  if (!is_unit(u)) throw MathError("element " + u.str() + " is not a unit of " + tag());
  switch (d_.kind) {
    case RingKind::GFLaurent: {
      auto [e, c] = *u.fpoly().terms().begin();
      return {from_field(c), {e}};
    }
    case RingKind::ZLaurent: {
      auto [e, c] = *u.zpoly().terms().begin();
      return {from_bigint(c), {e}};
    }
    case RingKind::ZLocal: {
      RingElem s = from_int(u.rational() < 0 ? -1 : 1);
      return {s, *tf_exponents(s * u)};
    }
    default: return {u, {}};
  }
}

RingElem Ring::random(Rng& rng, const RandomOpts& o) const {
  auto uni = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  long lo = is_laurent() ? (o.deg_lo < 0 ? o.deg_lo : -o.deg_hi) : std::max(0L, o.deg_lo);
  long hi = o.deg_hi;
  switch (d_.kind) {
    case RingKind::GF: return from_field(FieldElem(*F_, static_cast<uint32_t>(uni(0, F_->q() - 1))));
    case RingKind::GFPoly:
    case RingKind::GFLaurent: {
      FPoly p;
      for (long e = lo; e <= hi; ++e) p.add_term(e, FieldElem(*F_, static_cast<uint32_t>(uni(0, F_->q() - 1))));
      return RingElem(this, p);
    }
    case RingKind::Z: return from_int(uni(-o.coeff_bound, o.coeff_bound));
    case RingKind::ZLocal: {
      Rational r(uni(-o.coeff_bound, o.coeff_bound));
      for (auto& p : primes_) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(uni(0, o.unit_exp)));
        r /= pe;
      }
      return from_rational(r);
    }
    case RingKind::ZPoly:
    case RingKind::ZLaurent: {
      ZPoly p;
      for (long e = lo; e <= hi; ++e) p.add_term(e, BigInt(uni(-o.coeff_bound, o.coeff_bound)));
      return RingElem(this, p);
    }
  }
  throw MathError("bad ring");
}

RingElem Ring::random_tf_unit(Rng& rng, const RandomOpts& o) const {
  std::vector<long> e(unit_group().free.size());
  for (auto& x : e) x = std::uniform_int_distribution<long>(-o.unit_exp, o.unit_exp)(rng);
  return tf_element(e);
}

RingElem Ring::random_unit(Rng& rng, const RandomOpts& o) const {
  RingElem tors = one();
  if (F_) {
    tors = from_field(FieldElem(*F_, static_cast<uint32_t>(std::uniform_int_distribution<long>(1, F_->q() - 1)(rng))));
  } else if (std::uniform_int_distribution<int>(0, 1)(rng)) {
    tors = from_int(-1);
  }
  return tors * random_tf_unit(rng, o);
}

std::vector<RingElem> Ring::elements() const {
  if (!is_finite()) throw MathError("ring " + tag() + " is infinite");
  std::vector<RingElem> out;
  for (auto& c : field_elements(*F_)) out.push_back(from_field(c));
  return out;
}

std::vector<RingElem> Ring::units() const {
  auto all = elements();
  all.erase(all.begin());
  return all;
}

// ---------------------------------------------------------------- RingElem

const Ring& RingElem::ring() const {
  if (!R_) throw MathError("ring element without ring");
  return *R_;
}

namespace {

const Ring* same_ring(const RingElem& a, const RingElem& b) {
  if (a.ring_ptr() != b.ring_ptr()) {
    std::string ta = a.ring_ptr() ? a.ring().tag() : "none";
    std::string tb = b.ring_ptr() ? b.ring().tag() : "none";
    throw MathError("mixed rings: " + ta + " and " + tb);
  }
  return a.ring_ptr();
}

template <class Op>
RingElem binop(const RingElem& a, const RingElem& b, Op op) {
  const Ring* R = same_ring(a, b);
  return RingElem(R, std::visit(
                         [&](const auto& x, const auto& y) -> RingElem::Value {
                           using X = std::decay_t<decltype(x)>;
                           using Y = std::decay_t<decltype(y)>;
                           if constexpr (std::is_same_v<X, Y>)
                             return X(op(x, y));
                           else
                             throw MathError("inconsistent ring element representation");
                         },
                         a.value(), b.value()));
}

}  // namespace

RingElem operator+(const RingElem& a, const RingElem& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x + y; });
}
RingElem operator-(const RingElem& a, const RingElem& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x - y; });
}
RingElem operator*(const RingElem& a, const RingElem& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x * y; });
}
RingElem operator-(const RingElem& a) {
  return RingElem(a.ring_ptr(), std::visit(
                                    [](const auto& x) -> RingElem::Value {
                                      using X = std::decay_t<decltype(x)>;
                                      return X(-x);
                                    },
                                    a.value()));
}

bool RingElem::is_zero() const {
  return std::visit(
      [](const auto& x) -> bool {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, FieldElem> || std::is_same_v<X, FPoly> || std::is_same_v<X, ZPoly>)
          return x.is_zero();
        else
          return x == 0;
      },
      v_);
}

bool RingElem::is_one() const { return *this == ring().one(); }
bool RingElem::is_unit() const { return ring().is_unit(*this); }
RingElem RingElem::inv() const { return ring().inv(*this); }

RingElem RingElem::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  RingElem r = ring().one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::string RingElem::str() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, FieldElem>)
          return x.str();
        else if constexpr (std::is_same_v<X, FPoly> || std::is_same_v<X, ZPoly>)
          return print_poly(x);
        else
          return x.get_str();
      },
      v_);
}

// ---------------------------------------------------------------- unit equation

UnitEquationResult solve_unit_equation(const Ring& R) {
  if (R.kind() != RingKind::ZLocal) throw MathError("unit equation needs z[1/w]");
  std::vector<RingElem> images;
  for (auto& p : R.primes()) images.push_back(R.from_bigint(p));
  return solve_unit_equation(R, images, R.one());
}

UnitEquationResult solve_unit_equation(const Ring& R, const std::vector<RingElem>& images, const RingElem& r) {
  if (R.kind() != RingKind::ZLocal) throw MathError("unit equation needs z[1/w]");
  const auto& primes = R.primes();
  if (images.size() != primes.size())
    throw MathError("expected one image per prime of w (" + std::to_string(primes.size()) + ")");
  if (r.is_zero()) throw MathError("the translation r must be nonzero");
  UnitEquationResult res;
  res.primes = primes;
  size_t m = primes.size();
  res.lambda.assign(m, std::vector<long>(m, 0));
  res.signs.assign(m, 1);
  res.identity = true;
  for (size_t j = 0; j < m; ++j) {
    const RingElem& img = images[j];
    if (img.ring_ptr() != &R || !R.is_unit(img))
      throw MathError("inconsistent factorization input: " + img.str() + " is not a unit of " + R.tag());
    auto [tors, exps] = R.split_unit(img);
    res.signs[j] = tors.is_one() ? 1 : -1;
    for (size_t i = 0; i < m; ++i) {
      res.lambda[i][j] = exps[i];
      if (exps[i] != (i == j ? 1 : 0)) res.identity = false;
    }
    if (res.signs[j] != 1) res.identity = false;
    // r * p_j = image_j * r
    if (!(r * R.from_bigint(primes[j]) == img * r)) res.consistent = false;
  }
  return res;
}

}  // namespace twistconj
