#include "twistconj/tri_group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace twistconj {

// ---------------------------------------------------------------- TriMat

TriMat::TriMat(const Ring& R, unsigned n) : R_(&R), n_(n), a_(size_t(n) * n, R.zero()) {
  if (n < 1) throw MathError("matrix dimension must be positive");
}

TriMat TriMat::identity(const Ring& R, unsigned n) {
  TriMat m(R, n);
  for (unsigned i = 1; i <= n; ++i) m.at(i, i) = R.one();
  return m;
}

TriMat TriMat::diag(const Ring& R, const std::vector<RingElem>& u) {
  TriMat m(R, static_cast<unsigned>(u.size()));
  for (unsigned i = 1; i <= u.size(); ++i) m.at(i, i) = u[i - 1];
  return m;
}

std::vector<RingElem> TriMat::diagonal() const {
  std::vector<RingElem> d;
  for (unsigned i = 1; i <= n_; ++i) d.push_back(at(i, i));
  return d;
}

bool TriMat::is_unitriangular() const {
  for (unsigned i = 1; i <= n_; ++i)
    if (!at(i, i).is_one()) return false;
  return true;
}

bool TriMat::is_identity() const {
  if (!is_unitriangular()) return false;
  for (unsigned i = 1; i <= n_; ++i)
    for (unsigned j = i + 1; j <= n_; ++j)
      if (!at(i, j).is_zero()) return false;
  return true;
}

TriMat operator*(const TriMat& a, const TriMat& b) {
  if (a.n_ != b.n_ || a.R_ != b.R_) throw MathError("matrix shape or ring mismatch");
  TriMat c(*a.R_, a.n_);
  for (unsigned i = 1; i <= a.n_; ++i)
    for (unsigned k = i; k <= a.n_; ++k) {
      const RingElem& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (unsigned j = k; j <= a.n_; ++j) {
        const RingElem& y = b.at(k, j);
        if (!y.is_zero()) c.at(i, j) += x * y;
      }
    }
  return c;
}

TriMat TriMat::scaled(const RingElem& c) const {
  TriMat m = *this;
  for (auto& x : m.a_) x = x * c;
  return m;
}

TriMat elementary(const Ring& R, unsigned n, unsigned i, unsigned j, const RingElem& r) {
  if (!(1 <= i && i < j && j <= n)) throw MathError("elementary matrix needs 1 <= i < j <= n");
  TriMat m = TriMat::identity(R, n);
  m.at(i, j) = r;
  return m;
}

TriMat elem_diag(const Ring& R, unsigned n, unsigned i, const RingElem& u) {
  if (i < 1 || i > n) throw MathError("diagonal index out of range");
  if (!u.is_unit()) throw MathError("d_i(u) needs a unit, got " + u.str());
  TriMat m = TriMat::identity(R, n);
  m.at(i, i) = u;
  return m;
}

TriMat inverse(const TriMat& a) {
  const Ring& R = a.ring();
  unsigned n = a.n();
  TriMat x(R, n);
  std::vector<RingElem> dinv(n + 1);
  for (unsigned i = 1; i <= n; ++i) {
    if (!a.at(i, i).is_unit()) throw MathError("non-invertible diagonal entry " + a.at(i, i).str());
    dinv[i] = a.at(i, i).inv();
    x.at(i, i) = dinv[i];
  }
  // a x = 1 column by column, rows from the bottom
  for (unsigned j = 2; j <= n; ++j)
    for (unsigned i = j - 1; i >= 1; --i) {
      RingElem s = R.zero();
      for (unsigned k = i + 1; k <= j; ++k)
        if (!a.at(i, k).is_zero() && !x.at(k, j).is_zero()) s += a.at(i, k) * x.at(k, j);
      x.at(i, j) = -(dinv[i] * s);
    }
  return x;
}

TriMat commutator(const TriMat& g, const TriMat& h) { return g * h * inverse(g) * inverse(h); }

// ---------------------------------------------------------------- normal form

size_t UniNormalForm::index(unsigned n, unsigned i, unsigned j) {
  unsigned k = j - i;
  // superdiagonals 1..k-1 hold n-1, n-2, ... entries
  size_t before = 0;
  for (unsigned s = 1; s < k; ++s) before += n - s;
  return before + (i - 1);
}

std::vector<std::pair<unsigned, unsigned>> UniNormalForm::positions() const {
  std::vector<std::pair<unsigned, unsigned>> p;
  for (unsigned k = 1; k < n; ++k)
    for (unsigned i = 1; i + k <= n; ++i) p.emplace_back(i, i + k);
  return p;
}

UniNormalForm normal_form(const TriMat& u) {
  if (!u.is_unitriangular()) throw MathError("normal form needs a unitriangular matrix");
  const Ring& R = u.ring();
  unsigned n = u.n();
  UniNormalForm nf{n, {}};
  TriMat m = u;
  for (unsigned k = 1; k < n; ++k) {
    TriMat p = TriMat::identity(R, n);
    for (unsigned i = 1; i + k <= n; ++i) {
      nf.r.push_back(m.at(i, i + k));
      if (!m.at(i, i + k).is_zero()) p = p * elementary(R, n, i, i + k, m.at(i, i + k));
    }
    m = inverse(p) * m;
  }
  return nf;
}

TriMat recompose(const UniNormalForm& nf, const Ring& R) {
  TriMat m = TriMat::identity(R, nf.n);
  size_t idx = 0;
  for (auto [i, j] : nf.positions()) {
    const RingElem& r = nf.r.at(idx++);
    if (!r.is_zero()) m = m * elementary(R, nf.n, i, j, r);
  }
  return m;
}

bool gamma_k_member(const TriMat& u, unsigned k) {
  if (!u.is_unitriangular()) throw MathError("gamma_k membership needs a unitriangular matrix");
  for (unsigned i = 1; i <= u.n(); ++i)
    for (unsigned j = i + 1; j <= u.n() && j - i < k; ++j)
      if (!u.at(i, j).is_zero()) return false;
  return true;
}

TriMat unipotent_part(const TriMat& g) {
  std::vector<RingElem> dinv;
  for (auto& u : g.diagonal()) dinv.push_back(u.inv());
  return g * TriMat::diag(g.ring(), dinv);
}

// ---------------------------------------------------------------- text forms

std::string to_word(const TriMat& g) {
  UniNormalForm nf = normal_form(unipotent_part(g));
  std::ostringstream os;
  size_t idx = 0;
  for (auto [i, j] : nf.positions()) os << "e(" << i << "," << j << ";" << nf.r[idx++].str() << ") ";
  for (unsigned i = 1; i <= g.n(); ++i) os << "d(" << i << ";" << g.at(i, i).str() << (i == g.n() ? ")" : ") ");
  return os.str();
}

TriMat parse_word(const std::string& s, const Ring& R, unsigned n) {
  TriMat m = TriMat::identity(R, n);
  size_t pos = 0;
  auto skip = [&] {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '*')) ++pos;
  };
  skip();
  while (pos < s.size()) {
    char kind = s[pos];
    if ((kind != 'e' && kind != 'd') || pos + 1 >= s.size() || s[pos + 1] != '(')
      throw MathError("malformed group word at '" + s.substr(pos) + "'");
    size_t semi = s.find(';', pos);
    if (semi == std::string::npos) throw MathError("malformed group word: missing ';'");
    // coefficients may contain parentheses: match the closing one
    int depth = 0;
    size_t close = std::string::npos;
    for (size_t q = semi + 1; q < s.size(); ++q) {
      if (s[q] == '(') ++depth;
      else if (s[q] == ')') {
        if (depth == 0) {
          close = q;
          break;
        }
        --depth;
      }
    }
    if (close == std::string::npos) throw MathError("malformed group word: missing ')'");
    std::string idx = s.substr(pos + 2, semi - pos - 2);
    RingElem c = R.parse_elem(s.substr(semi + 1, close - semi - 1));
    try {
      if (kind == 'e') {
        size_t comma = idx.find(',');
        if (comma == std::string::npos) throw MathError("e(i,j;r) needs two indices");
        m = m * elementary(R, n, std::stoul(idx.substr(0, comma)), std::stoul(idx.substr(comma + 1)), c);
      } else {
        m = m * elem_diag(R, n, std::stoul(idx), c);
      }
    } catch (const std::logic_error&) {
      throw MathError("bad index in group word: '" + idx + "'");
    }
    pos = close + 1;
    skip();
  }
  return m;
}

nlohmann::json to_json(const TriMat& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (unsigned i = 1; i <= g.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (unsigned j = 1; j <= g.n(); ++j) row.push_back(g.at(i, j).str());
    rows.push_back(row);
  }
  return {{"n", g.n()}, {"ring", g.ring().tag()}, {"rows", rows}};
}

TriMat matrix_from_json(const nlohmann::json& j) {
  unsigned n = j.at("n").get<unsigned>();
  const Ring& R = Ring::parse(j.at("ring").get<std::string>());
  const auto& rows = j.at("rows");
  if (rows.size() != n) throw MathError("matrix JSON: row count differs from n");
  TriMat m(R, n);
  for (unsigned i = 1; i <= n; ++i) {
    if (rows[i - 1].size() != n) throw MathError("matrix JSON: ragged rows");
    for (unsigned k = 1; k <= n; ++k) {
      const auto& cell = rows[i - 1][k - 1];
      RingElem x = cell.is_string() ? R.parse_elem(cell.get<std::string>()) : R.from_int(cell.get<long>());
      if (k < i) {
        if (!x.is_zero()) throw MathError("matrix JSON: nonzero entry below the diagonal");
      } else {
        m.at(i, k) = x;
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------- groups

GroupDesc GroupDesc::parse(const std::string& tag0, const Ring& R) {
  std::string tag;
  for (char c : tag0)
    if (!std::isspace(static_cast<unsigned char>(c))) tag += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  GroupDesc g;
  g.R = &R;
  if (tag == "aff") return g.kind = GroupKind::Aff, g.n = 2, g;
  if (tag == "aff-plus" || tag == "affplus" || tag == "aff+") return g.kind = GroupKind::AffPlus, g.n = 2, g;
  bool plus = false;
  if (tag.size() > 4 && tag.compare(tag.size() - 4, 4, "plus") == 0) {
    plus = true;
    tag.resize(tag.size() - 4);
  } else if (!tag.empty() && tag.back() == '+') {
    plus = true;
    tag.pop_back();
  }
  size_t digits = tag.find_first_of("0123456789");
  if (digits == std::string::npos || digits == 0) throw MathError("unknown group tag '" + tag0 + "'");
  std::string head = tag.substr(0, digits);
  unsigned long n = 0;
  try {
    size_t used = 0;
    n = std::stoul(tag.substr(digits), &used);
    if (used != tag.size() - digits) throw MathError("");
  } catch (const std::exception&) {
    throw MathError("unknown group tag '" + tag0 + "'");
  }
  if (n < 2 || n > 64) throw MathError("group dimension must be in [2, 64]");
  g.n = static_cast<unsigned>(n);
  if (head == "b") g.kind = plus ? GroupKind::BPlus : GroupKind::B;
  else if (head == "pb") g.kind = plus ? GroupKind::PBPlus : GroupKind::PB;
  else if (head == "u" && !plus) g.kind = GroupKind::U;
  else if (head == "w" && !plus) g.kind = GroupKind::W;
  else throw MathError("unknown group tag '" + tag0 + "'");
  return g;
}

std::string GroupDesc::tag() const {
  std::string n_ = std::to_string(n);
  switch (kind) {
    case GroupKind::B: return "b" + n_;
    case GroupKind::U: return "u" + n_;
    case GroupKind::PB: return "pb" + n_;
    case GroupKind::BPlus: return "b" + n_ + "plus";
    case GroupKind::PBPlus: return "pb" + n_ + "plus";
    case GroupKind::Aff: return "aff";
    case GroupKind::AffPlus: return "aff-plus";
    case GroupKind::W: return "w" + n_;
  }
  return "?";
}

namespace {

bool tf(const Ring& R, const RingElem& u) { return R.tf_exponents(u).has_value(); }

bool diag_ok(const GroupDesc& G, const TriMat& g) {
  for (unsigned i = 1; i <= G.n; ++i)
    if (!g.at(i, i).is_unit()) return false;
  return true;
}

}  // namespace

bool GroupDesc::contains(const TriMat& g) const {
  if (g.n() != n || g.ring_ptr() != R) return false;
  if (!diag_ok(*this, g)) return false;
  const RingElem& u1 = g.at(1, 1);
  switch (kind) {
    case GroupKind::B: return true;
    case GroupKind::U: return g.is_unitriangular();
    case GroupKind::PB: return u1.is_one();
    case GroupKind::BPlus:
    case GroupKind::PBPlus:
      if (kind == GroupKind::PBPlus && !u1.is_one()) return false;
      for (unsigned i = 1; i <= n; ++i)
        if (!tf(*R, g.at(i, i))) return false;
      return true;
    case GroupKind::Aff:
    case GroupKind::AffPlus:
      if (!g.at(2, 2).is_one()) return false;
      return kind == GroupKind::Aff || tf(*R, u1);
    case GroupKind::W:
      if (!u1.is_one()) return false;
      for (unsigned i = 1; i <= n; ++i)
        for (unsigned j = i + 1; j <= n; ++j)
          if (!(i == 1 && j == n) && !g.at(i, j).is_zero()) return false;
      return true;
  }
  return false;
}

TriMat GroupDesc::canonical(const TriMat& g) const {
  TriMat c = g;
  if (projective() && g.n() == n && g.ring_ptr() == R && g.at(1, 1).is_unit() && !g.at(1, 1).is_one())
    c = g.scaled(g.at(1, 1).inv());
  if (!contains(c)) throw MathError("matrix is not an element of " + tag() + "(" + R->tag() + ")");
  return c;
}

TriMat GroupDesc::mul(const TriMat& a, const TriMat& b) const { return canonical(a * b); }
TriMat GroupDesc::inv(const TriMat& a) const { return canonical(inverse(a)); }
TriMat GroupDesc::comm(const TriMat& a, const TriMat& b) const { return canonical(commutator(a, b)); }

TriMat GroupDesc::random(Rng& rng, const RandomOpts& o) const {
  const Ring& Rg = *R;
  auto unit = [&](bool plus) { return plus ? Rg.random_tf_unit(rng, o) : Rg.random_unit(rng, o); };
  switch (kind) {
    case GroupKind::Aff:
    case GroupKind::AffPlus: {
      TriMat m = TriMat::identity(Rg, 2);
      m.at(1, 1) = unit(kind == GroupKind::AffPlus);
      m.at(1, 2) = Rg.random(rng, o);
      return m;
    }
    case GroupKind::W: {
      std::vector<RingElem> d(n, Rg.one());
      for (unsigned i = 2; i <= n; ++i) d[i - 1] = unit(false);
      return elementary(Rg, n, 1, n, Rg.random(rng, o)) * TriMat::diag(Rg, d);
    }
    default: break;
  }
  UniNormalForm nf{n, {}};
  for (size_t i = 0; i < size_t(n) * (n - 1) / 2; ++i) nf.r.push_back(Rg.random(rng, o));
  TriMat v = recompose(nf, Rg);
  if (kind == GroupKind::U) return v;
  bool plus = kind == GroupKind::BPlus || kind == GroupKind::PBPlus;
  std::vector<RingElem> d;
  for (unsigned i = 1; i <= n; ++i) d.push_back(unit(plus));
  return canonical(v * TriMat::diag(Rg, d));
}

namespace {

// Units of a finite field as powers of the primitive element.
std::vector<RingElem> units_by_exponent(const Ring& R) {
  std::vector<RingElem> out;
  RingElem g = R.from_field(FieldElem(*R.field(), R.field()->primitive()));
  RingElem x = R.one();
  for (unsigned e = 0; e + 1 < R.field()->q(); ++e) {
    out.push_back(x);
    x = x * g;
  }
  return out;
}

struct Slots {
  std::vector<std::pair<unsigned, unsigned>> offdiag;  // normal-form positions in use
  std::vector<std::vector<RingElem>> diag;             // choices per diagonal position
};

Slots slots_of(const GroupDesc& G) {
  const Ring& R = *G.R;
  if (!R.is_finite()) throw MathError("enumeration needs a finite ring, got " + R.tag());
  Slots s;
  std::vector<RingElem> one{R.one()}, all = units_by_exponent(R);
  UniNormalForm proto{G.n, {}};
  switch (G.kind) {
    case GroupKind::Aff:
    case GroupKind::AffPlus:
      s.offdiag = {{1, 2}};
      s.diag = {G.kind == GroupKind::Aff ? all : one, one};
      return s;
    case GroupKind::W:
      s.offdiag = {{1, G.n}};
      break;
    default:
      s.offdiag = proto.positions();
  }
  // torsion-free units of a finite field are trivial
  bool full = G.kind == GroupKind::B || G.kind == GroupKind::PB || G.kind == GroupKind::W;
  for (unsigned i = 1; i <= G.n; ++i) {
    bool pinned = !full || (i == 1 && G.kind != GroupKind::B);
    s.diag.push_back(pinned ? one : all);
  }
  return s;
}

}  // namespace

size_t GroupDesc::order() const {
  Slots s = slots_of(*this);
  size_t q = R->field()->q(), total = 1;
  for (size_t i = 0; i < s.offdiag.size(); ++i) total *= q;
  for (auto& d : s.diag) total *= d.size();
  return total;
}

std::vector<TriMat> GroupDesc::enumerate(size_t budget) const {
  Slots s = slots_of(*this);
  size_t total = order();
  if (total > budget) throw MathError("enumeration budget exceeded: |" + tag() + "(" + R->tag() + ")| = " + std::to_string(total));
  std::vector<RingElem> elems = R->elements();
  size_t no = s.offdiag.size(), nd = s.diag.size();
  std::vector<size_t> radix;
  for (size_t i = 0; i < no; ++i) radix.push_back(elems.size());
  for (auto& d : s.diag) radix.push_back(d.size());
  std::vector<size_t> digit(radix.size(), 0);
  std::vector<TriMat> out;
  out.reserve(total);
  for (size_t count = 0; count < total; ++count) {
    TriMat v = TriMat::identity(*R, n);
    for (size_t i = 0; i < no; ++i) {
      const RingElem& c = elems[digit[i]];
      if (!c.is_zero()) v = v * elementary(*R, n, s.offdiag[i].first, s.offdiag[i].second, c);
    }
    std::vector<RingElem> d;
    for (size_t i = 0; i < nd; ++i) d.push_back(s.diag[i][digit[no + i]]);
    out.push_back(v * TriMat::diag(*R, d));
    for (size_t p = radix.size(); p-- > 0;) {
      if (++digit[p] < radix[p]) break;
      digit[p] = 0;
    }
  }
  return out;
}

std::vector<TriMat> GroupDesc::generators() const {
  Slots s = slots_of(*this);
  std::vector<TriMat> gens;
  for (auto [i, j] : s.offdiag)
    for (auto& c : R->elements())
      if (!c.is_zero()) gens.push_back(elementary(*R, n, i, j, c));
  for (unsigned i = 1; i <= n; ++i)
    for (auto& u : s.diag[i - 1])
      if (!u.is_one()) gens.push_back(canonical(elem_diag(*R, n, i, u)));
  return gens;
}

std::vector<TriMat> center_bruteforce(const GroupDesc& G, size_t budget) {
  std::vector<TriMat> all = G.enumerate(budget), gens = G.generators(), out;
  for (auto& z : all) {
    bool central = true;
    for (auto& g : gens)
      if (G.mul(z, g) != G.mul(g, z)) {
        central = false;
        break;
      }
    if (central) out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------- Aff

AffElem aff_mul(const AffElem& a, const AffElem& b) { return {a.u * b.u, a.r + a.u * b.r}; }
AffElem aff_inv(const AffElem& a) {
  RingElem ui = a.u.inv();
  return {ui, -(ui * a.r)};
}

TriMat aff_to_matrix(const AffElem& a) {
  TriMat m = TriMat::identity(a.u.ring(), 2);
  m.at(1, 1) = a.u;
  m.at(1, 2) = a.r;
  return m;
}

TriMat aff_to_pb2(const AffElem& a) { return aff_to_matrix(a).scaled(a.u.inv()); }

AffElem pb2_to_aff(const TriMat& g) {
  if (g.n() != 2) throw MathError("PB2 element expected");
  RingElem s = g.at(2, 2).inv();  // rescale so the (2,2) entry is 1
  return {g.at(1, 1) * s, g.at(1, 2) * s};
}

// ---------------------------------------------------------------- W_n

WnElem wn_make(const RingElem& r, const std::vector<RingElem>& d) {
  if (d.size() < 2) throw MathError("W_n needs n >= 2");
  WnElem w{r, d};
  RingElem s = d[0].inv();
  for (auto& x : w.d) x = x * s;
  return w;
}

WnElem wn_mul(const WnElem& a, const WnElem& b) {
  if (a.d.size() != b.d.size()) throw MathError("W_n dimension mismatch");
  std::vector<RingElem> d;
  for (size_t i = 0; i < a.d.size(); ++i) d.push_back(a.d[i] * b.d[i]);
  // [d] e_{1n}(s) [d]^-1 = e_{1n}(u1 un^-1 s)
  return wn_make(a.r + a.d.front() * a.d.back().inv() * b.r, d);
}

WnElem wn_inv(const WnElem& a) {
  std::vector<RingElem> d;
  for (auto& x : a.d) d.push_back(x.inv());
  return wn_make(-(d.front() * d.back().inv() * a.r), d);
}

TriMat wn_to_matrix(const WnElem& w, const Ring& R) {
  unsigned n = static_cast<unsigned>(w.d.size());
  return elementary(R, n, 1, n, w.r) * TriMat::diag(R, w.d);
}

WnElem wn_from_matrix(const TriMat& g) {
  unsigned n = g.n();
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i + 1; j <= n; ++j)
      if (!(i == 1 && j == n) && !g.at(i, j).is_zero()) throw MathError("matrix is not in W_n");
  std::vector<RingElem> d = g.diagonal();
  return wn_make(g.at(1, n) * d.back().inv(), d);
}

AffElem wn_to_aff(const WnElem& w) { return {w.d.front() * w.d.back().inv(), w.r}; }

bool wn_in_kernel(const WnElem& w) { return w.r.is_zero() && w.d.front() == w.d.back(); }

// ---------------------------------------------------------------- escape

EscapeResult iterated_commutator_escape(const TriMat& m, unsigned L) {
  const Ring& R = m.ring();
  unsigned n = m.n();
  EscapeResult res;
  for (unsigned k = 1; k < n && !res.k; ++k)
    if (m.at(k, k) != m.at(k + 1, k + 1)) res.k = k;
  if (!res.k) throw MathError("all adjacent diagonal ratios are 1: m lies in U_n modulo the center");
  unsigned k = res.k;
  auto coeff = [&](const TriMat& x) { return x.at(k, k + 1) * x.at(k + 1, k + 1).inv(); };

  res.m_used = m;
  if (coeff(m).is_zero()) {
    TriMat e = elementary(R, n, k, k + 1, R.one());
    res.m_used = e * m * inverse(e);
    res.seeded = true;
  }
  const TriMat& mu = res.m_used;
  res.r = coeff(mu);
  res.rho = mu.at(k, k) * mu.at(k + 1, k + 1).inv();
  TriMat delta = elem_diag(R, n, k, mu.at(k, k)) * elem_diag(R, n, k + 1, mu.at(k + 1, k + 1));
  res.s = mu * inverse(delta * mu * inverse(delta));

  RingElem factor = R.one() - res.rho;
  RingElem expect = res.r * factor;
  TriMat x = res.s;
  for (unsigned l = 1; l <= L; ++l) {
    x = commutator(x, mu);
    expect = expect * factor;
    res.iterates.push_back(x);
    res.leading.push_back(x.at(k, k + 1));
    res.expected.push_back(expect);
    if (x.at(k, k + 1).is_zero() || x.is_identity()) res.all_nonzero = false;
    if (x.at(k, k + 1) != expect) res.matches_closed_form = false;
  }
  return res;
}

}  // namespace twistconj
