#include "twistconj/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <map>
#include <numeric>

namespace twistconj {

TriMat twist(const AutoDescriptor& phi, const GroupDesc& G, const TriMat& h, const TriMat& g) {
  if (!G.contains(h) || !G.contains(g)) throw MathError("twist: arguments must lie in " + G.tag());
  return G.mul(G.mul(h, g), G.inv(apply(phi, G, h)));
}

std::vector<RingElem> twist_additive(const AutoDescriptor& phi, const std::vector<RingElem>& h,
                                     const std::vector<RingElem>& g) {
  if (h.size() != g.size()) throw MathError("twist: arity mismatch");
  std::vector<RingElem> ph = apply_additive(phi, h), out;
  for (size_t i = 0; i < h.size(); ++i) out.push_back(h[i] + g[i] - ph[i]);
  return out;
}

// ---------------------------------------------------------------- F_q linear algebra

namespace {

// Row echelon form built one row at a time. Each stored row has a unit pivot
// and zeros at the pivots of earlier rows; `aug` tracks the combination of
// inserted rows it came from.
class Echelon {
 public:
  Echelon(const GaloisField& F, size_t ncols, size_t naug) : F_(F), ncols_(ncols), naug_(naug) {}

  // Reduces v (and its combination c) against stored rows.
  void reduce(FqVec& v, FqVec& c) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      uint32_t x = v[pivots_[r]];
      if (!x) continue;
      uint32_t nx = F_.neg(x);
      axpy(v, nx, rows_[r]);
      if (!c.empty()) axpy(c, nx, aug_[r]);
    }
  }

  // Returns the pivot column, or nullopt if v was dependent.
  std::optional<size_t> insert(FqVec v, FqVec c) {
    reduce(v, c);
    size_t p = 0;
    while (p < ncols_ && !v[p]) ++p;
    if (p == ncols_) return std::nullopt;
    uint32_t s = F_.inv(v[p]);
    for (auto& x : v) x = F_.mul(x, s);
    for (auto& x : c) x = F_.mul(x, s);
    rows_.push_back(std::move(v));
    aug_.push_back(std::move(c));
    pivots_.push_back(p);
    return p;
  }

  const std::vector<size_t>& pivots() const { return pivots_; }
  size_t naug() const { return naug_; }

 private:
  void axpy(FqVec& y, uint32_t a, const FqVec& x) const {
    for (size_t i = 0; i < y.size(); ++i)
      if (x[i]) y[i] = F_.add(y[i], F_.mul(a, x[i]));
  }

  const GaloisField& F_;
  size_t ncols_, naug_;
  std::vector<FqVec> rows_, aug_;
  std::vector<size_t> pivots_;
};

}  // namespace

size_t fq_rank(const GaloisField& F, FqMat M) {
  if (M.empty()) return 0;
  Echelon E(F, M[0].size(), 0);
  size_t r = 0;
  for (auto& row : M)
    if (E.insert(std::move(row), {})) ++r;
  return r;
}

uint32_t fq_det(const GaloisField& F, FqMat M) {
  size_t n = M.size();
  uint32_t det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && !M[p][c]) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(M[p], M[c]);
      det = F.neg(det);
    }
    det = F.mul(det, M[c][c]);
    uint32_t inv = F.inv(M[c][c]);
    for (size_t r = c + 1; r < n; ++r) {
      if (!M[r][c]) continue;
      uint32_t f = F.neg(F.mul(M[r][c], inv));
      for (size_t j = c; j < n; ++j) M[r][j] = F.add(M[r][j], F.mul(f, M[c][j]));
    }
  }
  return det;
}

// ---------------------------------------------------------------- windows

LinearWindow LinearWindow::make(const Ring& R, long lo, long hi, unsigned copies) {
  if (R.kind() != RingKind::GFPoly && R.kind() != RingKind::GFLaurent)
    throw MathError("windows live in F_q[t] or F_q[t,t^-1], not " + R.tag());
  if (hi < lo) throw MathError("empty window");
  if (R.kind() == RingKind::GFPoly && lo < 0) throw MathError("negative exponents in a polynomial window");
  if (copies != 1 && copies != 2) throw MathError("windows have one or two copies");
  return {&R, lo, hi, copies};
}

bool LinearWindow::contains(const std::vector<RingElem>& x) const {
  if (x.size() != copies) return false;
  for (auto& r : x)
    for (auto& [e, c] : r.fpoly().terms())
      if (e < lo || e > hi) return false;
  return true;
}

FqVec LinearWindow::encode(const std::vector<RingElem>& x) const {
  if (!contains(x)) throw MathError("element outside the window " + str());
  FqVec v(dim(), 0);
  for (unsigned k = 0; k < copies; ++k)
    for (auto& [e, c] : x[k].fpoly().terms()) v[k * width() + (e - lo)] = c.v;
  return v;
}

std::vector<RingElem> LinearWindow::decode(const FqVec& v) const {
  std::vector<RingElem> out;
  for (unsigned k = 0; k < copies; ++k) {
    FPoly::Terms t;
    for (size_t i = 0; i < width(); ++i)
      if (uint32_t c = v.at(k * width() + i)) t.emplace(lo + static_cast<long>(i), FieldElem(field(), c));
    out.push_back(R->from_fpoly(FPoly::from_terms(t)));
  }
  return out;
}

std::vector<RingElem> LinearWindow::basis(size_t idx) const {
  std::vector<RingElem> out(copies, R->zero());
  out.at(idx / width()) = R->t_pow(lo + static_cast<long>(idx % width()));
  return out;
}

LinearWindow LinearWindow::grown(long by) const {
  LinearWindow w = *this;
  w.lo = R->is_laurent() ? lo - by : std::max(0L, lo - by);
  w.hi = hi + by;
  return w;
}

std::string LinearWindow::str() const {
  std::string s = "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  return copies == 2 ? s + "^2" : s;
}

// ---------------------------------------------------------------- membership

namespace {

using Coord = std::pair<unsigned, long>;  // (copy, exponent)

void add_coords(const std::vector<RingElem>& x, std::map<Coord, FieldElem>& out) {
  for (unsigned k = 0; k < x.size(); ++k)
    for (auto& [e, c] : x[k].fpoly().terms()) out[{k, e}] = c;
}

bool in_target(const LinearWindow& T, const Coord& c) { return c.second >= T.lo && c.second <= T.hi; }

struct ImageMeet {
  Echelon ech;
  std::map<Coord, size_t> col;
  size_t meet_dim = 0;
};

// Echelon form of (id - phi)(S) with the coordinates outside T placed first,
// so rows with a pivot in T span Im meet V_T.
ImageMeet image_meet(const AutoDescriptor& phi, const LinearWindow& S, const LinearWindow& T) {
  std::vector<std::map<Coord, FieldElem>> imgs;
  std::set<Coord> outside, inside;
  for (size_t i = 0; i < S.dim(); ++i) {
    std::vector<RingElem> h = S.basis(i), ph = apply_additive(phi, h);
    std::vector<RingElem> d;
    for (size_t k = 0; k < h.size(); ++k) d.push_back(h[k] - ph[k]);
    std::map<Coord, FieldElem> m;
    add_coords(d, m);
    for (auto& [c, v] : m) (in_target(T, c) ? inside : outside).insert(c);
    imgs.push_back(std::move(m));
  }
  for (unsigned k = 0; k < T.copies; ++k)
    for (long e = T.lo; e <= T.hi; ++e) inside.insert({k, e});
  std::map<Coord, size_t> col;
  for (auto& c : outside) col.emplace(c, col.size());
  size_t first_inside = col.size();
  for (auto& c : inside) col.emplace(c, col.size());
  ImageMeet out{Echelon(T.field(), col.size(), S.dim()), col, 0};
  for (size_t i = 0; i < imgs.size(); ++i) {
    FqVec v(col.size(), 0), c(S.dim(), 0);
    for (auto& [co, x] : imgs[i]) v[col.at(co)] = x.v;
    c[i] = 1;
    if (auto p = out.ech.insert(std::move(v), std::move(c)); p && *p >= first_inside) ++out.meet_dim;
  }
  return out;
}

std::vector<RingElem> sub(const std::vector<RingElem>& a, const std::vector<RingElem>& b) {
  std::vector<RingElem> out;
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

}  // namespace

MembershipVerdict additive_membership(const AutoDescriptor& phi, const std::vector<RingElem>& r,
                                      const LinearWindow& target, const MembershipOpts& opts) {
  if (additive_arity(phi) != target.copies) throw MathError("window arity does not match " + phi.str());
  if (!target.contains(r)) throw MathError("target element lies outside " + target.str());
  long delta = opts.delta > 0 ? opts.delta : 2 * static_cast<long>(target.width());
  MembershipVerdict v;
  size_t unchanged = 0;
  for (unsigned step = 0; step <= opts.max_steps; ++step) {
    LinearWindow S = target.grown(delta * step);
    ImageMeet im = image_meet(phi, S, target);
    v.windows.push_back({S.lo, S.hi});
    v.image_dims.push_back(im.meet_dim);

    FqVec x(im.col.size(), 0), c(S.dim(), 0);
    std::map<Coord, FieldElem> m;
    add_coords(r, m);
    for (auto& [co, e] : m) x[im.col.at(co)] = e.v;
    im.ech.reduce(x, c);
    if (std::all_of(x.begin(), x.end(), [](uint32_t a) { return a == 0; })) {
      // r - sum c_i (id - phi)(b_i) = 0, so h = sum c_i b_i
      const GaloisField& F = target.field();
      FqVec h(S.dim());
      for (size_t i = 0; i < h.size(); ++i) h[i] = F.neg(c[i]);
      std::vector<RingElem> w = S.decode(h);
      if (sub(w, apply_additive(phi, w)) != r) throw MathError("internal: membership witness failed to verify");
      v.decided = v.member = true;
      v.witness = std::move(w);
      return v;
    }
    if (step > 0) {
      unchanged = v.image_dims[step] == v.image_dims[step - 1] ? unchanged + 1 : 0;
      if (unchanged >= 2) {
        v.decided = true;
        return v;
      }
    }
  }
  return v;
}

MembershipVerdict additive_equivalent(const AutoDescriptor& phi, const std::vector<RingElem>& x,
                                      const std::vector<RingElem>& y, const LinearWindow& target,
                                      const MembershipOpts& opts) {
  if (x.size() != y.size()) throw MathError("arity mismatch");
  return additive_membership(phi, sub(y, x), target, opts);
}

// ---------------------------------------------------------------- class counts

bool window_invariant(const AutoDescriptor& phi, const LinearWindow& W) {
  for (size_t i = 0; i < W.dim(); ++i)
    if (!W.contains(apply_additive(phi, W.basis(i)))) return false;
  return true;
}

namespace {

size_t coker_dim(const AutoDescriptor& phi, const LinearWindow& W) {
  FqMat M;
  for (size_t i = 0; i < W.dim(); ++i) {
    std::vector<RingElem> h = W.basis(i);
    M.push_back(W.encode(sub(h, apply_additive(phi, h))));
  }
  return W.dim() - fq_rank(W.field(), std::move(M));
}

}  // namespace

ClassCount additive_class_count(const AutoDescriptor& phi, const LinearWindow& W, unsigned growth_steps) {
  if (additive_arity(phi) != W.copies) throw MathError("window arity does not match " + phi.str());
  if (!window_invariant(phi, W)) throw MathError("window " + W.str() + " is not invariant under " + phi.str());
  ClassCount cc;
  cc.dim = W.dim();
  cc.coker_dim = coker_dim(phi, W);
  mpz_ui_pow_ui(cc.count.get_mpz_t(), W.field().q(), cc.coker_dim);
  cc.windows.push_back({W.lo, W.hi});
  cc.coker_dims.push_back(cc.coker_dim);
  cc.stabilized = true;
  for (unsigned s = 1; s <= growth_steps; ++s) {
    LinearWindow G = W.grown(static_cast<long>(W.width()) * s);
    if (!window_invariant(phi, G)) {
      cc.stabilized = false;
      break;
    }
    cc.windows.push_back({G.lo, G.hi});
    cc.coker_dims.push_back(coker_dim(phi, G));
    if (cc.coker_dims.back() != cc.coker_dim) cc.stabilized = false;
  }
  return cc;
}

// ---------------------------------------------------------------- phi_B family

std::vector<FieldElem> lemma_units(const GaloisField& F) {
  std::vector<FieldElem> out;
  for (uint32_t v = 1; v < F.q(); ++v) {
    FieldElem a(F, v);
    if (!(FieldElem(F, 1) - a * a).is_zero()) out.push_back(a);
  }
  return out;
}

FPoly hf_rhs(const FPoly& f, const FieldElem& a, long k, long l, long x, long y) {
  return f.shifted(l + y) - f.flipped().shifted(2 * k + l + x).scaled(a);
}

FPoly solve_hf(const FPoly& h, const FieldElem& a, long k, long l, long x, long y) {
  const GaloisField& F = *a.f;
  FieldElem one(F, 1);
  FieldElem det = one - a * a;
  if (a.is_zero() || det.is_zero())
    throw MathError("solve_hf needs a unit a with 1 - a^2 invertible, got a = " + a.str());
  long S = 2 * k + 2 * l + x + y;
  FieldElem dinv = det.inv(), mid = (one - a).inv();
  FPoly::Terms f;
  std::set<long> done;
  for (auto& [m0, c] : h.terms()) {
    long m = std::min(m0, S - m0), mp = S - m;
    if (!done.insert(m).second) continue;
    FieldElem hm = h.coeff(m), hmp = h.coeff(mp);
    if (m == mp) {
      FieldElem X = hm * mid;
      if (!X.is_zero()) f[m - l - y] = X;
      continue;
    }
    // X - aY = h_m, -aX + Y = h_m'
    FieldElem X = (hm + a * hmp) * dinv, Y = (hmp + a * hm) * dinv;
    if (!X.is_zero()) f[m - l - y] = X;
    if (!Y.is_zero()) f[2 * k + l + x - m] = Y;
  }
  FPoly out = FPoly::from_terms(f);
  if (hf_rhs(out, a, k, l, x, y) != h) throw MathError("internal: solve_hf identity failed");
  return out;
}

namespace {

void check_phiB_group(const GroupDesc& G) {
  if (G.R->kind() != RingKind::GFLaurent || G.n != 2 ||
      (G.kind != GroupKind::BPlus && G.kind != GroupKind::AffPlus && G.kind != GroupKind::U))
    throw MathError("phi_B classes are defined on b2plus, aff-plus and u2 over F_q[t,t^-1], not " + G.tag() +
                    " over " + G.R->tag());
}

long t_exponent(const Ring& R, const RingElem& u) {
  auto e = R.tf_exponents(u);
  if (!e || e->size() != 1) throw MathError("diagonal entry is not a power of t");
  return (*e)[0];
}

long floor_mod2(long i) { return ((i % 2) + 2) % 2; }

}  // namespace

AutoDescriptor phiB_family_auto(const GroupDesc& G, const RingElem& a) {
  check_phiB_group(G);
  return G.kind == GroupKind::AffPlus ? auto_phiA(a) : auto_phiB(a);
}

std::vector<TriMat> phiB_representatives(const GroupDesc& G) {
  check_phiB_group(G);
  const Ring& R = *G.R;
  std::vector<TriMat> out;
  int xs = G.kind == GroupKind::U ? 1 : 2, ys = G.kind == GroupKind::BPlus ? 2 : 1;
  for (int x = 0; x < xs; ++x)
    for (int y = 0; y < ys; ++y) out.push_back(TriMat::diag(R, {R.t_pow(x), R.t_pow(y)}));
  return out;
}

PhiBClass classify_phiB(const GroupDesc& G, const TriMat& g0, const RingElem& a) {
  check_phiB_group(G);
  const Ring& R = *G.R;
  TriMat g = G.canonical(g0);
  AutoDescriptor phi = phiB_family_auto(G, a);
  long i = t_exponent(R, g.at(1, 1)), j = t_exponent(R, g.at(2, 2));
  PhiBClass c;
  c.x = static_cast<int>(floor_mod2(i));
  c.y = static_cast<int>(floor_mod2(j));
  c.k = (i - c.x) / 2;
  c.l = (j - c.y) / 2;
  c.rep = TriMat::diag(R, {R.t_pow(c.x), R.t_pow(c.y)});
  c.f = solve_hf(g.at(1, 2).fpoly(), a.fpoly().coeff(0), c.k, c.l, c.x, c.y);
  c.witness = TriMat::diag(R, {R.t_pow(c.k), R.t_pow(c.l)});
  c.witness.at(1, 2) = R.from_fpoly(c.f);
  c.verified = twist(phi, G, c.witness, c.rep) == g;
  if (!c.verified) throw MathError("internal: phi_B witness failed to verify for " + to_word(g));
  return c;
}

// ---------------------------------------------------------------- partitions

namespace {

struct UnionFind {
  std::vector<size_t> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  size_t find(size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  // keeps the smaller index as root
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    p[b] = a;
  }
};

}  // namespace

TwistedPartition partition_universe(size_t N, const TwistIndex& tw, const std::function<std::string(size_t)>& label) {
  TwistedPartition P;
  UnionFind uf(N);
  for (size_t g = 0; g < N; ++g)
    for (size_t h = 0; h < N; ++h) {
      auto img = tw(h, g);
      if (!img) {
        P.closed = false;
        continue;
      }
      uf.unite(g, *img);
    }
  std::map<size_t, size_t> cls;
  P.class_of.resize(N);
  for (size_t g = 0; g < N; ++g) {
    size_t root = uf.find(g);
    auto [it, fresh] = cls.emplace(root, P.classes.size());
    if (fresh) P.classes.push_back({g, label(g), 0, 0});
    P.class_of[g] = it->second;
    ++P.classes[it->second].size;
  }
  // single-step witnesses from each representative
  for (auto& c : P.classes) {
    std::vector<bool> seen(N, false);
    for (size_t h = 0; h < N; ++h)
      if (auto img = tw(h, c.rep); img && !seen[*img]) {
        seen[*img] = true;
        ++c.witnessed;
      }
  }
  return P;
}

namespace {

struct Indexed {
  std::vector<TriMat> elems;
  std::map<TriMat, size_t> index;
  explicit Indexed(std::vector<TriMat> e) : elems(std::move(e)) {
    for (size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  }
  std::optional<size_t> find(const TriMat& m) const {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

TwistedPartition partition_over(const Indexed& U, const std::function<TriMat(const TriMat&, const TriMat&)>& tw,
                                const std::string& word, const std::string& universe) {
  TwistedPartition P = partition_universe(
      U.elems.size(), [&](size_t h, size_t g) { return U.find(tw(U.elems[h], U.elems[g])); },
      [&](size_t i) { return to_word(U.elems[i]); });
  P.auto_word = word;
  P.universe = universe;
  return P;
}

}  // namespace

TwistedPartition brute_force_partition(const AutoDescriptor& phi, const GroupDesc& G, size_t budget) {
  if (!G.R->is_finite()) throw MathError("brute-force partitions need a finite group, not " + G.tag());
  Indexed U(G.enumerate(budget));
  return partition_over(
      U, [&](const TriMat& h, const TriMat& g) { return twist(phi, G, h, g); }, phi.str(),
      G.tag() + "(" + G.R->tag() + ")");
}

TwistedPartition brute_force_partition_diagonal(const AutoDescriptor& phi, const GroupDesc& G) {
  if (!G.R->is_finite()) throw MathError("brute-force partitions need a finite group, not " + G.tag());
  std::vector<TriMat> diag;
  for (auto& g : G.enumerate())
    if (G.canonical(TriMat::diag(*G.R, g.diagonal())) == g) diag.push_back(g);
  Indexed U(std::move(diag));
  return partition_over(
      U,
      [&](const TriMat& h, const TriMat& g) {
        TriMat x = twist(phi, G, h, g);
        return G.canonical(TriMat::diag(*G.R, x.diagonal()));
      },
      phi.str(), G.tag() + "(" + G.R->tag() + ")/U");
}

TwistedPartition brute_force_partition_center(const AutoDescriptor& phi, const GroupDesc& G) {
  Indexed U(center_bruteforce(G));
  return partition_over(
      U, [&](const TriMat& h, const TriMat& g) { return twist(phi, G, h, g); }, phi.str(),
      "Z(" + G.tag() + "(" + G.R->tag() + "))");
}

TwistedPartition brute_force_partition(const AutoDescriptor& phi, const LinearWindow& W, size_t budget) {
  if (!window_invariant(phi, W)) throw MathError("window " + W.str() + " is not invariant under " + phi.str());
  const GaloisField& F = W.field();
  size_t dim = W.dim(), q = F.q();
  double size = std::pow(static_cast<double>(q), static_cast<double>(dim));
  if (size > static_cast<double>(budget))
    throw MathError("window " + W.str() + " has " + std::to_string(static_cast<long long>(size)) + " elements");
  size_t N = static_cast<size_t>(size);
  auto digits = [&](size_t idx) {
    FqVec v(dim);
    for (size_t i = 0; i < dim; ++i, idx /= q) v[i] = static_cast<uint32_t>(idx % q);
    return v;
  };
  auto number = [&](const FqVec& v) {
    size_t idx = 0;
    for (size_t i = dim; i-- > 0;) idx = idx * q + v[i];
    return idx;
  };
  // D[h] = h - phi(h), computed on the ring elements themselves
  std::vector<FqVec> D(N), V(N);
  for (size_t h = 0; h < N; ++h) {
    V[h] = digits(h);
    std::vector<RingElem> x = W.decode(V[h]);
    D[h] = W.encode(sub(x, apply_additive(phi, x)));
  }
  TwistedPartition P = partition_universe(
      N,
      [&](size_t h, size_t g) -> std::optional<size_t> {
        FqVec s(dim);
        for (size_t i = 0; i < dim; ++i) s[i] = F.add(V[g][i], D[h][i]);
        return number(s);
      },
      [&](size_t i) {
        std::string s;
        for (auto& r : W.decode(V[i])) s += (s.empty() ? "" : ", ") + r.str();
        return W.copies == 2 ? "(" + s + ")" : s;
      });
  P.auto_word = phi.str();
  P.universe = W.R->tag() + W.str();
  return P;
}

// ---------------------------------------------------------------- integer matrices

BigInt bareiss_det(std::vector<std::vector<BigInt>> M) {
  size_t n = M.size();
  if (n == 0) return 1;
  for (auto& row : M)
    if (row.size() != n) throw MathError("determinant of a non-square matrix");
  BigInt prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && M[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(M[p], M[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        M[i][j] = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

bool has_eigenvalue_one(const std::vector<std::vector<long>>& M) {
  size_t n = M.size();
  std::vector<std::vector<BigInt>> A(n, std::vector<BigInt>(n));
  for (size_t i = 0; i < n; ++i) {
    if (M[i].size() != n) throw MathError("eigenvalue test needs a square matrix");
    for (size_t j = 0; j < n; ++j) A[i][j] = BigInt(i == j ? 1 : 0) - M[i][j];
  }
  return bareiss_det(std::move(A)) == 0;
}

// ---------------------------------------------------------------- f-adic case search

std::vector<CdabSolution> search_cdab(const FPoly& f, const GaloisField& F, long box) {
  if (f.is_zero() || f.low() < 0 || f.deg() < 1) throw MathError("f must be a polynomial of degree >= 1");
  if (!f.lead().is_one()) throw MathError("f must be monic");
  if (f.is_monomial()) throw MathError("f must differ from t");
  if (!is_irreducible(f, F)) throw MathError("f must be irreducible");
  if (box < 0) throw MathError("negative box");
  long m = f.deg();
  FieldElem one(F, 1);
  FPoly unit = FPoly::constant(one);
  std::vector<FPoly> fp{unit};
  auto fpow = [&](long e) -> const FPoly& {
    while (static_cast<long>(fp.size()) <= e) fp.push_back(fp.back() * f);
    return fp.at(e);
  };
  std::vector<CdabSolution> out;
  for (long a = -box; a <= box; ++a)
    for (long b = -box; b <= box; ++b)
      for (long c = -box; c <= box; ++c)
        for (long d = -box; d <= box; ++d) {
          long det = a * d - b * c;
          if (det != 1 && det != -1) continue;
          long E = std::max({0L, -d, -b * m});
          FPoly lhs = fpow(d + E).shifted(c), rhs;
          for (long k = 0; k <= m; ++k) {
            FieldElem lam = f.coeff(k);
            if (lam.is_zero()) continue;
            rhs += fpow(b * k + E).shifted(a * k).scaled(lam);
          }
          if (lhs == rhs) out.push_back({a, b, c, d, det, (1 - a) * (1 - d) - b * c});
        }
  return out;
}

// ---------------------------------------------------------------- tau_alpha

std::vector<PairVerdict> tau_alpha_distinctness(
    const RingAutoDesc& alpha, const std::vector<std::pair<std::vector<RingElem>, std::vector<RingElem>>>& pairs,
    const LinearWindow& W, const MembershipOpts& opts) {
  if (W.copies != 2) throw MathError("tau_alpha acts on a doubled window");
  check_ring_auto(alpha, *W.R);
  AutoDescriptor tau = auto_tau_alpha(alpha);
  std::vector<PairVerdict> out;
  for (auto& [x, y] : pairs) out.push_back({x, y, additive_equivalent(tau, x, y, W, opts)});
  return out;
}

long family_exponent(long p, long i) { return p * (p - 1) * i + p - 1; }

}  // namespace twistconj
