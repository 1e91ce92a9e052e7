#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistconj/ring.hpp"

namespace twistconj {

// Upper triangular n x n matrix over R. Entries are stored densely; the
// strictly lower part is always zero. Indices for at() are 1-based.
class TriMat {
 public:
  TriMat() = default;
  TriMat(const Ring& R, unsigned n);  // zero matrix (not invertible)

  static TriMat identity(const Ring& R, unsigned n);
  static TriMat diag(const Ring& R, const std::vector<RingElem>& u);

  const Ring& ring() const { return *R_; }
  const Ring* ring_ptr() const { return R_; }
  unsigned n() const { return n_; }
  const RingElem& at(unsigned i, unsigned j) const { return a_[(i - 1) * n_ + (j - 1)]; }
  RingElem& at(unsigned i, unsigned j) { return a_[(i - 1) * n_ + (j - 1)]; }

  std::vector<RingElem> diagonal() const;
  bool is_unitriangular() const;
  bool is_identity() const;

  friend TriMat operator*(const TriMat& a, const TriMat& b);
  friend bool operator==(const TriMat& a, const TriMat& b) { return a.n_ == b.n_ && a.a_ == b.a_; }
  friend bool operator!=(const TriMat& a, const TriMat& b) { return !(a == b); }
  friend bool operator<(const TriMat& a, const TriMat& b) { return a.a_ < b.a_; }
  TriMat scaled(const RingElem& c) const;

 private:
  const Ring* R_ = nullptr;
  unsigned n_ = 0;
  std::vector<RingElem> a_;
};

TriMat elementary(const Ring& R, unsigned n, unsigned i, unsigned j, const RingElem& r);
TriMat elem_diag(const Ring& R, unsigned n, unsigned i, const RingElem& u);
// Throws on a non-invertible diagonal.
TriMat inverse(const TriMat& a);
TriMat commutator(const TriMat& g, const TriMat& h);  // g h g^-1 h^-1

// Coefficients r_{i,j}, ordered by superdiagonal and then by row:
// r12, r23, ..., r_{n-1,n}, r13, ..., r1n.
struct UniNormalForm {
  unsigned n = 0;
  std::vector<RingElem> r;
  static size_t index(unsigned n, unsigned i, unsigned j);
  const RingElem& at(unsigned i, unsigned j) const { return r[index(n, i, j)]; }
  std::vector<std::pair<unsigned, unsigned>> positions() const;
};
UniNormalForm normal_form(const TriMat& u);
TriMat recompose(const UniNormalForm& nf, const Ring& R);

// Membership in the k-th term of the lower central series: every entry with
// 0 < j - i < k vanishes. gamma_1 = U_n, gamma_{n-1} = E_{1,n}.
bool gamma_k_member(const TriMat& u, unsigned k);

// g = v * d with v unitriangular and d diagonal.
TriMat unipotent_part(const TriMat& g);

// Word form "e(1,2;r12) e(2,3;r23) ... d(1;u1) ... d(n;un)".
std::string to_word(const TriMat& g);
// Parses a product of factors e(i,j;r) and d(i;u), in any order.
TriMat parse_word(const std::string& s, const Ring& R, unsigned n);

nlohmann::json to_json(const TriMat& g);
TriMat matrix_from_json(const nlohmann::json& j);

enum class GroupKind { B, U, PB, BPlus, PBPlus, Aff, AffPlus, W };

// A concrete group of triangular matrices. PB-type groups (PB, PB+, W) use
// the canonical representative with u1 = 1. Aff is realised as the matrices
// (u r; 0 1), W_n as the canonical matrices e_{1,n}(r) d.
struct GroupDesc {
  GroupKind kind = GroupKind::B;
  unsigned n = 2;
  const Ring* R = nullptr;

  // "b3", "u4", "pb2", "b2plus", "pb3plus", "aff", "aff-plus", "w3"
  static GroupDesc parse(const std::string& tag, const Ring& R);
  std::string tag() const;
  const Ring& ring() const { return *R; }
  bool projective() const { return kind == GroupKind::PB || kind == GroupKind::PBPlus || kind == GroupKind::W; }

  bool contains(const TriMat& g) const;
  // Throws if g is not (a representative of) an element of the group.
  TriMat canonical(const TriMat& g) const;
  TriMat identity() const { return TriMat::identity(*R, n); }
  TriMat mul(const TriMat& a, const TriMat& b) const;
  TriMat inv(const TriMat& a) const;
  TriMat comm(const TriMat& a, const TriMat& b) const;
  bool equal(const TriMat& a, const TriMat& b) const { return canonical(a) == canonical(b); }

  TriMat random(Rng& rng, const RandomOpts& o = {}) const;
  // Finite rings only, lexicographic in (normal-form coefficients, diagonal
  // exponents over the primitive element). Throws past the budget.
  std::vector<TriMat> enumerate(size_t budget = 1000000) const;
  // e_{ij}(c) and d_i(u) lying in the group, for c, u over the finite ring.
  std::vector<TriMat> generators() const;
  size_t order() const;  // finite rings only
};

// Elements commuting with every generator of the (finite) group.
std::vector<TriMat> center_bruteforce(const GroupDesc& G, size_t budget = 1000000);

struct AffElem {
  RingElem u, r;
  friend bool operator==(const AffElem& a, const AffElem& b) { return a.u == b.u && a.r == b.r; }
};
AffElem aff_mul(const AffElem& a, const AffElem& b);
AffElem aff_inv(const AffElem& a);
TriMat aff_to_matrix(const AffElem& a);  // (u r; 0 1)
// Aff(R) <-> PB2(R): (u, r) <-> canonical class (1, r/u; 0, 1/u).
TriMat aff_to_pb2(const AffElem& a);
AffElem pb2_to_aff(const TriMat& g);

// e_{1,n}(r)[d], d stored with d1 = 1.
struct WnElem {
  RingElem r;
  std::vector<RingElem> d;
  friend bool operator==(const WnElem& a, const WnElem& b) { return a.r == b.r && a.d == b.d; }
};
WnElem wn_make(const RingElem& r, const std::vector<RingElem>& d);  // canonicalises d
WnElem wn_mul(const WnElem& a, const WnElem& b);
WnElem wn_inv(const WnElem& a);
TriMat wn_to_matrix(const WnElem& w, const Ring& R);
WnElem wn_from_matrix(const TriMat& g);
AffElem wn_to_aff(const WnElem& w);
bool wn_in_kernel(const WnElem& w);  // r = 0 and u1 = un

struct EscapeResult {
  unsigned k = 0;              // first position with u_k != u_{k+1}
  bool seeded = false;         // m had r_{k,k+1} = 0 and was conjugated by e_{k,k+1}(1)
  TriMat m_used;               // m or its conjugate
  RingElem r, rho;             // r_{k,k+1} of m_used, u_k / u_{k+1}
  TriMat s;                    // m_used (delta m_used delta^-1)^-1
  std::vector<TriMat> iterates;       // [s,_l m_used], l = 1..L
  std::vector<RingElem> leading;      // (k,k+1) entry of each iterate
  std::vector<RingElem> expected;     // r (1 - rho)^(l+1)
  bool all_nonzero = true;
  bool matches_closed_form = true;
};
// Throws if all adjacent diagonal ratios of m are 1.
EscapeResult iterated_commutator_escape(const TriMat& m, unsigned L);

}  // namespace twistconj
