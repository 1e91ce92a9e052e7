#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twistconj/automorphy.hpp"

namespace twistconj {

// h g phi(h)^-1
TriMat twist(const AutoDescriptor& phi, const GroupDesc& G, const TriMat& h, const TriMat& g);
// h + g - phi(h) on R or R x R
std::vector<RingElem> twist_additive(const AutoDescriptor& phi, const std::vector<RingElem>& h,
                                     const std::vector<RingElem>& g);

// Dense linear algebra over F_q on field indices.
using FqVec = std::vector<uint32_t>;
using FqMat = std::vector<FqVec>;  // rows
size_t fq_rank(const GaloisField& F, FqMat M);
uint32_t fq_det(const GaloisField& F, FqMat M);

// Coefficient slice t^lo .. t^hi of F_q[t] or F_q[t,t^-1], or of its square
// (copies = 2, coordinates ordered copy-major).
struct LinearWindow {
  const Ring* R = nullptr;
  long lo = 0, hi = -1;
  unsigned copies = 1;

  static LinearWindow make(const Ring& R, long lo, long hi, unsigned copies = 1);
  size_t width() const { return hi >= lo ? static_cast<size_t>(hi - lo + 1) : 0; }
  size_t dim() const { return copies * width(); }
  const GaloisField& field() const { return *R->field(); }
  bool contains(const std::vector<RingElem>& x) const;
  FqVec encode(const std::vector<RingElem>& x) const;  // throws outside the window
  std::vector<RingElem> decode(const FqVec& v) const;
  std::vector<RingElem> basis(size_t idx) const;
  LinearWindow grown(long by) const;  // both ends, lower end clipped at 0 for polynomial rings
  std::string str() const;
};

struct MembershipOpts {
  long delta = 0;  // 0: twice the window width
  unsigned max_steps = 10;
};

struct MembershipVerdict {
  bool decided = false;
  bool member = false;
  std::vector<RingElem> witness;  // h with r = h - phi(h)
  std::vector<std::pair<long, long>> windows;  // solving windows tried
  std::vector<size_t> image_dims;              // dim(Im(id - phi) meet target) per window
};

// Decides r in Im(id - phi) on the target window by saturating the solving
// window; a member verdict always carries a re-verified witness.
MembershipVerdict additive_membership(const AutoDescriptor& phi, const std::vector<RingElem>& r,
                                      const LinearWindow& target, const MembershipOpts& opts = {});
// x ~ y iff y - x in Im(id - phi)
MembershipVerdict additive_equivalent(const AutoDescriptor& phi, const std::vector<RingElem>& x,
                                      const std::vector<RingElem>& y, const LinearWindow& target,
                                      const MembershipOpts& opts = {});

struct ClassCount {
  size_t dim = 0, coker_dim = 0;
  BigInt count;  // q^coker_dim
  bool stabilized = false;
  std::vector<std::pair<long, long>> windows;
  std::vector<size_t> coker_dims;  // along the invariant growth sequence
};
bool window_invariant(const AutoDescriptor& phi, const LinearWindow& W);
// Throws if W is not phi-invariant. The growth sequence enlarges W by its
// width per step while it stays invariant.
ClassCount additive_class_count(const AutoDescriptor& phi, const LinearWindow& W, unsigned growth_steps = 2);

// a in F_q^x with 1 - a^2 != 0
std::vector<FieldElem> lemma_units(const GaloisField& F);
// t^(l+y) f(t) - a t^(2k+l+x) f(t^-1)
FPoly hf_rhs(const FPoly& f, const FieldElem& a, long k, long l, long x, long y);
// f with hf_rhs(f, a, k, l, x, y) = h
FPoly solve_hf(const FPoly& h, const FieldElem& a, long k, long l, long x, long y);

// Reidemeister class of g under phi_B (B2plus), phi_A (aff-plus) or their
// common restriction to U_2, over F_q[t,t^-1]. The representative is
// diag(t^x, t^y) (y = 0 on aff-plus, x = y = 0 on U_2); witness w has
// g = w rep phi(w)^-1.
struct PhiBClass {
  int x = 0, y = 0;
  TriMat rep, witness;
  long k = 0, l = 0;
  FPoly f;
  bool verified = false;
};
AutoDescriptor phiB_family_auto(const GroupDesc& G, const RingElem& a);
PhiBClass classify_phiB(const GroupDesc& G, const TriMat& g, const RingElem& a);
std::vector<TriMat> phiB_representatives(const GroupDesc& G);

struct TwistedClass {
  size_t rep = 0;   // universe index, least in enumeration order
  std::string label;
  size_t size = 0;
  size_t witnessed = 0;  // members reached from rep by a single verified twist
};
struct TwistedPartition {
  std::string auto_word, universe;
  std::vector<TwistedClass> classes;
  std::vector<size_t> class_of;
  bool closed = true;  // no twist left the universe
  size_t count() const { return classes.size(); }
};
// Union-find over g ~ twist(h, g) for all h, g < N; twist returns nullopt
// when the image leaves the universe.
using TwistIndex = std::function<std::optional<size_t>(size_t h, size_t g)>;
TwistedPartition partition_universe(size_t N, const TwistIndex& twist, const std::function<std::string(size_t)>& label);

TwistedPartition brute_force_partition(const AutoDescriptor& phi, const GroupDesc& G, size_t budget = 20000);
// phi must preserve U; the universe is the diagonal quotient.
TwistedPartition brute_force_partition_diagonal(const AutoDescriptor& phi, const GroupDesc& G);
// restriction to the center
TwistedPartition brute_force_partition_center(const AutoDescriptor& phi, const GroupDesc& G);
// window as a finite abelian group; throws above `budget` elements
TwistedPartition brute_force_partition(const AutoDescriptor& phi, const LinearWindow& W, size_t budget = 4096);

// Fraction-free determinant.
BigInt bareiss_det(std::vector<std::vector<BigInt>> M);
bool has_eigenvalue_one(const std::vector<std::vector<long>>& M);

// Solutions of t^c f^d = sum_k f_k t^(ak) f^(bk) with ad - bc = +-1 in
// [-box, box]^4, compared after clearing f-denominators.
struct CdabSolution {
  long a, b, c, d;
  long det_m;         // ad - bc
  long det_i_minus_m; // det(I - [[a,c],[b,d]])
};
std::vector<CdabSolution> search_cdab(const FPoly& f, const GaloisField& F, long box);

// (x, y) pairs in R x R compared under tau_alpha on the product window.
struct PairVerdict {
  std::vector<RingElem> x, y;
  MembershipVerdict verdict;
  bool distinct() const { return verdict.decided && !verdict.member; }
};
std::vector<PairVerdict> tau_alpha_distinctness(
    const RingAutoDesc& alpha, const std::vector<std::pair<std::vector<RingElem>, std::vector<RingElem>>>& pairs,
    const LinearWindow& W, const MembershipOpts& opts = {});

// p(p-1) i + p - 1
long family_exponent(long p, long i);

}  // namespace twistconj
