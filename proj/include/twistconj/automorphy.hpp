#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twistconj/poly_ring.hpp"
#include "twistconj/tri_group.hpp"

namespace twistconj {

// Maps R -> R used by central and type-Sigma automorphisms.
// HalfSquare(a) is r -> a r^2 / 2: not additive, it is the lambda of a
// Sigma pair (lambda(r+s) = a r s + lambda(r) + lambda(s)).
struct EndoDesc {
  enum class Kind { Zero, MulBy, LinearOnWindow, HalfSquare };
  Kind kind = Kind::Zero;
  RingElem c;  // MulBy factor, HalfSquare a
  long lo = 0, hi = -1;
  // column j is the image of t^(lo+j), over the coefficient field
  std::vector<std::vector<FieldElem>> M;

  static EndoDesc zero() { return {}; }
  static EndoDesc mul_by(const RingElem& r) { return {Kind::MulBy, r, 0, -1, {}}; }
  static EndoDesc half_square(const RingElem& a);  // throws unless 2 is a unit
  // Coefficients outside [lo, hi] are sent to 0.
  static EndoDesc linear_on_window(long lo, long hi, std::vector<std::vector<FieldElem>> M);
  // "zero", "mul(<r>)", "half(<a>)", "window(lo,hi;c,c|c,c)" (rows separated by '|')
  static EndoDesc parse(const std::string& s, const Ring& R);

  RingElem operator()(const RingElem& r) const;
  bool additive() const { return kind != Kind::HalfSquare; }
  std::string str() const;
};

struct AutoDescriptor {
  enum class Kind {
    Identity,
    Inner,         // g h g^-1, g from the ambient B_n
    Central,       // zeta_i(lambda)
    SigmaA,        // sigma_{lambda,a}
    SigmaAPrime,   // sigma'_{lambda,a}
    Flip,          // tau on U_n
    FlipB,         // tau extended to B_n by A -> S J (A^-1)^T J S^-1
    RingAuto,      // alpha_*
    CompanionPhi,  // Phi_P on F_q[t]
    MulCenter,     // m_a
    PhiA,
    PhiB,
    AugB2,
    AugB2Plus,
    TauAlpha,      // (r, s) -> (alpha(s), alpha(r)), additive only
    Compose,       // parts applied right to left
    Phi0,          // parts[0] normalised to preserve the diagonal factor
  };
  Kind kind = Kind::Identity;
  TriMat g;
  unsigned index = 0;
  EndoDesc lambda;
  RingElem a;
  RingAutoDesc alpha;
  FPoly P;
  std::vector<AutoDescriptor> parts;

  std::string str() const;
  // Groups the descriptor applies to, for reports.
  std::string domain() const;
};

AutoDescriptor auto_identity();
AutoDescriptor auto_inner(const TriMat& g);
AutoDescriptor auto_central(unsigned i, const EndoDesc& lambda);
// Checks lambda(r+s) = a r s + lambda(r) + lambda(s) on `checks` random pairs
// (fixed seed) unless checks == 0. Throws with the failing pair.
AutoDescriptor auto_sigma(const EndoDesc& lambda, const RingElem& a, bool prime = false, size_t checks = 1000);
AutoDescriptor auto_flip(bool whole_borel = false);
AutoDescriptor auto_ring(const RingAutoDesc& alpha);
// P monic irreducible of degree >= 2 over the field of R.
AutoDescriptor auto_companion(const FPoly& P);
AutoDescriptor auto_mul(const RingElem& a);
AutoDescriptor auto_phiA(const RingElem& a);
AutoDescriptor auto_phiB(const RingElem& a);
AutoDescriptor auto_augB2(bool plus);
AutoDescriptor auto_tau_alpha(const RingAutoDesc& alpha);
// phi_1 o phi_2 o ... (the last one acts first)
AutoDescriptor auto_compose(std::vector<AutoDescriptor> parts);

// Word grammar, factors joined by '*' and applied right to left:
// id, inner(<group word>), central(i,<endo>), sigma(<endo>,<a>),
// sigmap(<endo>,<a>), flip, flipb, ring(<ring auto>), phiP(<poly>), mul(<a>),
// phiA(<a>), phiB(<a>), augB2, augB2plus, tauAlpha(<ring auto>).
AutoDescriptor parse_auto(const std::string& word, const GroupDesc& G);
AutoDescriptor parse_additive_auto(const std::string& word, const Ring& R);

// Throws MathError when g or the image lies outside the descriptor's domain.
TriMat apply(const AutoDescriptor& phi, const GroupDesc& G, const TriMat& g);

// Additive action on R (arity 1) or R x R (TauAlpha, arity 2).
size_t additive_arity(const AutoDescriptor& phi);
std::vector<RingElem> apply_additive(const AutoDescriptor& phi, const std::vector<RingElem>& x);
RingElem apply_additive(const AutoDescriptor& phi, const RingElem& x);
// Phi_P on a single polynomial.
FPoly companion_apply(const FPoly& P, const FPoly& r);
// C_P as a d x d matrix, C[i][j]
std::vector<std::vector<FieldElem>> companion_matrix(const FPoly& P);

struct HomReport {
  bool passed = true;
  size_t checked = 0;
  std::optional<std::pair<TriMat, TriMat>> witness;  // (g, h) with phi(gh) != phi(g) phi(h)
  std::string detail;
};
HomReport verify_homomorphism(const AutoDescriptor& phi, const GroupDesc& G, size_t samples, Rng& rng,
                              const RandomOpts& o = {});

// Groups N x| Q with N abelian: n = 2 triangular groups (N = U_2) and W_n
// (N = E_{1,n}); Q is the diagonal part.
struct Phi0Result {
  AutoDescriptor phi0;
  bool factor_preserving = false;  // phi(Q) in Q on all samples, so phi0 = phi
  bool restriction_agrees = true;  // phi0 = phi on N
  bool quotient_agrees = true;     // same induced map on G / N
  HomReport hom;
};
Phi0Result make_phi0(const AutoDescriptor& phi, const GroupDesc& G, size_t samples, Rng& rng,
                     const RandomOpts& o = {});

enum class QuotientTag { Diagonal, Abelianization, EMid };
struct InducedMap {
  QuotientTag tag;
  // Diagonal: integer matrix on torsion-free exponents, columns = images of
  // the generators (position, free generator) in order.
  std::vector<std::vector<long>> M;
  // Abelianization / EMid: action on tuples of ring elements.
  size_t arity = 0;
  std::function<std::vector<RingElem>(const std::vector<RingElem>&)> map;
};
// Throws if the subgroup is not invariant on the sampled elements.
InducedMap induced_on_quotient(const AutoDescriptor& phi, const GroupDesc& G, QuotientTag tag, Rng& rng,
                               size_t samples = 200, const RandomOpts& o = {});

}  // namespace twistconj
