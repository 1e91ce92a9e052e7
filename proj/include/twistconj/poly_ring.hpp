#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistconj/laurent.hpp"
#include "twistconj/ring.hpp"

namespace twistconj {

// Text grammar: term (('+'|'-') term)*, term = coeff ['*' 't' ['^' int]].
// Extension-field coefficients containing '+' are parenthesised, e.g.
// "(w+1)*t^2". The printer emits terms by increasing exponent.
FPoly parse_fpoly(const std::string& s, const GaloisField& F);
ZPoly parse_zpoly(const std::string& s);
std::string print_poly(const FPoly& p);
std::string print_poly(const ZPoly& p);

// Dense helpers on polynomials with non-negative support.
struct FDivMod {
  FPoly quot, rem;
};
FDivMod divmod(const FPoly& a, const FPoly& b);
bool is_irreducible(const FPoly& f, const GaloisField& F);
// All monic irreducible polynomials of the given degree over F, in index order.
std::vector<FPoly> monic_irreducibles(const GaloisField& F, unsigned degree);

// Ring automorphisms: identity, t -> a*t + b, t -> t^-1.
struct RingAutoDesc {
  enum class Kind { Identity, PolySub, LaurentFlip };
  Kind kind = Kind::Identity;
  RingElem a, b;  // PolySub coefficients, constants of the base ring

  static RingAutoDesc identity() { return {}; }
  static RingAutoDesc flip() { return {Kind::LaurentFlip, {}, {}}; }
  // Throws if a is not a unit of the coefficient ring.
  static RingAutoDesc poly_sub(const RingElem& a, const RingElem& b);
  // "id", "t->t^-1", "t->a*t+b" (also "t->t+1", "t->2*t", "t->t")
  static RingAutoDesc parse(const std::string& s, const Ring& R);

  bool is_identity() const;
  std::string str() const;
};

RingElem apply_ring_auto(const RingAutoDesc& alpha, const RingElem& x);
FPoly apply_ring_auto(const RingAutoDesc& alpha, const FPoly& x);
// alpha o beta
RingAutoDesc compose(const RingAutoDesc& alpha, const RingAutoDesc& beta);
// Checks alpha is an automorphism of R (flip needs a Laurent ring, PolySub
// with b != 0 needs a polynomial ring or coefficient ring). Throws otherwise.
void check_ring_auto(const RingAutoDesc& alpha, const Ring& R);

// Augmentation: coefficient sum and (-1)^sum.
BigInt augmentation(const ZPoly& p);
int sign_augmentation(const ZPoly& p);

// f(t)-adic valuation of a Laurent polynomial; nullopt stands for +infinity.
// Throws if f is constant, not monic, equal to t, or reducible.
std::optional<long> f_adic_valuation(const FPoly& x, const FPoly& f);

// h - alpha(h) = sum_{k>=1} h_{pk+p-1}(1 - a^{pk}) t^{pk+p-1} + hbar.
struct ClaimFptSplit {
  std::map<long, FieldElem> principal;  // exponent -> coefficient, for each pk+p-1 in supp(h)
  FPoly remainder;                      // hbar
  FPoly difference;                     // h - alpha(h)
  // remainder has no exponent pk+p-1 (k >= 1). Always true for b = 0; for
  // b != 0 the binomial expansion of (a t + b)^(pk) leaks into those
  // exponents once k is not a power of p (first case: p=2, t->t+1, h=t^7).
  bool remainder_clean = true;
};
ClaimFptSplit claimFpt_decompose(const FPoly& h, const RingAutoDesc& alpha, const GaloisField& F);
// True when no exponent of p has the form pk+p-1 with k >= 1.
bool avoids_principal_exponents(const FPoly& p, unsigned char_p);

}  // namespace twistconj
