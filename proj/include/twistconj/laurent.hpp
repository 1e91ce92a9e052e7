#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistconj/field.hpp"

namespace twistconj {

// Sparse Laurent polynomial with coefficients in C (FieldElem or BigInt).
// Terms with zero coefficient are never stored. Polynomials proper are the
// special case low() >= 0; the owning ring enforces that.
template <class C>
class LaurentPoly {
 public:
  using Terms = std::map<long, C>;

  LaurentPoly() = default;
  static LaurentPoly monomial(const C& c, long e) {
    LaurentPoly p;
    if (!twistconj::is_zero(c)) p.t_.emplace(e, c);
    return p;
  }
  static LaurentPoly constant(const C& c) { return monomial(c, 0); }
  static LaurentPoly from_terms(const Terms& terms) {
    LaurentPoly p;
    for (auto& [e, c] : terms)
      if (!twistconj::is_zero(c)) p.t_.emplace(e, c);
    return p;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_monomial() const { return t_.size() == 1; }
  size_t size() const { return t_.size(); }
  long deg() const {
    if (t_.empty()) throw MathError("degree of zero polynomial");
    return t_.rbegin()->first;
  }
  long low() const {
    if (t_.empty()) throw MathError("low degree of zero polynomial");
    return t_.begin()->first;
  }
  C coeff(long e) const {
    auto it = t_.find(e);
    return it == t_.end() ? C{} : it->second;
  }
  C lead() const { return t_.rbegin()->second; }

  void add_term(long e, const C& c) {
    if (twistconj::is_zero(c)) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_.emplace(e, c);
      return;
    }
    it->second += c;
    if (twistconj::is_zero(it->second)) t_.erase(it);
  }

  LaurentPoly shifted(long k) const {
    LaurentPoly r;
    for (auto& [e, c] : t_) r.t_.emplace_hint(r.t_.end(), e + k, c);
    return r;
  }
  LaurentPoly scaled(const C& s) const {
    LaurentPoly r;
    if (twistconj::is_zero(s)) return r;
    for (auto& [e, c] : t_) {
      C v = c * s;
      if (!twistconj::is_zero(v)) r.t_.emplace_hint(r.t_.end(), e, v);
    }
    return r;
  }
  // f(t) -> f(t^-1)
  LaurentPoly flipped() const {
    LaurentPoly r;
    for (auto& [e, c] : t_) r.t_.emplace(-e, c);
    return r;
  }
  // terms with exponent in [lo, hi]
  LaurentPoly truncated(long lo, long hi) const {
    LaurentPoly r;
    for (auto it = t_.lower_bound(lo); it != t_.end() && it->first <= hi; ++it) r.t_.emplace_hint(r.t_.end(), *it);
    return r;
  }

  LaurentPoly pow(long n) const {
    if (n < 0) {
      if (!is_monomial()) throw MathError("negative power of a non-monomial");
      auto [e, c] = *t_.begin();
      return monomial(inverse_coeff(c).pow_helper(-n), e * n);
    }
    if (n > 0 && is_zero()) return {};
    LaurentPoly r = constant(one_like());
    LaurentPoly b = *this;
    while (n) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (auto& [e, c] : b.t_) r.add_term(e, c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r;
    for (auto& [e, c] : a.t_) r.t_.emplace_hint(r.t_.end(), e, -c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (auto& [e1, c1] : a.t_)
      for (auto& [e2, c2] : b.t_) r.add_term(e1 + e2, c1 * c2);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ < b.t_; }
  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }

 private:
  // helpers so that pow() works for both coefficient kinds
  struct CoeffPow {
    C c;
    C pow_helper(long n) const {
      C r = c;
      for (long i = 1; i < n; ++i) r = r * c;
      return r;
    }
  };
  static CoeffPow inverse_coeff(const C& c);
  C one_like() const;

  Terms t_;
};

template <>
inline LaurentPoly<FieldElem>::CoeffPow LaurentPoly<FieldElem>::inverse_coeff(const FieldElem& c) {
  return {c.inv()};
}
template <>
inline LaurentPoly<BigInt>::CoeffPow LaurentPoly<BigInt>::inverse_coeff(const BigInt& c) {
  if (c != 1 && c != -1) throw MathError("negative power of a non-unit monomial");
  return {c};
}
template <>
inline FieldElem LaurentPoly<FieldElem>::one_like() const {
  if (t_.empty()) throw MathError("power of zero polynomial without field context");
  const GaloisField* F = t_.begin()->second.f;
  return FieldElem(*F, 1);
}
template <>
inline BigInt LaurentPoly<BigInt>::one_like() const {
  return BigInt(1);
}

using FPoly = LaurentPoly<FieldElem>;
using ZPoly = LaurentPoly<BigInt>;

}  // namespace twistconj
