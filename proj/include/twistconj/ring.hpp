#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twistconj/field.hpp"
#include "twistconj/laurent.hpp"

namespace twistconj {

enum class RingKind { GF, GFPoly, GFLaurent, Z, ZLocal, ZPoly, ZLaurent };

// Tag grammar: gf(4), gf(5)[t], gf(5)[t,t^-1], z, z[1/6], z[t], z[t,t^-1].
struct RingDescriptor {
  RingKind kind = RingKind::Z;
  unsigned q = 0;  // GF kinds
  BigInt w = 0;    // ZLocal

  static RingDescriptor parse(const std::string& tag);
  std::string tag() const;
  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) {
    return a.kind == b.kind && a.q == b.q && a.w == b.w;
  }
};

class Ring;

class RingElem {
 public:
  using Value = std::variant<FieldElem, FPoly, BigInt, Rational, ZPoly>;

  RingElem() = default;
  RingElem(const Ring* R, Value v) : R_(R), v_(std::move(v)) {}

  const Ring& ring() const;
  const Ring* ring_ptr() const { return R_; }
  const Value& value() const { return v_; }

  const FieldElem& fe() const { return std::get<FieldElem>(v_); }
  const FPoly& fpoly() const { return std::get<FPoly>(v_); }
  const BigInt& integer() const { return std::get<BigInt>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const ZPoly& zpoly() const { return std::get<ZPoly>(v_); }

  bool is_zero() const;
  bool is_one() const;
  bool is_unit() const;
  RingElem inv() const;
  RingElem pow(long e) const;
  std::string str() const;

  friend RingElem operator+(const RingElem& a, const RingElem& b);
  friend RingElem operator-(const RingElem& a, const RingElem& b);
  friend RingElem operator*(const RingElem& a, const RingElem& b);
  friend RingElem operator-(const RingElem& a);
  friend bool operator==(const RingElem& a, const RingElem& b) { return a.v_ == b.v_; }
  friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }
  // arbitrary but deterministic total order
  friend bool operator<(const RingElem& a, const RingElem& b) { return a.v_ < b.v_; }
  RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
  RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
  RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

 private:
  const Ring* R_ = nullptr;
  Value v_;
};

struct UnitGroup {
  std::vector<RingElem> torsion;  // generators of Tor(R^x)
  std::vector<RingElem> free;     // chosen generators of the torsion-free complement
};

struct RandomOpts {
  long deg_lo = 0, deg_hi = 3;  // Laurent rings use [-deg_hi, deg_hi] unless deg_lo < 0
  long coeff_bound = 9;         // integer coefficients in [-b, b]
  long unit_exp = 3;            // exponent range for random units
};

// Interned ring context. References returned by get/parse stay valid for the
// life of the program.
class Ring {
 public:
  static const Ring& get(const RingDescriptor& d);
  static const Ring& parse(const std::string& tag) { return get(RingDescriptor::parse(tag)); }

  const RingDescriptor& desc() const { return d_; }
  RingKind kind() const { return d_.kind; }
  std::string tag() const { return d_.tag(); }
  const GaloisField* field() const { return F_; }
  const std::vector<BigInt>& primes() const { return primes_; }
  bool over_field() const { return F_ != nullptr; }
  bool has_t() const;
  bool is_laurent() const { return d_.kind == RingKind::GFLaurent || d_.kind == RingKind::ZLaurent; }
  bool is_finite() const { return d_.kind == RingKind::GF; }
  bool two_invertible() const;

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(long n) const;
  RingElem from_field(const FieldElem& c) const;  // GF kinds
  RingElem t_pow(long e) const;                    // requires has_t; negative only for Laurent
  RingElem from_fpoly(const FPoly& p) const;       // checks support for GFPoly
  RingElem from_zpoly(const ZPoly& p) const;
  RingElem from_rational(const Rational& r) const;  // ZLocal; checks smoothness
  RingElem from_bigint(const BigInt& n) const;      // Z-kinds and ZLocal

  RingElem parse_elem(const std::string& s) const;

  bool is_unit(const RingElem& a) const;
  RingElem inv(const RingElem& a) const;
  UnitGroup unit_group() const;
  // Exponents over unit_group().free when u lies in the torsion-free
  // complement, nullopt otherwise.
  std::optional<std::vector<long>> tf_exponents(const RingElem& u) const;
  RingElem tf_element(const std::vector<long>& e) const;
  // u = torsion * tf_element(exps)
  std::pair<RingElem, std::vector<long>> split_unit(const RingElem& u) const;

  RingElem random(Rng& rng, const RandomOpts& o = {}) const;
  RingElem random_unit(Rng& rng, const RandomOpts& o = {}) const;
  RingElem random_tf_unit(Rng& rng, const RandomOpts& o = {}) const;

  // finite rings only
  std::vector<RingElem> elements() const;
  std::vector<RingElem> units() const;

 private:
  explicit Ring(const RingDescriptor& d);
  RingDescriptor d_;
  const GaloisField* F_ = nullptr;
  std::vector<BigInt> primes_;
};

// Unit equation over Z[1/w]. For each prime p_j of w the constraint
// r * p_j = image_j * r (r != 0, R a domain) pins image_j = p_j; the result
// carries the exponent matrix lambda (columns j) and signs of the unique
// solution, or checks claimed images against it.
struct UnitEquationResult {
  std::vector<BigInt> primes;
  std::vector<std::vector<long>> lambda;  // lambda[i][j]
  std::vector<int> signs;                 // sign of image_j
  bool consistent = true;                 // claimed images satisfy the constraint
  bool identity = false;                  // lambda == I and all signs +
};

UnitEquationResult solve_unit_equation(const Ring& R);
// images[j] must be units of Z[1/w]; throws otherwise.
UnitEquationResult solve_unit_equation(const Ring& R, const std::vector<RingElem>& images, const RingElem& r);

}  // namespace twistconj
