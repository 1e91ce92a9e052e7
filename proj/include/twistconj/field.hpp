#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistconj {

using BigInt = mpz_class;
using Rational = mpq_class;
using Rng = std::mt19937_64;

struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite field GF(p^k). Elements are indices v = sum c_i p^i, where c_i are the
// coefficients of the residue modulo a monic irreducible polynomial in x.
// Arithmetic goes through precomputed tables.
class GaloisField {
 public:
  // Interned field with the built-in modulus for q. Throws on unsupported q.
  static const GaloisField& get(unsigned q);
  // Field with an explicit modulus (monic, low degree first). Throws if
  // the modulus is reducible or p is not prime.
  static GaloisField with_modulus(unsigned p, const std::vector<unsigned>& modulus);

  unsigned q() const { return q_; }
  unsigned p() const { return p_; }
  unsigned degree() const { return k_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  uint32_t add(uint32_t a, uint32_t b) const { return add_[a * q_ + b]; }
  uint32_t mul(uint32_t a, uint32_t b) const { return mul_[a * q_ + b]; }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, long e) const;
  uint32_t from_int(long n) const;
  // A generator of the cyclic group F_q^x (smallest index).
  uint32_t primitive() const { return primitive_; }

  std::string print(uint32_t a) const;
  // Accepts integers (reduced mod p), and for k >= 2 polynomials in w,
  // e.g. "w", "w^2+1", "2*w+1". Throws on malformed input.
  uint32_t parse(const std::string& s) const;

 private:
  GaloisField() = default;
  void build();

  unsigned q_ = 0, p_ = 0, k_ = 0;
  std::vector<unsigned> modulus_;
  std::vector<uint32_t> add_, mul_, neg_, inv_;
  uint32_t primitive_ = 1;
};

bool is_prime(unsigned long n);
// (p, k) with q = p^k, or nullopt if q is not a prime power.
std::optional<std::pair<unsigned, unsigned>> prime_power(unsigned long q);

// Value type for an element of a finite field. A default-constructed element
// is a context-free zero; it adopts the field of the other operand.
struct FieldElem {
  const GaloisField* f = nullptr;
  uint32_t v = 0;

  FieldElem() = default;
  FieldElem(const GaloisField& F, uint32_t val) : f(&F), v(val) {}

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }
  FieldElem inv() const;
  FieldElem pow(long e) const;
  std::string str() const { return f ? f->print(v) : std::string("0"); }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a);
  friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.v == b.v; }
  friend bool operator<(const FieldElem& a, const FieldElem& b) { return a.v < b.v; }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
};

// All elements of F_q in index order.
std::vector<FieldElem> field_elements(const GaloisField& F);

inline bool is_zero(const FieldElem& a) { return a.is_zero(); }
inline bool is_zero(const BigInt& a) { return sgn(a) == 0; }
std::string to_string(const FieldElem& a);
std::string to_string(const BigInt& a);

// Positive w-smooth denominators only. The prime list of w is carried by the
// owning ring; this helper works on a given prime list.
std::vector<BigInt> prime_factors(const BigInt& w);
// Strips all factors in `primes` from |x|; returns the exponents. The cofactor
// is returned through `rest` (sign preserved).
std::vector<long> split_smooth(const BigInt& x, const std::vector<BigInt>& primes, BigInt& rest);

}  // namespace twistconj
