#include "twistconj/field.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>

namespace twistconj {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<std::pair<unsigned, unsigned>> prime_power(unsigned long q) {
  if (q < 2) return std::nullopt;
  unsigned long p = 2;
  while (q % p) ++p;
  unsigned k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<unsigned>(p), k);
}

namespace {

constexpr unsigned kMaxQ = 1024;

using Coeffs = std::vector<unsigned>;  // low degree first

Coeffs digits(uint32_t v, unsigned p, unsigned k) {
  Coeffs c(k);
  for (unsigned i = 0; i < k; ++i) {
    c[i] = v % p;
    v /= p;
  }
  return c;
}

uint32_t undigits(const Coeffs& c, unsigned p) {
  uint32_t v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * p + c[i];
  return v;
}

// remainder of a modulo monic m over F_p
Coeffs poly_rem(Coeffs a, const Coeffs& m, unsigned p) {
  size_t dm = m.size() - 1;
  for (size_t i = a.size(); i-- > dm;) {
    unsigned c = a[i] % p;
    if (!c) continue;
    for (size_t j = 0; j <= dm; ++j)
      a[i - dm + j] = (a[i - dm + j] + p * p - c * m[j] % p) % p;
  }
  a.resize(std::min(a.size(), dm));
  return a;
}

bool is_irreducible(const Coeffs& m, unsigned p) {
  size_t k = m.size() - 1;
  if (k == 0) return false;
  if (m.back() != 1) return false;
  // trial division by every monic polynomial of degree 1..k/2
  for (size_t d = 1; d <= k / 2; ++d) {
    unsigned long count = 1;
    for (size_t i = 0; i < d; ++i) count *= p;
    for (unsigned long idx = 0; idx < count; ++idx) {
      Coeffs g = digits(static_cast<uint32_t>(idx), p, static_cast<unsigned>(d));
      g.push_back(1);
      Coeffs r = poly_rem(m, g, p);
      bool zero = true;
      for (unsigned c : r) zero = zero && c == 0;
      if (zero) return false;
    }
  }
  return true;
}

Coeffs default_modulus(unsigned p, unsigned k) {
  // x^2+x+1 (q=4), x^3+x+1 (q=8), x^2+1 (q=9) are the first irreducibles in
  // this order, so the rule below reproduces the documented moduli.
  unsigned long count = 1;
  for (unsigned i = 0; i < k; ++i) count *= p;
  for (unsigned long idx = 0; idx < count; ++idx) {
    Coeffs m = digits(static_cast<uint32_t>(idx), p, k);
    m.push_back(1);
    if (is_irreducible(m, p)) return m;
  }
  throw MathError("no irreducible polynomial found");
}

}  // namespace

void GaloisField::build() {
  add_.assign(q_ * q_, 0);
  mul_.assign(q_ * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, 0);
  std::vector<Coeffs> dig(q_);
  for (uint32_t a = 0; a < q_; ++a) dig[a] = digits(a, p_, k_);
  for (uint32_t a = 0; a < q_; ++a) {
    Coeffs n(k_);
    for (unsigned i = 0; i < k_; ++i) n[i] = (p_ - dig[a][i]) % p_;
    neg_[a] = undigits(n, p_);
    for (uint32_t b = 0; b < q_; ++b) {
      Coeffs s(k_);
      for (unsigned i = 0; i < k_; ++i) s[i] = (dig[a][i] + dig[b][i]) % p_;
      add_[a * q_ + b] = undigits(s, p_);
      Coeffs prod(2 * k_ - 1, 0);
      for (unsigned i = 0; i < k_; ++i)
        for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + dig[a][i] * dig[b][j]) % p_;
      mul_[a * q_ + b] = undigits(poly_rem(prod, modulus_, p_), p_);
    }
  }
  for (uint32_t a = 1; a < q_; ++a)
    for (uint32_t b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) {
        inv_[a] = b;
        break;
      }
  for (uint32_t g = 1; g < q_; ++g) {
    uint32_t x = g;
    unsigned ord = 1;
    while (x != 1) {
      x = mul(x, g);
      ++ord;
    }
    if (ord == q_ - 1) {
      primitive_ = g;
      break;
    }
  }
}

const GaloisField& GaloisField::get(unsigned q) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<GaloisField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return *it->second;
  auto pk = prime_power(q);
  if (!pk || q > kMaxQ) throw MathError("unsupported field size q=" + std::to_string(q));
  auto F = std::unique_ptr<GaloisField>(new GaloisField());
  F->q_ = q;
  F->p_ = pk->first;
  F->k_ = pk->second;
  F->modulus_ = F->k_ == 1 ? Coeffs{0, 1} : default_modulus(F->p_, F->k_);
  F->build();
  return *(cache[q] = std::move(F));
}

GaloisField GaloisField::with_modulus(unsigned p, const std::vector<unsigned>& modulus) {
  if (!is_prime(p)) throw MathError("characteristic must be prime");
  if (modulus.size() < 2) throw MathError("modulus must have degree >= 1");
  Coeffs m(modulus);
  for (auto& c : m) c %= p;
  if (!is_irreducible(m, p)) throw MathError("reducible modulus");
  GaloisField F;
  F.p_ = p;
  F.k_ = static_cast<unsigned>(m.size() - 1);
  unsigned long q = 1;
  for (unsigned i = 0; i < F.k_; ++i) q *= p;
  if (q > kMaxQ) throw MathError("unsupported field size");
  F.q_ = static_cast<unsigned>(q);
  F.modulus_ = m;
  F.build();
  return F;
}

uint32_t GaloisField::inv(uint32_t a) const {
  if (a == 0) throw MathError("inverse of zero in GF(" + std::to_string(q_) + ")");
  return inv_[a];
}

uint32_t GaloisField::pow(uint32_t a, long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t GaloisField::from_int(long n) const {
  long r = n % static_cast<long>(p_);
  if (r < 0) r += p_;
  return static_cast<uint32_t>(r);
}

std::string GaloisField::print(uint32_t a) const {
  if (k_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  Coeffs c = digits(a, p_, k_);
  std::string out;
  for (size_t i = k_; i-- > 0;) {
    if (!c[i]) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += "w";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

uint32_t GaloisField::parse(const std::string& text) const {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(ch));
  if (s.empty()) throw MathError("empty field element");
  size_t pos = 0;
  uint32_t acc = 0;
  auto read_int = [&](long& out) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) return false;
    out = std::stol(s.substr(start, pos - start));
    return true;
  };
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw MathError("malformed field element: " + text);
    }
    first = false;
    long c = 1;
    bool have_c = read_int(c);
    uint32_t term = from_int(c);
    if (pos < s.size() && (s[pos] == '*' || s[pos] == 'w')) {
      if (s[pos] == '*') {
        if (!have_c) throw MathError("malformed field element: " + text);
        ++pos;
      }
      if (pos >= s.size() || s[pos] != 'w') throw MathError("malformed field element: " + text);
      if (k_ == 1) throw MathError("'w' used in prime field GF(" + std::to_string(q_) + ")");
      ++pos;
      long e = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        if (!read_int(e)) throw MathError("malformed exponent: " + text);
      }
      term = mul(term, this->pow(p_, e));  // index p is the class of x
    } else if (!have_c) {
      throw MathError("malformed field element: " + text);
    }
    acc = add(acc, sign < 0 ? neg(term) : term);
  }
  return acc;
}

FieldElem FieldElem::inv() const {
  if (!f || v == 0) throw MathError("inverse of zero field element");
  return FieldElem(*f, f->inv(v));
}

FieldElem FieldElem::pow(long e) const {
  if (!f) {
    if (e <= 0) throw MathError("power of context-free zero");
    return {};
  }
  return FieldElem(*f, f->pow(v, e));
}

static const GaloisField* pick(const FieldElem& a, const FieldElem& b) { return a.f ? a.f : b.f; }

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  const GaloisField* F = pick(a, b);
  if (!F) return {};
  return FieldElem(*F, F->add(a.v, b.v));
}
FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  const GaloisField* F = pick(a, b);
  if (!F) return {};
  return FieldElem(*F, F->sub(a.v, b.v));
}
FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  const GaloisField* F = pick(a, b);
  if (!F) return {};
  return FieldElem(*F, F->mul(a.v, b.v));
}
FieldElem operator-(const FieldElem& a) {
  if (!a.f) return {};
  return FieldElem(*a.f, a.f->neg(a.v));
}

std::vector<FieldElem> field_elements(const GaloisField& F) {
  std::vector<FieldElem> out;
  out.reserve(F.q());
  for (uint32_t v = 0; v < F.q(); ++v) out.emplace_back(F, v);
  return out;
}

std::string to_string(const FieldElem& a) { return a.str(); }
std::string to_string(const BigInt& a) { return a.get_str(); }

std::vector<BigInt> prime_factors(const BigInt& w) {
  std::vector<BigInt> out;
  BigInt n = abs(w);
  for (BigInt d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<long> split_smooth(const BigInt& x, const std::vector<BigInt>& primes, BigInt& rest) {
  std::vector<long> e(primes.size(), 0);
  rest = x;
  if (rest == 0) return e;
  for (size_t i = 0; i < primes.size(); ++i)
    while (rest % primes[i] == 0) {
      rest /= primes[i];
      ++e[i];
    }
  return e;
}

}  // namespace twistconj
