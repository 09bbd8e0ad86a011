#ifndef UCERT_FIELD_HPP
#define UCERT_FIELD_HPP

// Binary finite fields GF(2^d), d <= 16, and the quadratic tower
// GF(2) < GF(q) < GF(q^2) used by the unitary group code.
//
// Elements are little-endian coefficient bitstrings over GF(2) packed in a
// 32-bit word: bit i is the coefficient of x^i. The integer value of that
// word is the canonical serialization used in every JSON output.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucert {

using elem_t = std::uint32_t;

/// Thrown when an operation receives an element from the wrong field of the tower.
class level_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Thrown when an input lies outside an operation's domain (zero inverse, bad q, ...).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

namespace detail {

inline unsigned poly_degree(std::uint64_t p) {
  unsigned d = 0;
  while (p >>= 1) ++d;
  return d;
}

// Remainder of a modulo b over GF(2); b != 0.
inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned db = poly_degree(b);
  while (a != 0 && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
  return a;
}

} // namespace detail

/// Carry-less product of a and b reduced modulo `modulus` (degree `degree`).
/// This is the bit-level reference multiply; Field uses it to build tables.
inline elem_t clmul_mod(elem_t a, elem_t b, std::uint32_t modulus, unsigned degree) {
  std::uint64_t acc = 0;
  for (unsigned i = 0; i < degree; ++i)
    if ((b >> i) & 1u) acc ^= std::uint64_t(a) << i;
  return static_cast<elem_t>(detail::poly_mod(acc, modulus));
}

/// True iff the GF(2) polynomial `p` (bit i = coefficient of x^i) is
/// irreducible. Exhaustive trial division by every polynomial of degree
/// 1..deg/2.
inline bool is_irreducible_gf2(std::uint64_t p) {
  const unsigned d = detail::poly_degree(p);
  if (d == 0) return false;
  for (unsigned k = 1; 2 * k <= d; ++k)
    for (std::uint64_t g = std::uint64_t(1) << k; g < (std::uint64_t(2) << k); ++g)
      if (detail::poly_mod(p, g) == 0) return false;
  return true;
}

/// Conway polynomials over GF(2) for the degrees this library ships.
inline std::uint32_t conway_modulus(unsigned degree) {
  switch (degree) {
  case 1: return 0b11;                // x + 1
  case 2: return 0b111;               // x^2 + x + 1
  case 3: return 0b1011;              // x^3 + x + 1
  case 4: return 0b10011;             // x^4 + x + 1
  case 6: return 0b1011011;           // x^6 + x^4 + x^3 + x + 1
  case 8: return 0b100011101;         // x^8 + x^4 + x^3 + x^2 + 1
  case 16: return 0x1002D;            // x^16 + x^5 + x^3 + x^2 + 1
  default:
    throw domain_error("no Conway polynomial shipped for degree " + std::to_string(degree));
  }
}

/// GF(2^degree) = GF(2)[x] / (modulus). Immutable; multiplication goes
/// through exp/log tables built from the bit-level reference multiply.
class Field {
public:
  Field(unsigned degree, std::uint32_t modulus) : degree_(degree), modulus_(modulus) {
    if (degree == 0 || degree > 16) throw domain_error("field degree must be in 1..16");
    if (detail::poly_degree(modulus) != degree)
      throw domain_error("modulus degree does not match field degree");
    if (!is_irreducible_gf2(modulus)) throw domain_error("modulus is reducible");
    size_ = elem_t(1) << degree;
    build_tables();
  }

  /// The field defined by the shipped Conway polynomial. Instances are
  /// cached for the program lifetime, so references (and pointer identity)
  /// are stable.
  static const Field& conway(unsigned degree) {
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<Field>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[degree];
    if (!slot) slot = std::make_unique<Field>(degree, conway_modulus(degree));
    return *slot;
  }

  unsigned degree() const { return degree_; }
  std::uint32_t modulus() const { return modulus_; }
  elem_t size() const { return size_; }
  elem_t multiplicative_order() const { return size_ - 1; }
  /// Smallest element (by serialization) that generates the multiplicative group.
  elem_t generator() const { return generator_; }

  elem_t add(elem_t a, elem_t b) const { return a ^ b; }
  elem_t mul(elem_t a, elem_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  elem_t mul_reference(elem_t a, elem_t b) const { return clmul_mod(a, b, modulus_, degree_); }

  elem_t pow(elem_t a, std::uint64_t e) const {
    elem_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// a^(2^degree - 2), which is a^-1 for a != 0.
  elem_t inv(elem_t a) const {
    if (a == 0) throw domain_error("zero has no inverse");
    return pow(a, std::uint64_t(size_) - 2);
  }

  /// a^(2^i), by i squarings.
  elem_t frobenius(elem_t a, unsigned i) const {
    for (unsigned k = 0; k < i % degree_; ++k) a = mul(a, a);
    return a;
  }

  /// Discrete logarithm to base generator(); a != 0.
  elem_t log(elem_t a) const {
    if (a == 0) throw domain_error("log of zero");
    return log_[a];
  }
  elem_t exp(std::uint64_t k) const { return exp_[k % (size_ - 1)]; }

  bool contains(elem_t a) const { return a < size_; }

private:
  void build_tables() {
    exp_.assign(2 * std::size_t(size_), 0);
    log_.assign(size_, 0);
    const elem_t n = size_ - 1;
    std::vector<elem_t> primes;
    for (elem_t p = 2, rest = n; rest > 1; ++p) {
      if (rest % p) continue;
      primes.push_back(p);
      while (rest % p == 0) rest /= p;
    }
    // g has order n iff g^(n/p) != 1 for every prime p | n
    generator_ = 1;
    for (elem_t g = 2; n > 1 && g < size_; ++g) {
      bool primitive = true;
      for (elem_t p : primes)
        if (pow_reference(g, n / p) == 1) { primitive = false; break; }
      if (primitive) { generator_ = g; break; }
    }
    elem_t x = 1;
    for (elem_t k = 0; k < n; ++k) {
      exp_[k] = x;
      exp_[k + n] = x;
      log_[x] = k;
      x = mul_reference(x, generator_);
    }
    if (x != 1) throw std::logic_error("generator search failed");
  }

  elem_t pow_reference(elem_t a, std::uint64_t e) const {
    elem_t r = 1;
    while (e) {
      if (e & 1) r = mul_reference(r, a);
      a = mul_reference(a, a);
      e >>= 1;
    }
    return r;
  }

  unsigned degree_;
  std::uint32_t modulus_;
  elem_t size_ = 0;
  elem_t generator_ = 1;
  std::vector<elem_t> exp_;
  std::vector<elem_t> log_;
};

/// An element of a specific Field. Mixing elements of different fields in
/// one operation throws level_error.
class FieldElem {
public:
  FieldElem(const Field& f, elem_t v) : field_(&f), value_(v) {
    if (!f.contains(v)) throw domain_error("value out of range for field");
  }

  const Field& field() const { return *field_; }
  elem_t value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    same_level(a, b);
    return {*a.field_, a.value_ ^ b.value_};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + b; }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    same_level(a, b);
    return {*a.field_, a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

  FieldElem inverse() const { return {*field_, field_->inv(value_)}; }
  FieldElem pow(std::uint64_t e) const { return {*field_, field_->pow(value_, e)}; }

private:
  static void same_level(const FieldElem& a, const FieldElem& b) {
    if (a.field_ != b.field_) throw level_error("operands live in different fields");
  }

  const Field* field_;
  elem_t value_;
};

inline FieldElem zero(const Field& f) { return {f, 0}; }
inline FieldElem one(const Field& f) { return {f, 1}; }

/// x^(2^i). Additive and multiplicative in x.
inline FieldElem frobenius_power(const FieldElem& x, unsigned i) {
  return {x.field(), x.field().frobenius(x.value(), i)};
}

/// Least k >= 1 with x^k = 1.
inline std::uint64_t mult_order(const FieldElem& x) {
  if (x.is_zero()) throw domain_error("zero has no multiplicative order");
  const std::uint64_t n = x.field().multiplicative_order();
  // the order divides n; scan divisors in increasing order
  for (std::uint64_t k = 1; k <= n; ++k)
    if (n % k == 0 && x.pow(k).is_one()) return k;
  throw std::logic_error("unreachable: x^n = 1 for every unit");
}

inline bool is_primitive(const FieldElem& x) {
  return !x.is_zero() && mult_order(x) == x.field().multiplicative_order();
}

/// #{a in F_q : a^M = 1} = gcd(M, q-1), for 1 <= M < q-1. The result is at
/// most (q-1)/3 because (q-1)/gcd is odd and greater than one.
inline std::uint64_t mu_order(std::uint64_t M, std::uint64_t q) {
  if (q < 4 || (q & (q - 1)) != 0) throw domain_error("q must be a power of 2 with q >= 4");
  if (M < 1 || M >= q - 1) throw domain_error("mu_order requires 1 <= M < q-1");
  const std::uint64_t g = std::gcd(M, q - 1);
  if (3 * g > q - 1) throw std::logic_error("mu_M bound (q-1)/3 violated");
  return g;
}

/// The tower GF(2) < GF(q) < GF(q^2) with q = 2^m, both levels defined by
/// Conway polynomials. The subfield is embedded into GF(q^2) by sending x to
/// the smallest root (by serialization) of the degree-m Conway polynomial.
class Tower {
public:
  explicit Tower(std::uint64_t q) : q_(q) {
    if (q != 4 && q != 8 && q != 16)
      throw domain_error("unsupported q = " + std::to_string(q) + " (expected 4, 8 or 16)");
    m_ = detail::poly_degree(q);
    sub_ = &Field::conway(m_);
    ext_ = &Field::conway(2 * m_);

    const std::uint32_t cm = conway_modulus(m_);
    root_ = 0;
    for (elem_t r = 1; r < ext_->size(); ++r) {
      elem_t acc = 0, power = 1;
      for (unsigned i = 0; i <= m_; ++i) {
        if ((cm >> i) & 1u) acc ^= power;
        power = ext_->mul(power, r);
      }
      if (acc == 0) { root_ = r; break; }
    }
    if (root_ == 0) throw std::logic_error("subfield modulus has no root in GF(q^2)");

    embed_.resize(sub_->size());
    for (elem_t a = 0; a < sub_->size(); ++a) {
      elem_t acc = 0, power = 1;
      for (unsigned i = 0; i < m_; ++i) {
        if ((a >> i) & 1u) acc ^= power;
        power = ext_->mul(power, root_);
      }
      embed_[a] = acc;
    }
    restrict_.assign(ext_->size(), kNotInSubfield);
    for (elem_t a = 0; a < sub_->size(); ++a) restrict_[embed_[a]] = a;
    conj_.resize(ext_->size());
    for (elem_t a = 0; a < ext_->size(); ++a) conj_[a] = ext_->pow(a, q_);
  }

  /// Shared instance for q in {4, 8, 16}.
  static const Tower& get(std::uint64_t q) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<Tower>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<Tower>(q);
    return *slot;
  }

  std::uint64_t q() const { return q_; }
  unsigned m() const { return m_; }
  const Field& sub() const { return *sub_; }
  const Field& ext() const { return *ext_; }
  elem_t subfield_root() const { return root_; }

  FieldElem embed(const FieldElem& a) const {
    if (&a.field() != sub_) throw level_error("embed expects an element of GF(q)");
    return {*ext_, embed_[a.value()]};
  }
  elem_t embed_raw(elem_t a) const { return embed_[a]; }

  bool in_subfield(const FieldElem& x) const {
    if (&x.field() != ext_) throw level_error("expected an element of GF(q^2)");
    return restrict_[x.value()] != kNotInSubfield;
  }

  /// Inverse of embed on its image.
  FieldElem restrict(const FieldElem& x) const {
    if (!in_subfield(x)) throw domain_error("element is not in the embedded subfield");
    return {*sub_, restrict_[x.value()]};
  }

  /// x -> x^q on GF(q^2).
  FieldElem conjugate(const FieldElem& x) const {
    if (&x.field() != ext_) throw level_error("conjugate expects an element of GF(q^2)");
    return {*ext_, conj_[x.value()]};
  }
  elem_t conjugate_raw(elem_t x) const { return conj_[x]; }

  FieldElem ext_elem(elem_t v) const { return {*ext_, v}; }
  FieldElem sub_elem(elem_t v) const { return {*sub_, v}; }

private:
  static constexpr elem_t kNotInSubfield = ~elem_t(0);

  std::uint64_t q_;
  unsigned m_ = 0;
  const Field* sub_ = nullptr;
  const Field* ext_ = nullptr;
  elem_t root_ = 0;
  std::vector<elem_t> embed_;
  std::vector<elem_t> restrict_;
  std::vector<elem_t> conj_;
};

} // namespace ucert

#endif // UCERT_FIELD_HPP
