#ifndef UCERT_LINALG_HPP
#define UCERT_LINALG_HPP

// Dense linear algebra over fields of characteristic 2.
//
// Two scalar domains are provided:
//   Gf2  - GF(2); vectors are bit-packed, 64 coordinates per word.
//   GfQ  - GF(2^k) for a Field; one elem_t per coordinate.
// Vectors are row vectors and matrices act on the right (v -> v*A), which
// is the MeatAxe convention. Because the characteristic is 2, subtraction
// is addition everywhere in this file.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucert/field.hpp"

namespace ucert::linalg {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Gf2 {
  using scalar = elem_t;
  scalar add(scalar a, scalar b) const { return a ^ b; }
  scalar mul(scalar a, scalar b) const { return a & b; }
  scalar inv(scalar a) const {
    if (a == 0) throw domain_error("zero has no inverse");
    return a;
  }
  std::uint64_t order() const { return 2; }
  unsigned degree() const { return 1; }
  friend bool operator==(const Gf2&, const Gf2&) { return true; }
};

struct GfQ {
  using scalar = elem_t;
  const Field* field = nullptr;

  explicit GfQ(const Field& f) : field(&f) {}
  scalar add(scalar a, scalar b) const { return a ^ b; }
  scalar mul(scalar a, scalar b) const { return field->mul(a, b); }
  scalar inv(scalar a) const { return field->inv(a); }
  std::uint64_t order() const { return field->size(); }
  unsigned degree() const { return field->degree(); }
  friend bool operator==(const GfQ& a, const GfQ& b) { return a.field == b.field; }
};

template <class K> class Vec;

template <> class Vec<Gf2> {
public:
  using scalar = elem_t;

  Vec() = default;
  Vec(Gf2, std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  Gf2 domain() const { return {}; }
  std::size_t size() const { return n_; }
  scalar get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, scalar s) {
    const std::uint64_t bit = std::uint64_t(1) << (i & 63);
    if (s & 1u) w_[i >> 6] |= bit;
    else w_[i >> 6] &= ~bit;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  bool is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
  }

  /// First index >= from with a nonzero coordinate, or npos.
  std::size_t next_nonzero(std::size_t from = 0) const {
    if (from >= n_) return npos;
    std::size_t wi = from >> 6;
    std::uint64_t w = w_[wi] & (~std::uint64_t(0) << (from & 63));
    while (true) {
      if (w) return (wi << 6) + std::countr_zero(w);
      if (++wi == w_.size()) return npos;
      w = w_[wi];
    }
  }

  /// this += s * o, touching only coordinates >= start.
  void add_scaled(const Vec& o, scalar s, std::size_t start = 0) {
    if (!(s & 1u)) return;
    for (std::size_t i = start >> 6; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  }
  void scale(scalar s) {
    if (!(s & 1u)) std::fill(w_.begin(), w_.end(), 0);
  }

  template <class F> void for_each_nonzero(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi)
      for (std::uint64_t w = w_[wi]; w; w &= w - 1) f((wi << 6) + std::countr_zero(w), scalar(1));
  }

  std::size_t weight() const {
    std::size_t c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

  friend bool operator==(const Vec& a, const Vec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

template <> class Vec<GfQ> {
public:
  using scalar = elem_t;

  Vec(GfQ k, std::size_t n) : k_(k), v_(n, 0) {}

  GfQ domain() const { return k_; }
  std::size_t size() const { return v_.size(); }
  scalar get(std::size_t i) const { return v_[i]; }
  void set(std::size_t i, scalar s) { v_[i] = s; }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](elem_t x) { return x == 0; });
  }
  std::size_t next_nonzero(std::size_t from = 0) const {
    for (std::size_t i = from; i < v_.size(); ++i)
      if (v_[i]) return i;
    return npos;
  }
  void add_scaled(const Vec& o, scalar s, std::size_t start = 0) {
    if (s == 0) return;
    const Field& f = *k_.field;
    if (s == 1) {
      for (std::size_t i = start; i < v_.size(); ++i) v_[i] ^= o.v_[i];
      return;
    }
    for (std::size_t i = start; i < v_.size(); ++i)
      if (o.v_[i]) v_[i] ^= f.mul(o.v_[i], s);
  }
  void scale(scalar s) {
    for (auto& x : v_) x = k_.field->mul(x, s);
  }
  template <class F> void for_each_nonzero(F&& f) const {
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (v_[i]) f(i, v_[i]);
  }
  const std::vector<elem_t>& values() const { return v_; }

  friend bool operator==(const Vec& a, const Vec& b) { return a.k_ == b.k_ && a.v_ == b.v_; }

private:
  GfQ k_;
  std::vector<elem_t> v_;
};

template <class K> Vec<K> unit_vector(K k, std::size_t n, std::size_t i) {
  Vec<K> v(k, n);
  v.set(i, 1);
  return v;
}

/// Concatenation a ++ b.
template <class K> Vec<K> concat(const Vec<K>& a, const Vec<K>& b) {
  Vec<K> r(a.domain(), a.size() + b.size());
  a.for_each_nonzero([&](std::size_t i, elem_t s) { r.set(i, s); });
  b.for_each_nonzero([&](std::size_t i, elem_t s) { r.set(a.size() + i, s); });
  return r;
}

/// Coordinates [from, from + len).
template <class K> Vec<K> slice(const Vec<K>& a, std::size_t from, std::size_t len) {
  Vec<K> r(a.domain(), len);
  for (std::size_t i = a.next_nonzero(from); i != npos && i < from + len; i = a.next_nonzero(i + 1))
    r.set(i - from, a.get(i));
  return r;
}

template <class K> class Matrix {
public:
  using scalar = elem_t;

  Matrix(K k, std::size_t rows, std::size_t cols) : k_(k), cols_(cols), rows_(rows, Vec<K>(k, cols)) {}
  Matrix(K k, std::size_t cols, std::vector<Vec<K>> rows) : k_(k), cols_(cols), rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
  }

  static Matrix identity(K k, std::size_t n) {
    Matrix m(k, n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, 1);
    return m;
  }

  K domain() const { return k_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows() == cols(); }

  scalar at(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, scalar s) { rows_[i].set(j, s); }
  const Vec<K>& row(std::size_t i) const { return rows_[i]; }
  Vec<K>& row(std::size_t i) { return rows_[i]; }

  scalar trace() const {
    scalar t = 0;
    for (std::size_t i = 0; i < std::min(rows(), cols()); ++i) t ^= at(i, i);
    return t;
  }

  bool is_identity() const { return square() && *this == identity(k_, rows()); }

  Matrix transpose() const {
    Matrix t(k_, cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      rows_[i].for_each_nonzero([&](std::size_t j, scalar s) { t.rows_[j].set(i, s); });
    return t;
  }

  Matrix scaled(scalar s) const {
    Matrix r = *this;
    for (auto& row : r.rows_) row.scale(s);
    return r;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_shape(a.rows() == b.rows() && a.cols() == b.cols());
    Matrix r = a;
    for (std::size_t i = 0; i < a.rows(); ++i) r.rows_[i].add_scaled(b.rows_[i], 1);
    return r;
  }

  friend Vec<K> operator*(const Vec<K>& v, const Matrix& m) {
    check_shape(v.size() == m.rows());
    Vec<K> r(m.k_, m.cols_);
    v.for_each_nonzero([&](std::size_t i, scalar s) { r.add_scaled(m.rows_[i], s); });
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    check_shape(a.cols() == b.rows());
    Matrix r(a.k_, b.cols_, std::vector<Vec<K>>{});
    r.rows_.reserve(a.rows());
    for (const auto& row : a.rows_) r.rows_.push_back(row * b);
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

private:
  static void check_shape(bool ok) {
    if (!ok) throw std::invalid_argument("matrix shape mismatch");
  }

  K k_;
  std::size_t cols_;
  std::vector<Vec<K>> rows_;
};

/// Literal Kronecker product a (x) b.
template <class K> Matrix<K> kronecker(const Matrix<K>& a, const Matrix<K>& b) {
  const K k = a.domain();
  Matrix<K> r(k, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    a.row(i).for_each_nonzero([&](std::size_t j, elem_t s) {
      for (std::size_t p = 0; p < b.rows(); ++p)
        b.row(p).for_each_nonzero([&](std::size_t l, elem_t t) {
          r.set(i * b.rows() + p, j * b.cols() + l, k.mul(s, t));
        });
    });
  return r;
}

/// Row-reduced basis of a subspace, in leading-pivot semi-echelon form:
/// each stored row is scaled so its first nonzero coordinate (its pivot)
/// is 1, and pivots are distinct. An optional payload vector rides along
/// with every row operation, which is how nullspaces and polynomial
/// relations are tracked. Pivots may be restricted to coordinates below
/// `pivot_limit`.
template <class K> class EchelonBasis {
public:
  EchelonBasis(K k, std::size_t n, std::size_t payload_len = 0, std::size_t pivot_limit = npos)
      : k_(k), n_(n), payload_len_(payload_len), limit_(std::min(n, pivot_limit)), pivot_row_(limit_, npos) {}

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const Vec<K>& row(std::size_t i) const { return rows_[i]; }
  const Vec<K>& payload(std::size_t i) const { return payloads_[i]; }
  std::size_t pivot(std::size_t i) const { return pivots_[i]; }

  /// Reduce v (and payload) against the basis. Returns the first nonzero
  /// coordinate below the pivot limit after reduction, or npos.
  std::size_t reduce(Vec<K>& v, Vec<K>* payload = nullptr) const {
    for (std::size_t p = v.next_nonzero(0); p != npos && p < limit_; p = v.next_nonzero(p + 1)) {
      const std::size_t r = pivot_row_[p];
      if (r == npos) continue;
      const elem_t s = v.get(p);
      v.add_scaled(rows_[r], s, p);
      if (payload) payload->add_scaled(payloads_[r], s);
    }
    const std::size_t lead = v.next_nonzero(0);
    return lead < limit_ ? lead : npos;
  }

  bool contains(Vec<K> v) const { return reduce(v) == npos && v.next_nonzero(0) == npos; }

  /// Insert v if it is independent of the basis (below the pivot limit).
  /// Returns true if the dimension grew.
  bool insert(Vec<K> v) { return insert(std::move(v), Vec<K>(k_, payload_len_)).first; }

  /// As insert(v), also returning the reduced payload. When v turns out to
  /// be dependent the returned payload records the relation.
  std::pair<bool, Vec<K>> insert(Vec<K> v, Vec<K> payload) {
    const std::size_t lead = reduce(v, &payload);
    if (lead == npos) return {false, std::move(payload)};
    const elem_t s = k_.inv(v.get(lead));
    v.scale(s);
    payload.scale(s);
    pivot_row_[lead] = rows_.size();
    pivots_.push_back(lead);
    rows_.push_back(std::move(v));
    payloads_.push_back(payload);
    return {true, std::move(payload)};
  }

  void clear_payloads() {
    for (auto& p : payloads_) p = Vec<K>(k_, payload_len_);
  }

private:
  K k_;
  std::size_t n_;
  std::size_t payload_len_;
  std::size_t limit_;
  std::vector<std::size_t> pivot_row_;
  std::vector<std::size_t> pivots_;
  std::vector<Vec<K>> rows_;
  std::vector<Vec<K>> payloads_;
};

template <class K> std::size_t rank(const Matrix<K>& a) {
  EchelonBasis<K> e(a.domain(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) e.insert(a.row(i));
  return e.dim();
}

/// Basis of the left nullspace {v : v*A = 0}.
template <class K> std::vector<Vec<K>> left_nullspace(const Matrix<K>& a) {
  const K k = a.domain();
  EchelonBasis<K> e(k, a.cols(), a.rows());
  std::vector<Vec<K>> null;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto [grew, comb] = e.insert(a.row(i), unit_vector(k, a.rows(), i));
    if (!grew) null.push_back(std::move(comb));
  }
  return null;
}

/// Inverse of a square matrix, or throws domain_error if singular.
template <class K> Matrix<K> inverse(const Matrix<K>& a) {
  if (!a.square()) throw std::invalid_argument("inverse of a non-square matrix");
  const K k = a.domain();
  const std::size_t n = a.rows();
  EchelonBasis<K> e(k, n, n);
  for (std::size_t i = 0; i < n; ++i)
    if (!e.insert(a.row(i), unit_vector(k, n, i)).first) throw domain_error("matrix is singular");
  // back-substitute: the row with pivot p becomes e_p
  std::vector<Vec<K>> rows(n, Vec<K>(k, n)), pays(n, Vec<K>(k, n));
  for (std::size_t i = 0; i < n; ++i) {
    rows[e.pivot(i)] = e.row(i);
    pays[e.pivot(i)] = e.payload(i);
  }
  for (std::size_t p = n; p-- > 0;) {
    for (std::size_t j = rows[p].next_nonzero(p + 1); j != npos; j = rows[p].next_nonzero(j + 1)) {
      const elem_t s = rows[p].get(j);
      rows[p].add_scaled(rows[j], s);
      pays[p].add_scaled(pays[j], s);
    }
  }
  return Matrix<K>(k, n, std::move(pays));
}

/// Polynomials over a characteristic-2 domain, coefficients low to high,
/// with no trailing zeros (the zero polynomial is empty).
template <class K> class Poly {
public:
  explicit Poly(K k, std::vector<elem_t> c = {}) : k_(k), c_(std::move(c)) { trim(); }

  static Poly monomial(K k, std::size_t d) {
    std::vector<elem_t> c(d + 1, 0);
    c[d] = 1;
    return Poly(k, std::move(c));
  }

  K domain() const { return k_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  elem_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<elem_t>& coeffs() const { return c_; }
  elem_t lead() const { return c_.empty() ? 0 : c_.back(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<elem_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) ^ b.coeff(i);
    return Poly(a.k_, std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.k_);
    std::vector<elem_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] ^= a.k_.mul(a.c_[i], b.c_[j]);
    return Poly(a.k_, std::move(c));
  }
  friend Poly operator%(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw domain_error("polynomial division by zero");
    std::vector<elem_t> r = a.c_;
    const elem_t linv = a.k_.inv(b.lead());
    for (long d = static_cast<long>(r.size()) - 1; d >= b.degree(); --d) {
      const elem_t s = a.k_.mul(r[d], linv);
      if (!s) continue;
      const long shift = d - b.degree();
      for (long i = 0; i <= b.degree(); ++i) r[shift + i] ^= a.k_.mul(s, b.c_[i]);
    }
    return Poly(a.k_, std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  elem_t eval(elem_t x) const {
    elem_t r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = k_.mul(r, x) ^ c_[i];
    return r;
  }

  /// p(A) by Horner's rule.
  Matrix<K> eval(const Matrix<K>& a) const {
    const std::size_t n = a.rows();
    Matrix<K> r(k_, n, n);
    for (std::size_t i = c_.size(); i-- > 0;) {
      r = r * a;
      for (std::size_t j = 0; j < n; ++j) r.set(j, j, r.at(j, j) ^ c_[i]);
    }
    return r;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  K k_;
  std::vector<elem_t> c_;
};

/// Characteristic polynomial by Krylov decomposition: repeatedly spin a
/// unit vector not yet covered under A; each cyclic chain contributes the
/// relative minimal polynomial of its quotient, and their product is
/// det(xI - A).
template <class K> Poly<K> charpoly(const Matrix<K>& a) {
  if (!a.square()) throw std::invalid_argument("charpoly of a non-square matrix");
  const K k = a.domain();
  const std::size_t n = a.rows();
  EchelonBasis<K> w(k, n, n + 1);
  Poly<K> result(k, {1});
  for (std::size_t start = 0; start < n && w.dim() < n; ++start) {
    if (w.contains(unit_vector(k, n, start))) continue;
    w.clear_payloads();
    Vec<K> v = unit_vector(k, n, start);
    for (std::size_t j = 0;; ++j) {
      auto [grew, rel] = w.insert(v, unit_vector(k, n + 1, j));
      if (!grew) {
        std::vector<elem_t> c(rel.size());
        for (std::size_t i = 0; i < rel.size(); ++i) c[i] = rel.get(i);
        result = result * Poly<K>(k, std::move(c));
        break;
      }
      v = v * a;
    }
  }
  return result;
}

/// Monic irreducible polynomials of the given degree, in increasing order of
/// their coefficient vectors (read high to low).
template <class K> std::vector<Poly<K>> irreducibles_of_degree(K k, unsigned d,
                                                               const std::vector<std::vector<Poly<K>>>& lower) {
  const std::uint64_t Q = k.order();
  std::uint64_t count = 1;
  for (unsigned i = 0; i < d; ++i) count *= Q;
  std::vector<Poly<K>> out;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<elem_t> c(d + 1, 0);
    c[d] = 1;
    std::uint64_t x = code;
    for (unsigned i = 0; i < d; ++i) {
      c[d - 1 - i] = static_cast<elem_t>(x % Q);
      x /= Q;
    }
    Poly<K> p(k, std::move(c));
    bool irreducible = true;
    for (unsigned e = 1; irreducible && 2 * e <= d; ++e)
      for (const auto& f : lower.at(e))
        if ((p % f).is_zero()) { irreducible = false; break; }
    if (irreducible) out.push_back(std::move(p));
  }
  return out;
}

/// All monic irreducibles of degree 1..max_degree; entry [d] holds degree d.
template <class K> std::vector<std::vector<Poly<K>>> irreducibles_up_to(K k, unsigned max_degree) {
  std::vector<std::vector<Poly<K>>> by_degree(max_degree + 1);
  for (unsigned d = 1; d <= max_degree; ++d) by_degree[d] = irreducibles_of_degree(k, d, by_degree);
  return by_degree;
}

} // namespace ucert::linalg

#endif // UCERT_LINALG_HPP
