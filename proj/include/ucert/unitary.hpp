#ifndef UCERT_UNITARY_HPP
#define UCERT_UNITARY_HPP

// 3x3 matrices over GF(q^2), SU_3(q) generators, the center, the diagonal
// torus and its traces, and the 8-dimensional adjoint (traceless) module.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ucert/field.hpp"
#include "ucert/hermitian.hpp"
#include "ucert/linalg.hpp"

namespace ucert {

/// 3x3 matrix over GF(q^2), row-major. Acts on column vectors.
class Mat3 {
public:
  Mat3(const Tower& t, std::array<elem_t, 9> e) : tower_(&t), e_(e) {
    for (elem_t x : e_)
      if (!t.ext().contains(x)) throw domain_error("matrix entry outside GF(q^2)");
  }

  static Mat3 identity(const Tower& t) { return Mat3(t, {1, 0, 0, 0, 1, 0, 0, 0, 1}); }
  static Mat3 scalar(const Tower& t, const FieldElem& l) {
    if (&l.field() != &t.ext()) throw level_error("scalar must lie in GF(q^2)");
    const elem_t v = l.value();
    return Mat3(t, {v, 0, 0, 0, v, 0, 0, 0, v});
  }

  const Tower& tower() const { return *tower_; }
  elem_t raw(int i, int j) const { return e_[3 * i + j]; }
  FieldElem at(int i, int j) const { return tower_->ext_elem(raw(i, j)); }
  const std::array<elem_t, 9>& entries() const { return e_; }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    same_tower(a, b);
    const Field& f = a.tower_->ext();
    std::array<elem_t, 9> r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        elem_t s = 0;
        for (int k = 0; k < 3; ++k) s ^= f.mul(a.raw(i, k), b.raw(k, j));
        r[3 * i + j] = s;
      }
    return Mat3(*a.tower_, r);
  }
  friend bool operator==(const Mat3& a, const Mat3& b) { return a.tower_ == b.tower_ && a.e_ == b.e_; }

  FieldElem trace() const { return tower_->ext_elem(raw(0, 0) ^ raw(1, 1) ^ raw(2, 2)); }

  FieldElem det() const {
    const Field& f = tower_->ext();
    auto m = [&](int i, int j) { return raw(i, j); };
    auto minor = [&](int r0, int r1, int c0, int c1) {
      return f.mul(m(r0, c0), m(r1, c1)) ^ f.mul(m(r0, c1), m(r1, c0));
    };
    const elem_t d = f.mul(m(0, 0), minor(1, 2, 1, 2)) ^ f.mul(m(0, 1), minor(1, 2, 0, 2)) ^
                     f.mul(m(0, 2), minor(1, 2, 0, 1));
    return tower_->ext_elem(d);
  }

  /// Adjugate over determinant.
  Mat3 inverse() const {
    const Field& f = tower_->ext();
    const FieldElem d = det();
    if (d.is_zero()) throw domain_error("singular 3x3 matrix");
    const elem_t di = f.inv(d.value());
    std::array<elem_t, 9> r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        // cofactor of (j, i); signs vanish in characteristic 2
        const int r0 = j == 0 ? 1 : 0, r1 = j == 2 ? 1 : 2;
        const int c0 = i == 0 ? 1 : 0, c1 = i == 2 ? 1 : 2;
        const elem_t c = f.mul(raw(r0, c0), raw(r1, c1)) ^ f.mul(raw(r0, c1), raw(r1, c0));
        r[3 * i + j] = f.mul(c, di);
      }
    return Mat3(*tower_, r);
  }

  /// Entrywise x -> x^(2^i).
  Mat3 frobenius_twist(unsigned i) const {
    std::array<elem_t, 9> r{};
    for (int k = 0; k < 9; ++k) r[k] = tower_->ext().frobenius(e_[k], i);
    return Mat3(*tower_, r);
  }

  Vec3 apply(const Vec3& v) const {
    require_ext(*tower_, v);
    const Field& f = tower_->ext();
    std::array<elem_t, 3> r{};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) r[i] ^= f.mul(raw(i, k), v[k].value());
    return make_vec3(*tower_, r[0], r[1], r[2]);
  }

private:
  static void same_tower(const Mat3& a, const Mat3& b) {
    if (a.tower_ != b.tower_) throw level_error("matrices over different towers");
  }

  const Tower* tower_;
  std::array<elem_t, 9> e_;
};

/// det A = 1 and H(Ae_i, Ae_j) = H(e_i, e_j) for all basis pairs.
inline bool is_special_unitary(const Mat3& a) {
  const Tower& t = a.tower();
  const Field& f = t.ext();
  if (!a.det().is_one()) return false;
  // Gram matrix of the form is antidiagonal ones: H(e_i, e_j) = [i + j == 2]
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // column i of A against column j: sum_k A_ki * conj(A_(2-k)j)
      elem_t h = 0;
      for (int k = 0; k < 3; ++k) h ^= f.mul(a.raw(k, i), t.conjugate_raw(a.raw(2 - k, j)));
      if (h != (i + j == 2 ? 1u : 0u)) return false;
    }
  return true;
}

/// diag(beta, 1, beta^-1) for beta in GF(q)^* (given in GF(q) or embedded).
inline Mat3 torus_element(const Tower& t, const FieldElem& beta) {
  FieldElem b = &beta.field() == &t.sub() ? t.embed(beta) : beta;
  if (&b.field() != &t.ext() || !t.in_subfield(b)) throw level_error("beta must lie in GF(q)");
  if (b.is_zero()) throw domain_error("beta must be nonzero");
  return Mat3(t, {b.value(), 0, 0, 0, 1, 0, 0, 0, b.inverse().value()});
}

/// The antidiagonal permutation matrix swapping e1 and e3.
inline Mat3 antidiagonal_w(const Tower& t) { return Mat3(t, {0, 0, 1, 0, 1, 0, 1, 0, 0}); }

inline std::uint64_t su3_order_formula(std::uint64_t q) { return (q * q * q + 1) * q * q * q * (q * q - 1); }

struct GeneratorSet {
  std::uint64_t q = 0;
  std::vector<Mat3> generators;
  std::uint64_t claimed_order = 0;
};

/// w, a torus element for the smallest primitive beta of GF(q), and every
/// nonidentity upper unipotent matrix [[1,a,b],[0,1,c],[0,0,1]] that
/// preserves the form. The unipotent candidates are enumerated over all
/// (a, b, c) and filtered with is_special_unitary.
inline GeneratorSet su3_generators(std::uint64_t q) {
  const Tower& t = Tower::get(q);
  GeneratorSet gs;
  gs.q = q;
  gs.claimed_order = su3_order_formula(q);
  gs.generators.push_back(antidiagonal_w(t));
  gs.generators.push_back(torus_element(t, t.sub_elem(t.sub().generator())));
  const elem_t Q = t.ext().size();
  for (elem_t a = 0; a < Q; ++a)
    for (elem_t b = 0; b < Q; ++b)
      for (elem_t c = 0; c < Q; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        Mat3 u(t, {1, a, b, 0, 1, c, 0, 0, 1});
        if (is_special_unitary(u)) gs.generators.push_back(u);
      }
  for (const auto& g : gs.generators)
    if (!is_special_unitary(g)) throw std::logic_error("generator is not special unitary");
  return gs;
}

/// gcd(3, q+1), cross-checked by counting scalar matrices lI in SU_3(q).
inline std::uint64_t center_order(std::uint64_t q) {
  const std::uint64_t formula = std::gcd<std::uint64_t>(3, q + 1);
  const Tower& t = Tower::get(q);
  std::uint64_t count = 0;
  for (elem_t l = 1; l < t.ext().size(); ++l)
    if (is_special_unitary(Mat3::scalar(t, t.ext_elem(l)))) ++count;
  if (count != formula) throw std::logic_error("center order: constructive count disagrees with gcd(3, q+1)");
  return formula;
}

/// Scalar matrices of SU_3(q).
inline std::vector<Mat3> center_elements(std::uint64_t q) {
  const Tower& t = Tower::get(q);
  std::vector<Mat3> out;
  for (elem_t l = 1; l < t.ext().size(); ++l) {
    Mat3 s = Mat3::scalar(t, t.ext_elem(l));
    if (is_special_unitary(s)) out.push_back(s);
  }
  return out;
}

// Basis of the traceless 3x3 matrices, in this order:
//   E12, E13, E21, E23, E31, E32, E11+E22, E22+E33.
// A traceless X has coordinates (X12, X13, X21, X23, X31, X32, X11, X33).
namespace detail {

inline std::array<elem_t, 9> traceless_basis_element(int k) {
  static constexpr int off[6][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
  std::array<elem_t, 9> e{};
  if (k < 6) e[3 * off[k][0] + off[k][1]] = 1;
  else if (k == 6) e[0] = e[4] = 1;
  else e[4] = e[8] = 1;
  return e;
}

inline std::array<elem_t, 8> traceless_coords(const Mat3& x) {
  return {x.raw(0, 1), x.raw(0, 2), x.raw(1, 0), x.raw(1, 2), x.raw(2, 0), x.raw(2, 1), x.raw(0, 0), x.raw(2, 2)};
}

} // namespace detail

/// Matrix of X -> A X A^-1 on the traceless matrices, column convention:
/// column k holds the coordinates of the image of basis element k, so
/// adjoint(AB) = adjoint(A) * adjoint(B).
inline linalg::Matrix<linalg::GfQ> adjoint_matrix(const Mat3& a) {
  const Tower& t = a.tower();
  const linalg::GfQ k(t.ext());
  const Mat3 ainv = a.inverse();
  linalg::Matrix<linalg::GfQ> m(k, 8, 8);
  for (int col = 0; col < 8; ++col) {
    const Mat3 img = a * Mat3(t, detail::traceless_basis_element(col)) * ainv;
    if (!img.trace().is_zero()) throw std::logic_error("conjugation left the traceless subspace");
    const auto c = detail::traceless_coords(img);
    for (int row = 0; row < 8; ++row) m.set(row, col, c[row]);
  }
  return m;
}

inline std::vector<linalg::Matrix<linalg::GfQ>> adjoint_module_matrices(const GeneratorSet& gs) {
  std::vector<linalg::Matrix<linalg::GfQ>> out;
  out.reserve(gs.generators.size());
  for (const auto& g : gs.generators) out.push_back(adjoint_matrix(g));
  return out;
}

/// (beta + beta^-1)^2 for beta in GF(q) \ GF(2), as elements of GF(q).
struct TraceCensus {
  std::uint64_t q = 0;
  std::vector<elem_t> values; // sorted canonical serializations in GF(q)
  std::uint64_t r = 0;
  bool threshold_holds = false; // r > (q-1)/3
};

inline TraceCensus trace_census(std::uint64_t q) {
  if (q < 4) throw domain_error("trace census needs q >= 4");
  const Tower& t = Tower::get(q);
  const Field& f = t.sub();
  std::set<elem_t> vals;
  for (elem_t b = 2; b < f.size(); ++b) {
    const elem_t s = b ^ f.inv(b);
    vals.insert(f.mul(s, s));
  }
  TraceCensus c;
  c.q = q;
  c.values.assign(vals.begin(), vals.end());
  c.r = c.values.size();
  if (c.r != (q - 2) / 2) throw std::logic_error("trace census size differs from (q-2)/2");
  if (vals.count(0)) throw std::logic_error("zero in trace census");
  c.threshold_holds = 3 * c.r > q - 1;
  return c;
}

} // namespace ucert

#endif // UCERT_UNITARY_HPP
