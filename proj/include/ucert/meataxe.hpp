#ifndef UCERT_MEATAXE_HPP
#define UCERT_MEATAXE_HPP

// Modules over GF(2) and GF(2^k) given by generator matrices, the
// permutation module and its zero-sum hyperplane Q_B, the adjoint module
// St_2, Norton's irreducibility test, endomorphism degree, and the
// Frobenius-twist trace machinery.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucert/linalg.hpp"
#include "ucert/perm.hpp"
#include "ucert/random.hpp"
#include "ucert/unitary.hpp"

namespace ucert {

using linalg::Gf2;
using linalg::GfQ;
using linalg::Matrix;
using linalg::Vec;

/// A right module given by one invertible matrix per generator.
template <class K> class FpModule {
public:
  FpModule(K k, std::size_t dim, std::vector<Matrix<K>> actions) : k_(k), dim_(dim), actions_(std::move(actions)) {
    if (dim_ == 0) throw domain_error("module dimension must be positive");
    for (const auto& a : actions_) {
      if (a.rows() != dim_ || a.cols() != dim_) throw std::invalid_argument("action matrix has wrong shape");
      if (linalg::rank(a) != dim_) throw domain_error("action matrix is not invertible");
    }
  }

  K domain() const { return k_; }
  std::size_t dim() const { return dim_; }
  std::size_t generator_count() const { return actions_.size(); }
  const std::vector<Matrix<K>>& actions() const { return actions_; }
  const Matrix<K>& action(std::size_t i) const { return actions_.at(i); }

  /// The dual module: transposed (contragredient up to generator inversion)
  /// action. Submodules of the dual correspond to annihilators in M.
  FpModule transposed() const {
    std::vector<Matrix<K>> t;
    t.reserve(actions_.size());
    for (const auto& a : actions_) t.push_back(a.transpose());
    return FpModule(k_, dim_, std::move(t));
  }

  /// Matrix of the word g_{w0} g_{w1} ... (right action, left to right).
  Matrix<K> word(const std::vector<std::size_t>& w) const {
    Matrix<K> r = Matrix<K>::identity(k_, dim_);
    for (std::size_t i : w) r = r * actions_.at(i);
    return r;
  }

private:
  K k_;
  std::size_t dim_;
  std::vector<Matrix<K>> actions_;
};

using Gf2Module = FpModule<Gf2>;
using GfQModule = FpModule<GfQ>;

template <class K> FpModule<K> direct_sum(const FpModule<K>& a, const FpModule<K>& b) {
  if (a.generator_count() != b.generator_count()) throw std::invalid_argument("generator counts differ");
  const std::size_t n = a.dim() + b.dim();
  std::vector<Matrix<K>> acts;
  for (std::size_t g = 0; g < a.generator_count(); ++g) {
    Matrix<K> m(a.domain(), n, n);
    for (std::size_t i = 0; i < a.dim(); ++i)
      a.action(g).row(i).for_each_nonzero([&](std::size_t j, elem_t s) { m.set(i, j, s); });
    for (std::size_t i = 0; i < b.dim(); ++i)
      b.action(g).row(i).for_each_nonzero([&](std::size_t j, elem_t s) { m.set(a.dim() + i, a.dim() + j, s); });
    acts.push_back(std::move(m));
  }
  return FpModule<K>(a.domain(), n, std::move(acts));
}

// ---------------------------------------------------------------------------
// Permutation modules

/// 0/1 matrix with row b equal to e_{s(b)}.
inline Matrix<Gf2> permutation_matrix(const Perm& s) {
  Matrix<Gf2> m(Gf2{}, s.degree(), s.degree());
  for (point_t b = 0; b < s.degree(); ++b) m.set(b, s(b), 1);
  return m;
}

/// GF(2)^B with the permutation action.
inline Gf2Module perm_module(std::size_t n, const std::vector<Perm>& perms) {
  std::vector<Matrix<Gf2>> acts;
  for (const auto& p : perms) {
    if (p.degree() != n) throw std::invalid_argument("permutation degree mismatch");
    acts.push_back(permutation_matrix(p));
  }
  return Gf2Module(Gf2{}, n, std::move(acts));
}

struct QbModule {
  Gf2Module module;
  /// True when n is odd, so GF(2)^B = Q_B + GF(2)*1_B.
  bool complement_splits;
};

/// The zero-sum hyperplane Q_B in the basis v_b = e_b + e_0 (b = 1..n-1,
/// coordinate b-1), where s*v_b = v_{s(b)} + v_{s(0)} and v_0 = 0.
inline QbModule qb_module(std::size_t n, const std::vector<Perm>& perms) {
  if (n < 2) throw domain_error("Q_B needs at least two points");
  std::vector<Matrix<Gf2>> acts;
  for (const auto& s : perms) {
    if (s.degree() != n) throw std::invalid_argument("permutation degree mismatch");
    Matrix<Gf2> m(Gf2{}, n - 1, n - 1);
    const point_t s0 = s(0);
    for (point_t b = 1; b < n; ++b) {
      if (s(b) != 0) m.row(b - 1).flip(s(b) - 1);
      if (s0 != 0) m.row(b - 1).flip(s0 - 1);
    }
    acts.push_back(std::move(m));
  }
  return {Gf2Module(Gf2{}, n - 1, std::move(acts)), n % 2 == 1};
}

/// The constant function 1_B has coordinate sum n mod 2; it lies outside
/// Q_B exactly when n is odd.
inline bool all_ones_outside_hyperplane(std::size_t n) { return n % 2 == 1; }

// ---------------------------------------------------------------------------
// Spinning

/// The submodule generated by a vector. `basis[k]` is the image of
/// basis[tree[k].first] under generator tree[k].second (root has parent -1),
/// so the basis doubles as a word tree for building homomorphisms.
template <class K> struct SpinResult {
  std::vector<Vec<K>> basis;
  std::vector<std::pair<std::int64_t, std::size_t>> tree;
  std::size_t dim() const { return basis.size(); }
};

template <class K> SpinResult<K> spin(const Vec<K>& v, const std::vector<Matrix<K>>& gens) {
  SpinResult<K> out;
  if (v.is_zero()) return out;
  linalg::EchelonBasis<K> ech(v.domain(), v.size());
  ech.insert(v);
  out.basis.push_back(v);
  out.tree.push_back({-1, 0});
  for (std::size_t k = 0; k < out.basis.size() && out.basis.size() < v.size(); ++k)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Vec<K> w = out.basis[k] * gens[g];
      if (ech.insert(w)) {
        out.basis.push_back(std::move(w));
        out.tree.push_back({static_cast<std::int64_t>(k), g});
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Random algebra elements

/// sum_k coeff_k * word_k, with each word a product of generators.
struct AlgebraElement {
  struct Term {
    elem_t coeff;
    std::vector<std::size_t> word;
  };
  std::vector<Term> terms;
};

inline constexpr std::size_t kMaxWordLength = 6;
inline constexpr std::size_t kMaxSummands = 6;
inline constexpr std::size_t kDefaultBudget = 64;

template <class K> AlgebraElement random_algebra_element(const FpModule<K>& m, Rng& rng) {
  AlgebraElement a;
  const std::size_t summands = rng.between(1, kMaxSummands);
  for (std::size_t s = 0; s < summands; ++s) {
    AlgebraElement::Term t;
    t.coeff = static_cast<elem_t>(rng.between(1, m.domain().order() - 1));
    const std::size_t len = rng.between(1, kMaxWordLength);
    for (std::size_t i = 0; i < len; ++i) t.word.push_back(rng.below(m.generator_count()));
    a.terms.push_back(std::move(t));
  }
  return a;
}

template <class K> Matrix<K> evaluate(const FpModule<K>& m, const AlgebraElement& a) {
  Matrix<K> r(m.domain(), m.dim(), m.dim());
  for (const auto& t : a.terms) r = r + m.word(t.word).scaled(t.coeff);
  return r;
}

// ---------------------------------------------------------------------------
// Norton's irreducibility test

enum class Verdict { irreducible, reducible, budget_exhausted };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::irreducible: return "irreducible";
  case Verdict::reducible: return "reducible";
  case Verdict::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

/// Data proving irreducibility: for theta in the group algebra and an
/// irreducible factor p of its characteristic polynomial with
/// dim ker p(theta) = deg p, a null vector spins to the whole module and a
/// null vector of p(theta)^T spins to the whole dual.
template <class K> struct NortonWitness {
  AlgebraElement theta;
  std::vector<elem_t> factor; // coefficients of p, low to high
  std::size_t nullity = 0;
  Vec<K> null_vector;
  Vec<K> dual_vector;
  std::size_t spin_dim = 0;
  std::size_t dual_spin_dim = 0;
};

/// A vector whose spin is a proper nonzero subspace. With `dual` set the
/// vector lives in the dual module, and the submodule of M is its
/// annihilator, of dimension dim(M) - spin_dim.
template <class K> struct ReducibleWitness {
  Vec<K> vector;
  bool dual = false;
  std::size_t spin_dim = 0;
  std::size_t submodule_dim = 0;
};

template <class K> struct IrreducibilityCertificate {
  Verdict verdict = Verdict::budget_exhausted;
  std::optional<NortonWitness<K>> norton;
  std::optional<ReducibleWitness<K>> reducible;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;
};

namespace detail {

// Largest factor degree whose monic candidates number at most 4096.
inline unsigned max_factor_degree(std::uint64_t order, std::size_t dim) {
  unsigned d = 0;
  std::uint64_t count = 1;
  while (d < dim && count * order <= 4096) {
    count *= order;
    ++d;
  }
  return std::max(d, 1u);
}

} // namespace detail

template <class K>
IrreducibilityCertificate<K> is_irreducible(const FpModule<K>& m, std::uint64_t seed = 0,
                                            std::size_t budget = kDefaultBudget) {
  const K k = m.domain();
  const std::size_t d = m.dim();
  IrreducibilityCertificate<K> cert;
  cert.seed = seed;

  if (d == 1) {
    cert.verdict = Verdict::irreducible;
    NortonWitness<K> w{{}, {0, 1}, 1, linalg::unit_vector(k, 1, 0), linalg::unit_vector(k, 1, 0), 1, 1};
    cert.norton = std::move(w);
    return cert;
  }

  const auto irreducibles = linalg::irreducibles_up_to(k, detail::max_factor_degree(k.order(), d));
  const FpModule<K> dual = m.transposed();
  Rng rng(seed);

  for (std::size_t attempt = 1; attempt <= budget; ++attempt) {
    cert.attempts = attempt;
    AlgebraElement theta = random_algebra_element(m, rng);
    const Matrix<K> t = evaluate(m, theta);
    const linalg::Poly<K> chi = linalg::charpoly(t);
    for (std::size_t deg = 1; deg < irreducibles.size(); ++deg)
      for (const auto& p : irreducibles[deg]) {
        if (!(chi % p).is_zero()) continue;
        const Matrix<K> pt = p.eval(t);
        const auto null = linalg::left_nullspace(pt);
        const SpinResult<K> s = spin(null.front(), m.actions());
        if (s.dim() < d) {
          cert.verdict = Verdict::reducible;
          cert.reducible = ReducibleWitness<K>{null.front(), false, s.dim(), s.dim()};
          return cert;
        }
        if (null.size() != deg) continue; // the factor repeats; try another
        const auto dual_null = linalg::left_nullspace(pt.transpose());
        const SpinResult<K> ds = spin(dual_null.front(), dual.actions());
        if (ds.dim() < d) {
          cert.verdict = Verdict::reducible;
          cert.reducible = ReducibleWitness<K>{dual_null.front(), true, ds.dim(), d - ds.dim()};
          return cert;
        }
        cert.verdict = Verdict::irreducible;
        cert.norton =
            NortonWitness<K>{std::move(theta), p.coeffs(), null.size(), null.front(), dual_null.front(), s.dim(),
                             ds.dim()};
        return cert;
      }
  }
  cert.verdict = Verdict::budget_exhausted;
  return cert;
}

/// Re-derive the spin dimensions recorded in a certificate with a fresh
/// spin pass. Returns true when everything recorded checks out.
template <class K> bool reverify(const FpModule<K>& m, const IrreducibilityCertificate<K>& c) {
  if (c.verdict == Verdict::reducible) {
    const auto& w = *c.reducible;
    const auto gens = w.dual ? m.transposed().actions() : m.actions();
    const std::size_t got = spin(w.vector, gens).dim();
    return got == w.spin_dim && got > 0 && got < m.dim() &&
           w.submodule_dim == (w.dual ? m.dim() - got : got);
  }
  if (c.verdict == Verdict::irreducible) {
    const auto& w = *c.norton;
    if (m.dim() == 1) return true;
    const linalg::Poly<K> p(m.domain(), w.factor);
    const Matrix<K> pt = p.eval(evaluate(m, w.theta));
    if (!(w.null_vector * pt).is_zero() || w.null_vector.is_zero()) return false;
    if (!(w.dual_vector * pt.transpose()).is_zero() || w.dual_vector.is_zero()) return false;
    if (linalg::left_nullspace(pt).size() != static_cast<std::size_t>(p.degree())) return false;
    return spin(w.null_vector, m.actions()).dim() == m.dim() &&
           spin(w.dual_vector, m.transposed().actions()).dim() == m.dim();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Endomorphisms

/// dim End(M) by solving X*A = A*X for every generator A, as a linear
/// system in the d^2 entries of X.
template <class K> std::size_t commutant_dimension(const FpModule<K>& m) {
  const K k = m.domain();
  const std::size_t d = m.dim();
  linalg::EchelonBasis<K> eqs(k, d * d);
  for (const auto& a : m.actions()) {
    const Matrix<K> at = a.transpose();
    for (std::size_t i = 0; i < d && eqs.dim() < d * d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        // (A X)_ij + (X A)_ij = sum_k A_ik X_kj + X_ik A_kj
        Vec<K> row(k, d * d);
        a.row(i).for_each_nonzero([&](std::size_t kk, elem_t s) { row.set(kk * d + j, row.get(kk * d + j) ^ s); });
        at.row(j).for_each_nonzero([&](std::size_t kk, elem_t s) { row.set(i * d + kk, row.get(i * d + kk) ^ s); });
        eqs.insert(std::move(row));
      }
  }
  return d * d - eqs.dim();
}

enum class AbsoluteVerdict { absolutely_irreducible, not_absolutely_irreducible, reducible, inconclusive };

inline const char* to_string(AbsoluteVerdict v) {
  switch (v) {
  case AbsoluteVerdict::absolutely_irreducible: return "absolutely-irreducible";
  case AbsoluteVerdict::not_absolutely_irreducible: return "irreducible-not-absolutely";
  case AbsoluteVerdict::reducible: return "reducible";
  case AbsoluteVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

template <class K> struct AbsoluteIrreducibility {
  AbsoluteVerdict verdict = AbsoluteVerdict::inconclusive;
  std::size_t endomorphism_degree = 0; // e = dim End(M) over the base field
  std::size_t nullity = 0;             // dim ker p(theta) of the Norton witness
  std::optional<std::size_t> commutant_dim;
  IrreducibilityCertificate<K> irreducibility;
};

inline constexpr std::size_t kCommutantCrossCheckLimit = 64;

/// Endomorphism degree of an irreducible module from its Norton witness.
///
/// Every endomorphism c commutes with p(theta), so v*c lies in
/// N = ker p(theta) for the witness null vector v; since v generates M, c is
/// fixed by v*c. Thus End(M) is the subspace of w in N for which the rule
/// (v*word -> w*word) along v's spin tree is a well-defined module map.
/// That condition is linear in w and is solved on a basis of N.
template <class K> std::size_t endomorphism_degree(const FpModule<K>& m, const NortonWitness<K>& w) {
  const K k = m.domain();
  const std::size_t d = m.dim();
  if (d == 1) return 1;
  const linalg::Poly<K> p(k, w.factor);
  const auto null = linalg::left_nullspace(p.eval(evaluate(m, w.theta)));
  const SpinResult<K> s = spin(w.null_vector, m.actions());
  if (s.dim() != d) throw std::logic_error("witness vector does not generate the module");
  const Matrix<K> binv = linalg::inverse(Matrix<K>(k, d, s.basis));

  const std::size_t g = m.generator_count();
  linalg::EchelonBasis<K> defects(k, d * d * g);
  for (const auto& n : null) {
    std::vector<Vec<K>> images{n};
    for (std::size_t i = 1; i < d; ++i) images.push_back(images[s.tree[i].first] * m.action(s.tree[i].second));
    const Matrix<K> phi = binv * Matrix<K>(k, d, std::move(images));
    Vec<K> defect(k, d * d * g);
    for (std::size_t gi = 0; gi < g; ++gi) {
      const Matrix<K> c = m.action(gi) * phi + phi * m.action(gi);
      for (std::size_t r = 0; r < d; ++r)
        c.row(r).for_each_nonzero([&](std::size_t col, elem_t x) { defect.set((gi * d + r) * d + col, x); });
    }
    defects.insert(std::move(defect));
  }
  return null.size() - defects.dim();
}

template <class K>
AbsoluteIrreducibility<K> is_absolutely_irreducible(const FpModule<K>& m, std::uint64_t seed = 0,
                                                    std::size_t budget = kDefaultBudget) {
  AbsoluteIrreducibility<K> out;
  out.irreducibility = is_irreducible(m, seed, budget);
  if (out.irreducibility.verdict == Verdict::reducible) {
    out.verdict = AbsoluteVerdict::reducible;
    return out;
  }
  if (out.irreducibility.verdict == Verdict::budget_exhausted) {
    out.verdict = AbsoluteVerdict::inconclusive;
    return out;
  }
  const auto& w = *out.irreducibility.norton;
  out.nullity = w.nullity;
  out.endomorphism_degree = endomorphism_degree(m, w);
  if (m.dim() <= kCommutantCrossCheckLimit) {
    out.commutant_dim = commutant_dimension(m);
    if (*out.commutant_dim != out.endomorphism_degree)
      throw std::logic_error("commutant solve disagrees with the witness endomorphism degree");
  }
  out.verdict = out.endomorphism_degree == 1 ? AbsoluteVerdict::absolutely_irreducible
                                             : AbsoluteVerdict::not_absolutely_irreducible;
  return out;
}

// ---------------------------------------------------------------------------
// St_2 and Frobenius twists

/// The 8-dimensional traceless adjoint module of SU_3(q) over GF(q^2), in
/// row convention (transposes of the column-convention adjoint matrices).
inline GfQModule st2_module(std::uint64_t q) {
  if (q != 4 && q != 8) throw domain_error("st2_module supports q in {4, 8}");
  const GeneratorSet gs = su3_generators(q);
  std::vector<Matrix<GfQ>> acts;
  for (const auto& a : adjoint_module_matrices(gs)) acts.push_back(a.transpose());
  return GfQModule(GfQ(Tower::get(q).ext()), 8, std::move(acts));
}

/// Entrywise x -> x^(2^i).
inline Matrix<GfQ> frobenius_twist(const Matrix<GfQ>& a, unsigned i) {
  Matrix<GfQ> r = a;
  const Field& f = *a.domain().field;
  for (std::size_t row = 0; row < a.rows(); ++row)
    a.row(row).for_each_nonzero([&](std::size_t col, elem_t x) { r.set(row, col, f.frobenius(x, i)); });
  return r;
}

/// M = sum_{i in S} 2^i.
inline std::uint64_t twist_exponent(const std::set<unsigned>& s) {
  std::uint64_t m = 0;
  for (unsigned i : s) m += std::uint64_t(1) << i;
  return m;
}

/// Trace of the tensor product of the Frobenius twists indexed by S of an
/// operator with trace t0: prod_{i in S} t0^(2^i) = t0^M.
inline FieldElem tensor_trace(const FieldElem& t0, const std::set<unsigned>& s) {
  return t0.pow(twist_exponent(s));
}

struct EscapeResult {
  std::uint64_t exponent = 0;
  std::optional<elem_t> witness; // census value t in GF(q)
  elem_t power = 0;              // t^M for the witness
};

/// A census value t with t^M outside GF(2) = {0, 1}, by exhaustive search.
inline EscapeResult escape_witness(std::uint64_t exponent, std::uint64_t q) {
  if (exponent < 1 || exponent > q - 2) throw domain_error("escape_witness requires 1 <= M <= q-2");
  const TraceCensus census = trace_census(q);
  const Field& f = Tower::get(q).sub();
  EscapeResult r;
  r.exponent = exponent;
  for (elem_t t : census.values) {
    const elem_t v = f.pow(t, exponent);
    if (v != 0 && v != 1) {
      r.witness = t;
      r.power = v;
      break;
    }
  }
  return r;
}

} // namespace ucert

#endif // UCERT_MEATAXE_HPP
