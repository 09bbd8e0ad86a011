#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "oracles.hpp"
#include "ucert/meataxe.hpp"

using namespace ucert;

namespace {

oracle::Mat2 to_mask(const Matrix<Gf2>& m) {
  oracle::Mat2 r(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    m.row(i).for_each_nonzero([&](std::size_t j, elem_t) { r[i] |= 1u << j; });
  return r;
}

std::vector<oracle::Mat2> to_masks(const Gf2Module& m) {
  std::vector<oracle::Mat2> out;
  for (const auto& a : m.actions()) out.push_back(to_mask(a));
  return out;
}

Matrix<Gf2> from_rows(std::size_t d, const std::vector<std::uint32_t>& rows) {
  Matrix<Gf2> m(Gf2{}, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if ((rows[i] >> j) & 1) m.set(i, j, 1);
  return m;
}

const Gf2Module& c3_module() {
  static const Gf2Module m(Gf2{}, 2, {from_rows(2, {0b10, 0b11})}); // [[0,1],[1,1]]
  return m;
}

std::vector<Perm> c7() { return {Perm::cycle(7, {0, 1, 2, 3, 4, 5, 6})}; }
std::vector<Perm> s5() { return {Perm::cycle(5, {0, 1, 2, 3, 4}), Perm::cycle(5, {0, 1})}; }

const QbModule& unital_qb(std::uint64_t q) {
  static std::map<std::uint64_t, std::unique_ptr<QbModule>> cache;
  auto& slot = cache[q];
  if (!slot) {
    const Unital u = enumerate_unital(q);
    const PermGroup g(u.size(), action_on_unital(su3_generators(q), u));
    slot = std::make_unique<QbModule>(qb_module(u.size(), g.generators()));
  }
  return *slot;
}

// Small GF(2) modules for oracle comparisons: dimension <= 8.
std::vector<Gf2Module> small_modules() {
  std::vector<Gf2Module> out;
  out.push_back(c3_module());
  out.push_back(qb_module(7, c7()).module);
  out.push_back(qb_module(5, s5()).module);
  out.push_back(perm_module(5, s5()));
  out.push_back(direct_sum(c3_module(), c3_module()));
  out.push_back(qb_module(8, {Perm::cycle(8, {0, 1, 2, 3, 4, 5, 6, 7}), Perm::cycle(8, {0, 1})}).module);
  out.push_back(perm_module(7, {Perm::cycle(7, {0, 1, 2, 3, 4, 5, 6}), Perm(std::vector<point_t>{0, 2, 4, 6, 1, 3, 5})}));
  out.push_back(qb_module(7, {Perm::cycle(7, {0, 1, 2, 3, 4, 5, 6}), Perm(std::vector<point_t>{0, 2, 4, 6, 1, 3, 5})}).module);
  // PSL(2,7) on 7 points is doubly transitive: Q_B of dimension 6
  out.push_back(qb_module(7, {Perm::cycle(7, {0, 1, 2, 3, 4, 5, 6}), Perm(std::vector<point_t>{0, 2, 4, 6, 1, 3, 5}),
                              Perm(std::vector<point_t>{0, 6, 3, 2, 5, 4, 1})})
                    .module);
  out.push_back(Gf2Module(Gf2{}, 1, {Matrix<Gf2>::identity(Gf2{}, 1)}));
  return out;
}

} // namespace

TEST(FpModule, RejectsSingularActions) {
  EXPECT_THROW(Gf2Module(Gf2{}, 2, {from_rows(2, {0b01, 0b01})}), domain_error);
  EXPECT_THROW(Gf2Module(Gf2{}, 2, {Matrix<Gf2>::identity(Gf2{}, 3)}), std::invalid_argument);
}

TEST(FpModule, WordsAreHomomorphic) {
  const QbModule& qb = unital_qb(4);
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::size_t> w1, w2;
    for (std::size_t k = 0, l = 1 + rng.below(4); k < l; ++k) w1.push_back(rng.below(qb.module.generator_count()));
    for (std::size_t k = 0, l = 1 + rng.below(4); k < l; ++k) w2.push_back(rng.below(qb.module.generator_count()));
    std::vector<std::size_t> w12 = w1;
    w12.insert(w12.end(), w2.begin(), w2.end());
    ASSERT_EQ(qb.module.word(w12), qb.module.word(w1) * qb.module.word(w2));
  }
}

TEST(QbModule, ConstructionMatchesRestrictionOfPermModule) {
  // v_b = e_b + e_0 in F_2^B; s*v_b must equal the image computed in F_2^B
  const auto gens = s5();
  const auto qb = qb_module(5, gens);
  const auto pm = perm_module(5, gens);
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (point_t b = 1; b < 5; ++b) {
      Vec<Gf2> vb(Gf2{}, 5);
      vb.set(b, 1);
      vb.set(0, 1);
      const Vec<Gf2> img = vb * pm.action(g);
      // express img in the v basis: coordinate c-1 for c != 0 is img[c]
      const Vec<Gf2> row = qb.module.action(g).row(b - 1);
      for (point_t c = 1; c < 5; ++c) ASSERT_EQ(row.get(c - 1), img.get(c));
    }
  EXPECT_TRUE(qb.complement_splits);
  EXPECT_FALSE(qb_module(8, {Perm::cycle(8, {0, 1, 2, 3, 4, 5, 6, 7})}).complement_splits);
}

TEST(QbModule, Dimensions) {
  EXPECT_EQ(qb_module(7, c7()).module.dim(), 6u);
  EXPECT_EQ(unital_qb(4).module.dim(), 64u);
  EXPECT_TRUE(unital_qb(4).complement_splits);
  EXPECT_TRUE(all_ones_outside_hyperplane(65));
  EXPECT_FALSE(all_ones_outside_hyperplane(64));
}

TEST(IsIrreducible, AgreesWithExhaustiveSpinOracle) {
  for (const auto& m : small_modules()) {
    const bool truth = oracle::exhaustive_irreducible(to_masks(m), int(m.dim()));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto c = is_irreducible(m, seed);
      ASSERT_NE(c.verdict, Verdict::budget_exhausted) << "dim " << m.dim();
      EXPECT_EQ(c.verdict == Verdict::irreducible, truth) << "dim " << m.dim() << " seed " << seed;
      EXPECT_TRUE(reverify(m, c));
      if (c.reducible) {
        const auto dims = oracle::submodule_dims(to_masks(m), int(m.dim()));
        EXPECT_TRUE(dims.count(c.reducible->submodule_dim) || c.reducible->dual) << c.reducible->submodule_dim;
      }
    }
  }
}

TEST(IsIrreducible, C7RegularHasThreeDimensionalWitness) {
  const auto m = qb_module(7, c7()).module;
  // x^7 - 1 = (x - 1)(x^3 + x + 1)(x^3 + x^2 + 1): proper submodules of Q_B have dimension 3
  const auto dims = oracle::submodule_dims(to_masks(m), 6);
  EXPECT_EQ(dims, (std::set<std::size_t>{3, 6}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = is_irreducible(m, seed);
    ASSERT_EQ(c.verdict, Verdict::reducible);
    EXPECT_EQ(c.reducible->submodule_dim, 3u);
    EXPECT_TRUE(reverify(m, c));
  }
}

TEST(IsIrreducible, DirectSumIsReducible) {
  for (const auto& m : {qb_module(5, s5()).module, unital_qb(4).module}) {
    const auto mm = direct_sum(m, m);
    const auto c = is_irreducible(mm, 0);
    EXPECT_EQ(c.verdict, Verdict::reducible);
    EXPECT_TRUE(reverify(mm, c));
  }
  const auto st = st2_module(4);
  EXPECT_EQ(is_irreducible(direct_sum(st, st), 0).verdict, Verdict::reducible);
}

TEST(IsIrreducible, BudgetExhaustionIsReported) {
  const auto c = is_irreducible(qb_module(5, s5()).module, 0, 0);
  EXPECT_EQ(c.verdict, Verdict::budget_exhausted);
  EXPECT_FALSE(c.norton.has_value());
  const auto a = is_absolutely_irreducible(qb_module(5, s5()).module, 0, 0);
  EXPECT_EQ(a.verdict, AbsoluteVerdict::inconclusive);
}

TEST(AbsoluteIrreducibility, C3OrderThreeMatrix) {
  // commutant of [[0,1],[1,1]] over GF(2) has 4 elements: dimension 2
  EXPECT_EQ(oracle::commutant_count(to_masks(c3_module()), 2), 4u);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = is_absolutely_irreducible(c3_module(), seed);
    EXPECT_EQ(a.verdict, AbsoluteVerdict::not_absolutely_irreducible);
    EXPECT_EQ(a.endomorphism_degree, 2u);
    EXPECT_EQ(a.commutant_dim, 2u);
  }
}

TEST(AbsoluteIrreducibility, TrivialModule) {
  const Gf2Module m(Gf2{}, 1, {Matrix<Gf2>::identity(Gf2{}, 1)});
  const auto a = is_absolutely_irreducible(m, 0);
  EXPECT_EQ(a.verdict, AbsoluteVerdict::absolutely_irreducible);
  EXPECT_EQ(a.endomorphism_degree, 1u);
}

TEST(AbsoluteIrreducibility, CommutantAgreesOnSmallModules) {
  for (const auto& m : small_modules()) {
    const std::size_t d = m.dim();
    const std::size_t commutant = commutant_dimension(m);
    if (d <= 4) {
      std::size_t count = oracle::commutant_count(to_masks(m), int(d));
      std::size_t lg = 0;
      while ((std::size_t(1) << lg) < count) ++lg;
      EXPECT_EQ(commutant, lg) << "dim " << d;
    }
    const auto a = is_absolutely_irreducible(m, 0);
    if (a.verdict == AbsoluteVerdict::absolutely_irreducible ||
        a.verdict == AbsoluteVerdict::not_absolutely_irreducible) {
      EXPECT_EQ(a.endomorphism_degree, commutant);
    }
  }
}

TEST(AbsoluteIrreducibility, ExtensionOfScalarsOverGF4) {
  // The C3 module over GF(4) splits into two eigenlines.
  const GfQ k(Field::conway(2));
  Matrix<GfQ> m(k, 2, 2);
  m.set(0, 1, 1);
  m.set(1, 0, 1);
  m.set(1, 1, 1);
  const GfQModule mod(k, 2, {m});
  EXPECT_EQ(is_irreducible(mod, 0).verdict, Verdict::reducible);
  EXPECT_EQ(commutant_dimension(mod), 2u);
}

TEST(AbsoluteIrreducibility, S5StandardModule) {
  const auto m = qb_module(5, s5()).module;
  EXPECT_TRUE(oracle::exhaustive_irreducible(to_masks(m), 4));
  const auto a = is_absolutely_irreducible(m, 0);
  EXPECT_EQ(a.verdict, AbsoluteVerdict::absolutely_irreducible);
  EXPECT_EQ(oracle::commutant_count(to_masks(m), 4), 2u);
}

class UnitalQb : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(UnitalQb, AbsolutelyIrreducibleForFiveSeeds) {
  const auto& qb = unital_qb(GetParam());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = is_absolutely_irreducible(qb.module, seed);
    EXPECT_EQ(a.verdict, AbsoluteVerdict::absolutely_irreducible) << "seed " << seed;
    EXPECT_EQ(a.endomorphism_degree, 1u);
    EXPECT_TRUE(reverify(qb.module, a.irreducibility));
    if (qb.module.dim() <= kCommutantCrossCheckLimit) {
      EXPECT_EQ(a.commutant_dim, 1u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Desk, UnitalQb, ::testing::Values(4ull, 8ull));

class St2 : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(St2, AbsolutelyIrreducible) {
  const auto m = st2_module(GetParam());
  EXPECT_EQ(m.dim(), 8u);
  EXPECT_EQ(m.domain().order(), GetParam() * GetParam());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = is_absolutely_irreducible(m, seed);
    EXPECT_EQ(a.verdict, AbsoluteVerdict::absolutely_irreducible);
    EXPECT_EQ(a.commutant_dim, 1u);
    EXPECT_TRUE(reverify(m, a.irreducibility));
  }
}

INSTANTIATE_TEST_SUITE_P(Desk, St2, ::testing::Values(4ull, 8ull));

TEST(St2, UnsupportedQ) { EXPECT_THROW(st2_module(16), domain_error); }

TEST(TensorTrace, Examples) {
  const Tower& t = Tower::get(8);
  for (elem_t v = 0; v < 64; ++v) {
    const FieldElem d = t.ext_elem(v);
    EXPECT_EQ(tensor_trace(d, {0}), d);
    EXPECT_EQ(tensor_trace(d, {0, 1}), d * d * d);
    EXPECT_EQ(tensor_trace(d, {0, 2}), tensor_trace(d, {0}) * tensor_trace(d, {2}));
    EXPECT_EQ(tensor_trace(d, {0, 1, 2}), tensor_trace(d, {1}) * tensor_trace(d, {0, 2}));
  }
  EXPECT_EQ(twist_exponent({0, 1, 2}), 7u);
}

TEST(TensorTrace, KroneckerCrossCheck) {
  const GeneratorSet gs = su3_generators(8);
  const Tower& t = Tower::get(8);
  Rng rng(2024);
  for (int i = 0; i < 10; ++i) {
    Mat3 u = Mat3::identity(t);
    for (int k = 0; k < 6; ++k) u = u * gs.generators[rng.below(gs.generators.size())];
    const auto a = adjoint_matrix(u);
    const auto kron = linalg::kronecker(a, frobenius_twist(a, 1));
    const FieldElem t0 = t.ext_elem(a.trace());
    EXPECT_EQ(t.ext_elem(kron.trace()), tensor_trace(t0, {0, 1}));
    EXPECT_EQ(t.ext_elem(kron.trace()), t0.pow(3));
  }
}

TEST(EscapeWitness, Q8AllExponents) {
  const Field& f = Tower::get(8).sub();
  for (std::uint64_t M = 1; M <= 6; ++M) {
    const auto e = escape_witness(M, 8);
    ASSERT_TRUE(e.witness.has_value()) << M;
    EXPECT_EQ(f.pow(*e.witness, M), e.power);
    EXPECT_GT(e.power, 1u);
  }
}

TEST(EscapeWitness, Q4FailsAtM1) {
  EXPECT_FALSE(escape_witness(1, 4).witness.has_value());
  EXPECT_THROW(escape_witness(3, 4), domain_error);
  EXPECT_THROW(escape_witness(7, 8), domain_error);
  EXPECT_THROW(escape_witness(0, 8), domain_error);
}

TEST(EscapeWitness, Q16AllExponents) {
  for (std::uint64_t M = 1; M <= 14; ++M) EXPECT_TRUE(escape_witness(M, 16).witness.has_value()) << M;
}
