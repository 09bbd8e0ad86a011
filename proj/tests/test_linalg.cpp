#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ucert/linalg.hpp"
#include "ucert/random.hpp"

using namespace ucert;
using namespace ucert::linalg;

namespace {

template <class K> Matrix<K> random_matrix(K k, std::size_t r, std::size_t c, Rng& rng) {
  Matrix<K> m(k, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, elem_t(rng.below(k.order())));
  return m;
}

template <class K> std::vector<std::vector<std::uint32_t>> to_rows(const Matrix<K>& m) {
  std::vector<std::vector<std::uint32_t>> r(m.rows(), std::vector<std::uint32_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m.at(i, j);
  return r;
}

// Naive triple-loop product.
template <class K> Matrix<K> naive_mul(const Matrix<K>& a, const Matrix<K>& b) {
  const K k = a.domain();
  Matrix<K> r(k, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      elem_t s = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) s ^= k.mul(a.at(i, l), b.at(l, j));
      r.set(i, j, s);
    }
  return r;
}

} // namespace

TEST(Vec, Gf2BitPacking) {
  Vec<Gf2> v(Gf2{}, 130);
  v.set(0, 1);
  v.set(64, 1);
  v.flip(129);
  EXPECT_EQ(v.weight(), 3u);
  EXPECT_EQ(v.next_nonzero(1), 64u);
  EXPECT_EQ(v.next_nonzero(65), 129u);
  EXPECT_EQ(v.next_nonzero(130), npos);
  const auto s = slice(v, 60, 10);
  EXPECT_EQ(s.next_nonzero(0), 4u);
  const auto c = concat(v, s);
  EXPECT_EQ(c.size(), 140u);
  EXPECT_EQ(c.weight(), 4u);
}

TEST(Matrix, ProductMatchesNaive) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(Gf2{}, 70, 90, rng), b = random_matrix(Gf2{}, 90, 65, rng);
    ASSERT_EQ(a * b, naive_mul(a, b));
    const GfQ k(Field::conway(4));
    const auto c = random_matrix(k, 9, 7, rng), d = random_matrix(k, 7, 5, rng);
    ASSERT_EQ(c * d, naive_mul(c, d));
    ASSERT_EQ((c * d).transpose(), d.transpose() * c.transpose());
  }
}

TEST(Matrix, KroneckerMixedProduct) {
  Rng rng(2);
  const GfQ k(Field::conway(6));
  const auto a = random_matrix(k, 3, 3, rng), b = random_matrix(k, 2, 2, rng);
  const auto c = random_matrix(k, 3, 3, rng), d = random_matrix(k, 2, 2, rng);
  EXPECT_EQ(kronecker(a, b) * kronecker(c, d), kronecker(a * c, b * d));
  EXPECT_EQ(kronecker(a, b).trace(), k.mul(a.trace(), b.trace()));
}

TEST(Rank, NullspaceAndInverse) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_matrix(Gf2{}, 40, 40, rng);
    // force a dependency
    a.row(7) = a.row(3);
    a.row(7).add_scaled(a.row(5), 1);
    const auto null = left_nullspace(a);
    EXPECT_EQ(rank(a) + null.size(), 40u);
    for (const auto& v : null) EXPECT_TRUE((v * a).is_zero());
    EXPECT_THROW(inverse(a), domain_error);
  }
  const GfQ k(Field::conway(8));
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_matrix(k, 12, 12, rng);
    if (rank(a) < 12) continue;
    EXPECT_TRUE((a * inverse(a)).is_identity());
    EXPECT_TRUE((inverse(a) * a).is_identity());
  }
}

TEST(Charpoly, MatchesLeibnizOracle) {
  Rng rng(4);
  for (unsigned deg : {1u, 2u, 4u}) {
    const Field& f = Field::conway(deg == 1 ? 2 : deg);
    const oracle::SmallField o{f.modulus(), int(f.degree())};
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + rng.below(6);
      if (deg == 1) {
        const auto a = random_matrix(Gf2{}, n, n, rng);
        const oracle::SmallField f2{0b11, 1};
        const auto want = oracle::charpoly_leibniz(f2, to_rows(a));
        EXPECT_EQ(charpoly(a).coeffs(), std::vector<elem_t>(want.begin(), want.end()));
      } else {
        const GfQ k(f);
        const auto a = random_matrix(k, n, n, rng);
        const auto want = oracle::charpoly_leibniz(o, to_rows(a));
        EXPECT_EQ(charpoly(a).coeffs(), std::vector<elem_t>(want.begin(), want.end()));
      }
    }
  }
}

TEST(Charpoly, CayleyHamiltonLarge) {
  Rng rng(5);
  const auto a = random_matrix(Gf2{}, 100, 100, rng);
  const auto p = charpoly(a);
  EXPECT_EQ(p.degree(), 100);
  EXPECT_EQ(p.eval(a), Matrix<Gf2>(Gf2{}, 100, 100));
}

TEST(Poly, Arithmetic) {
  const Gf2 k;
  const Poly<Gf2> x7m1(k, {1, 0, 0, 0, 0, 0, 0, 1});
  const Poly<Gf2> a(k, {1, 1}), b(k, {1, 1, 0, 1}), c(k, {1, 0, 1, 1});
  EXPECT_EQ(a * b * c, x7m1);
  EXPECT_TRUE((x7m1 % b).is_zero());
  EXPECT_EQ((x7m1 + x7m1).degree(), -1);
}

TEST(Irreducibles, CountsMatchNecklaceFormula) {
  // number of monic irreducibles of degree d over GF(Q): (1/d) sum_{e|d} mu(d/e) Q^e
  auto mobius = [](unsigned n) {
    int m = 1;
    for (unsigned p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    return n > 1 ? -m : m;
  };
  auto count = [&](std::uint64_t Q, unsigned d) {
    long long s = 0;
    for (unsigned e = 1; e <= d; ++e)
      if (d % e == 0) {
        long long pw = 1;
        for (unsigned i = 0; i < e; ++i) pw *= static_cast<long long>(Q);
        s += mobius(d / e) * pw;
      }
    return static_cast<std::size_t>(s / d);
  };
  const auto g2 = irreducibles_up_to(Gf2{}, 10);
  for (unsigned d = 1; d <= 10; ++d) EXPECT_EQ(g2[d].size(), count(2, d)) << d;
  const auto g16 = irreducibles_up_to(GfQ(Field::conway(4)), 3);
  for (unsigned d = 1; d <= 3; ++d) EXPECT_EQ(g16[d].size(), count(16, d)) << d;
  // and each is irreducible by the bitmask oracle over GF(2)
  for (unsigned d = 1; d <= 10; ++d)
    for (const auto& p : g2[d]) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < p.coeffs().size(); ++i) mask |= std::uint64_t(p.coeff(i)) << i;
      ASSERT_TRUE(oracle::irreducible(mask));
    }
}
