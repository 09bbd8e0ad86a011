#ifndef UCERT_PERM_HPP
#define UCERT_PERM_HPP

// Permutations, deterministic Schreier-Sims, and the orbit/stabilizer
// queries used to establish (double) transitivity.
//
// Permutations act on the right: i^(pq) = (i^p)^q, so p * q means "first p,
// then q". This matches the row-vector convention of the module code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ucert/hermitian.hpp"
#include "ucert/unitary.hpp"

namespace ucert {

using point_t = std::uint32_t;
using big_int = boost::multiprecision::cpp_int;

class Perm {
public:
  Perm() = default;
  explicit Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), point_t(0)); }
  explicit Perm(std::vector<point_t> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (point_t x : img_) {
      if (x >= img_.size() || seen[x]) throw std::invalid_argument("images do not form a bijection");
      seen[x] = 1;
    }
  }

  /// The cycle (c0 c1 ... ck) on n points.
  static Perm cycle(std::size_t n, const std::vector<point_t>& c) {
    Perm p(n);
    for (std::size_t i = 0; i < c.size(); ++i) p.img_.at(c[i]) = c[(i + 1) % c.size()];
    return Perm(p.img_);
  }

  std::size_t degree() const { return img_.size(); }
  point_t operator()(point_t i) const { return img_[i]; }
  const std::vector<point_t>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  /// Smallest moved point, or degree() if none.
  std::size_t first_moved() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return i;
    return img_.size();
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<point_t>(i);
    return r;
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch");
    Perm r;
    r.img_.resize(a.img_.size());
    for (std::size_t i = 0; i < a.img_.size(); ++i) r.img_[i] = b.img_[a.img_[i]];
    return r;
  }
  friend bool operator==(const Perm& a, const Perm& b) { return a.img_ == b.img_; }

private:
  std::vector<point_t> img_;
};

namespace detail {

// One level of a stabilizer chain: the base point, the strong generators
// fixing all earlier base points, and the basic orbit with inverse
// transversal elements (inv_trans[k] maps orbit[k] back to base).
struct ChainLevel {
  point_t base = 0;
  std::vector<std::size_t> gens;
  std::vector<point_t> orbit;
  std::vector<std::int64_t> pos; // point -> index in orbit, or -1
  std::vector<Perm> inv_trans;
};

// Incremental deterministic Schreier-Sims. After every add() the chain is
// complete for the group generated so far.
class ChainBuilder {
public:
  explicit ChainBuilder(std::size_t n, std::vector<point_t> base_prefix = {}) : n_(n) {
    for (point_t b : base_prefix) push_level(b);
  }

  std::size_t degree() const { return n_; }

  /// Returns false when g already lies in the group.
  bool add(const Perm& g) {
    if (g.degree() != n_) throw std::invalid_argument("generator degree mismatch");
    auto [h, j] = strip(g, 0);
    if (j == levels_.size() && h.is_identity()) return false;
    absorb(std::move(h), 0, j);
    complete(j);
    return true;
  }

  std::pair<Perm, std::size_t> strip(Perm h, std::size_t from) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      const auto& L = levels_[i];
      const std::int64_t k = L.pos[h(L.base)];
      if (k < 0) return {std::move(h), i};
      h = h * L.inv_trans[k];
    }
    return {std::move(h), levels_.size()};
  }

  std::vector<ChainLevel>& levels() { return levels_; }
  std::vector<Perm>& strong() { return strong_; }

private:
  void push_level(point_t b) {
    ChainLevel L;
    L.base = b;
    levels_.push_back(std::move(L));
    rebuild_orbit(levels_.size() - 1);
  }

  // Record h as a strong generator on levels [from, to]; h fixes the base
  // points of levels < to. Adds a new base point if to == depth.
  void absorb(Perm h, std::size_t from, std::size_t to) {
    if (to == levels_.size()) {
      const std::size_t moved = h.first_moved();
      if (moved == n_) throw std::logic_error("absorbing the identity");
      push_level(static_cast<point_t>(moved));
    }
    strong_.push_back(std::move(h));
    for (std::size_t l = from; l <= to; ++l) {
      levels_[l].gens.push_back(strong_.size() - 1);
      rebuild_orbit(l);
    }
  }

  void rebuild_orbit(std::size_t l) {
    auto& L = levels_[l];
    L.orbit.assign(1, L.base);
    L.pos.assign(n_, -1);
    L.pos[L.base] = 0;
    L.inv_trans.assign(1, Perm(n_));
    for (std::size_t k = 0; k < L.orbit.size(); ++k) {
      for (std::size_t gi : L.gens) {
        const Perm& x = strong_[gi];
        const point_t img = x(L.orbit[k]);
        if (L.pos[img] >= 0) continue;
        L.pos[img] = static_cast<std::int64_t>(L.orbit.size());
        L.orbit.push_back(img);
        // u_img = u_k * x, so u_img^-1 = x^-1 * u_k^-1
        L.inv_trans.push_back(x.inverse() * L.inv_trans[k]);
      }
    }
  }

  // Make levels [0, start] complete, assuming deeper levels already are.
  void complete(std::size_t start) {
    std::size_t i = std::min(start, levels_.size() - 1) + 1;
    while (i-- > 0) {
      bool restarted = false;
      auto& L = levels_[i];
      for (std::size_t k = 0; !restarted && k < L.orbit.size(); ++k) {
        const Perm u = L.inv_trans[k].inverse();
        for (std::size_t g = 0; g < L.gens.size(); ++g) {
          const Perm& x = strong_[L.gens[g]];
          const Perm ux = u * x;
          const std::int64_t t = L.pos[ux(L.base)];
          Perm schreier = ux * L.inv_trans[t];
          if (schreier.is_identity()) continue;
          auto [h, j] = strip(std::move(schreier), i + 1);
          if (j == levels_.size() && h.is_identity()) continue;
          absorb(std::move(h), i + 1, j);
          i = j + 1; // resume at the deepest modified level
          restarted = true;
          break;
        }
      }
      (void)restarted;
    }
  }

  std::size_t n_;
  std::vector<ChainLevel> levels_;
  std::vector<Perm> strong_;
};

} // namespace detail

/// A permutation group with a complete base and strong generating set.
/// Built by deterministic Schreier-Sims; base points are the smallest
/// moved points of the sifted residues. Immutable after construction.
class PermGroup {
public:
  explicit PermGroup(std::size_t degree, const std::vector<Perm>& gens = {},
                     std::vector<point_t> base_prefix = {})
      : degree_(degree) {
    detail::ChainBuilder b(degree, std::move(base_prefix));
    for (const auto& g : gens)
      if (b.add(g)) generators_.push_back(g);
    levels_ = std::move(b.levels());
    strong_ = std::move(b.strong());
    order_ = 1;
    for (const auto& L : levels_) order_ *= L.orbit.size();
  }

  std::size_t degree() const { return degree_; }
  /// The input generators that enlarged the group when added in order.
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<Perm>& strong_generators() const { return strong_; }
  const big_int& order() const { return order_; }

  std::vector<point_t> base() const {
    std::vector<point_t> b;
    for (const auto& L : levels_) b.push_back(L.base);
    return b;
  }
  std::vector<std::size_t> fundamental_orbit_lengths() const {
    std::vector<std::size_t> o;
    for (const auto& L : levels_) o.push_back(L.orbit.size());
    return o;
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) return false;
    Perm h = g;
    for (const auto& L : levels_) {
      const std::int64_t k = L.pos[h(L.base)];
      if (k < 0) return false;
      h = h * L.inv_trans[k];
    }
    return h.is_identity();
  }

  /// Stabilizer-chain property: strong generators of level i fix base
  /// points 0..i-1, and the order is the product of the orbit lengths.
  bool chain_is_consistent() const {
    big_int prod = 1;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      prod *= levels_[i].orbit.size();
      for (std::size_t gi : levels_[i].gens)
        for (std::size_t j = 0; j < i; ++j)
          if (strong_[gi](levels_[j].base) != levels_[j].base) return false;
    }
    for (const auto& g : generators_)
      if (!contains(g)) return false;
    return prod == order_;
  }

private:
  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<detail::ChainLevel> levels_;
  std::vector<Perm> strong_;
  big_int order_;
};

inline PermGroup schreier_sims(std::size_t degree, const std::vector<Perm>& gens) { return PermGroup(degree, gens); }

/// Orbit of b under the given generators, in BFS order.
inline std::vector<point_t> orbit(std::size_t degree, const std::vector<Perm>& gens, point_t b) {
  std::vector<char> seen(degree, 0);
  std::vector<point_t> out{b};
  seen[b] = 1;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      const point_t y = g(out[k]);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  return out;
}

inline bool is_transitive(const PermGroup& g) {
  if (g.degree() == 0) return true;
  return orbit(g.degree(), g.generators(), 0).size() == g.degree();
}

/// Schreier generators of the point stabilizer G_b built from the
/// group's generators, passed one at a time to `sink`. Identity elements
/// are skipped.
template <class Sink> void for_each_stabilizer_generator(const PermGroup& g, point_t b, Sink&& sink) {
  const std::size_t n = g.degree();
  const auto& gens = g.generators();
  std::vector<std::int64_t> pos(n, -1);
  std::vector<point_t> orb{b};
  std::vector<Perm> trans{Perm(n)}; // trans[k] maps b to orb[k]
  pos[b] = 0;
  for (std::size_t k = 0; k < orb.size(); ++k)
    for (const auto& x : gens) {
      const point_t y = x(orb[k]);
      if (pos[y] >= 0) continue;
      pos[y] = static_cast<std::int64_t>(orb.size());
      orb.push_back(y);
      trans.push_back(trans[k] * x);
    }
  for (std::size_t k = 0; k < orb.size(); ++k)
    for (const auto& x : gens) {
      Perm s = trans[k] * x * trans[pos[x(orb[k])]].inverse();
      if (!s.is_identity()) sink(s);
    }
}

/// Sizes of the orbits of G_b on all n points, sorted ascending.
inline std::vector<std::size_t> stabilizer_orbit_sizes(const PermGroup& g, point_t b) {
  const std::size_t n = g.degree();
  if (n < 2) throw domain_error("stabilizer orbits need n >= 2");
  std::vector<point_t> parent(n);
  std::iota(parent.begin(), parent.end(), point_t(0));
  auto find = [&](point_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for_each_stabilizer_generator(g, b, [&](const Perm& s) {
    for (point_t x = 0; x < n; ++x) {
      const point_t a = find(x), c = find(s(x));
      if (a != c) parent[std::max(a, c)] = std::min(a, c);
    }
  });
  std::map<point_t, std::size_t> sizes;
  for (point_t x = 0; x < n; ++x) ++sizes[find(x)];
  std::vector<std::size_t> out;
  for (const auto& [root, size] : sizes) out.push_back(size);
  std::sort(out.begin(), out.end());
  return out;
}

/// #G / #G_b, with #G_b obtained by running Schreier-Sims on the Schreier
/// generators of G_b. Requires G transitive.
inline big_int stabilizer_index(const PermGroup& g, point_t b) {
  if (!is_transitive(g)) throw domain_error("stabilizer_index requires a transitive group");
  detail::ChainBuilder stab(g.degree());
  for_each_stabilizer_generator(g, b, [&](const Perm& s) { stab.add(s); });
  big_int stab_order = 1;
  for (const auto& L : stab.levels()) stab_order *= L.orbit.size();
  if (g.order() % stab_order != 0) throw std::logic_error("stabilizer order does not divide group order");
  return g.order() / stab_order;
}

class action_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Permutation of unital indices induced by A acting on column vectors.
inline Perm perm_of_matrix(const Mat3& a, const Unital& u) {
  if (&a.tower() != &u.tower()) throw level_error("matrix and unital over different towers");
  std::vector<point_t> img(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const ProjLine l(u.tower(), a.apply(u.point(i).rep()));
    const auto j = u.index_of(l);
    if (!j) throw action_error("matrix maps a unital point off the unital");
    img[i] = static_cast<point_t>(*j);
  }
  return Perm(std::move(img));
}

inline std::vector<Perm> action_on_unital(const GeneratorSet& gs, const Unital& u) {
  std::vector<Perm> out;
  out.reserve(gs.generators.size());
  for (const auto& a : gs.generators) {
    if (!is_special_unitary(a)) throw domain_error("generator is not special unitary");
    out.push_back(perm_of_matrix(a, u));
  }
  return out;
}

/// True when the strictly larger group <G, x> certifies x is not in G.
inline bool order_grows(const PermGroup& g, const Perm& x) {
  std::vector<Perm> gens = g.generators();
  gens.push_back(x);
  return PermGroup(g.degree(), gens).order() > g.order();
}

} // namespace ucert

#endif // UCERT_PERM_HPP
