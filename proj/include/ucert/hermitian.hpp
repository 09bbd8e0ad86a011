#ifndef UCERT_HERMITIAN_HPP
#define UCERT_HERMITIAN_HPP

// The Hermitian form x1*conj(y3) + x2*conj(y2) + x3*conj(y1) on GF(q^2)^3,
// projective lines, and the unital: the q^3 + 1 isotropic lines.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ucert/field.hpp"

namespace ucert {

using Vec3 = std::array<FieldElem, 3>;

/// Canonical 3-coordinate serialization, used for ordering lines.
struct RawVec3 {
  std::array<elem_t, 3> c{};
  friend auto operator<=>(const RawVec3&, const RawVec3&) = default;
};

inline Vec3 make_vec3(const Tower& t, elem_t a, elem_t b, elem_t c) {
  return {t.ext_elem(a), t.ext_elem(b), t.ext_elem(c)};
}

inline void require_ext(const Tower& t, const Vec3& v) {
  for (const auto& x : v)
    if (&x.field() != &t.ext()) throw level_error("vector coordinates must lie in GF(q^2)");
}

/// H(x, y) = x1*conj(y3) + x2*conj(y2) + x3*conj(y1).
inline FieldElem herm(const Tower& t, const Vec3& x, const Vec3& y) {
  require_ext(t, x);
  require_ext(t, y);
  return x[0] * t.conjugate(y[2]) + x[1] * t.conjugate(y[1]) + x[2] * t.conjugate(y[0]);
}

/// A point of P^2(GF(q^2)) with its representative scaled so the first
/// nonzero coordinate is 1.
class ProjLine {
public:
  ProjLine(const Tower& t, Vec3 v) : tower_(&t), rep_(std::move(v)) {
    require_ext(t, rep_);
    std::size_t lead = 0;
    while (lead < 3 && rep_[lead].is_zero()) ++lead;
    if (lead == 3) throw domain_error("the zero vector spans no line");
    const FieldElem s = rep_[lead].inverse();
    for (auto& x : rep_) x = x * s;
  }

  const Vec3& rep() const { return rep_; }
  const Tower& tower() const { return *tower_; }
  RawVec3 key() const { return {{rep_[0].value(), rep_[1].value(), rep_[2].value()}}; }

  friend bool operator==(const ProjLine& a, const ProjLine& b) { return a.key() == b.key(); }

private:
  const Tower* tower_;
  Vec3 rep_;
};

/// H(v, v) = 0. Well defined on lines since H(lv, lv) = l*conj(l)*H(v, v).
inline bool is_isotropic(const ProjLine& line) {
  return herm(line.tower(), line.rep(), line.rep()).is_zero();
}

/// The Hermitian unital: isotropic lines sorted by canonical serialization.
class Unital {
public:
  explicit Unital(const Tower& t) : tower_(&t) {
    const elem_t Q = t.ext().size();
    // normalized representatives: (0,0,1), (0,1,c), (1,b,c)
    auto consider = [&](elem_t a, elem_t b, elem_t c) {
      ProjLine l(t, make_vec3(t, a, b, c));
      ++lines_scanned_;
      if (is_isotropic(l)) points_.push_back(l);
    };
    consider(0, 0, 1);
    for (elem_t c = 0; c < Q; ++c) consider(0, 1, c);
    for (elem_t b = 0; b < Q; ++b)
      for (elem_t c = 0; c < Q; ++c) consider(1, b, c);
    std::sort(points_.begin(), points_.end(),
              [](const ProjLine& x, const ProjLine& y) { return x.key() < y.key(); });
    keys_.reserve(points_.size());
    for (const auto& p : points_) keys_.push_back(p.key());
    const std::uint64_t q = t.q();
    if (points_.size() != q * q * q + 1)
      throw std::logic_error("unital size differs from q^3 + 1");
  }

  const Tower& tower() const { return *tower_; }
  std::uint64_t q() const { return tower_->q(); }
  std::size_t size() const { return points_.size(); }
  const ProjLine& point(std::size_t i) const { return points_.at(i); }
  const std::vector<ProjLine>& points() const { return points_; }
  std::uint64_t lines_scanned() const { return lines_scanned_; }

  /// Index of a line in the canonical ordering, if it is on the unital.
  std::optional<std::size_t> index_of(const ProjLine& l) const {
    const RawVec3 k = l.key();
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    if (it == keys_.end() || *it != k) return std::nullopt;
    return static_cast<std::size_t>(it - keys_.begin());
  }

private:
  const Tower* tower_;
  std::vector<ProjLine> points_;
  std::vector<RawVec3> keys_;
  std::uint64_t lines_scanned_ = 0;
};

inline Unital enumerate_unital(std::uint64_t q) { return Unital(Tower::get(q)); }

} // namespace ucert

#endif // UCERT_HERMITIAN_HPP
