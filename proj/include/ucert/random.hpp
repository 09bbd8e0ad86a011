#ifndef UCERT_RANDOM_HPP
#define UCERT_RANDOM_HPP

#include <cstdint>
#include <random>

namespace ucert {

/// std::mt19937_64 with integer sampling done by rejection on raw 64-bit
/// outputs. The standard distributions are implementation-defined, so they
/// are avoided to keep certificates identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

private:
  std::mt19937_64 eng_;
};

} // namespace ucert

#endif // UCERT_RANDOM_HPP
