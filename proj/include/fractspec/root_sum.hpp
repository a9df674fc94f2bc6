#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace fractspec {

/// Integer combination of M-th roots of unity,
///   sum_k c_k exp(2 pi i k / M),   k in [0, M).
///
/// The vanishing test is exact. Orders are limited to kMaxOrder because the
/// decision factors M by trial division.
class RootOfUnitySum {
 public:
  static constexpr std::uint64_t kMaxOrder = 1'000'000'000'000ULL;

  explicit RootOfUnitySum(std::uint64_t order);

  /// Adds `count` copies of exp(2 pi i residue / M). Negative residues are
  /// reduced with the nonnegative remainder.
  void add(std::int64_t residue, std::int64_t count = 1);

  std::uint64_t order() const { return order_; }
  const std::map<std::uint64_t, std::int64_t>& coefficients() const { return coeffs_; }

  /// Floating value of the sum (for diagnostics only).
  std::complex<double> value() const;
  bool is_zero() const;

 private:
  std::uint64_t order_;
  std::map<std::uint64_t, std::int64_t> coeffs_;
};

inline bool root_sum_is_zero(const RootOfUnitySum& s) { return s.is_zero(); }

}  // namespace fractspec
