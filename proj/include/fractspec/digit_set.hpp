#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fractspec/rational.hpp"
#include "fractspec/root_sum.hpp"
#include "fractspec/zero_set.hpp"

namespace fractspec {

class NotDirectSumError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// One summand scale * {0, 1, ..., length - 1} of a direct-sum decomposition.
struct Block {
  Rational scale;
  long long length;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Finite set of rationals kept strictly increasing. The optional structure
/// records a decomposition as a direct sum of scaled consecutive blocks; it is
/// set by the constructors that know it and is never inferred.
class DigitSet {
 public:
  /// Sorts the elements. Duplicates and the empty set are rejected.
  explicit DigitSet(std::vector<Rational> elements);
  DigitSet(std::vector<Rational> elements, std::vector<Block> structure);

  /// {0, 1, ..., n - 1}
  static DigitSet consecutive(long long n);
  /// scale * {0, 1, ..., n - 1}, structured as one block.
  static DigitSet block(const Rational& scale, long long n);
  static DigitSet from_integers(std::initializer_list<long long> values);

  std::span<const Rational> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const std::optional<std::vector<Block>>& structure() const { return structure_; }

  bool contains(const Rational& x) const;
  bool is_integral() const;
  Rational max_abs() const;

  DigitSet scaled(const Rational& factor) const;
  /// Translation drops the structure (a translate is no longer a sum of blocks at 0).
  DigitSet translated(const Rational& shift) const;

  friend bool operator==(const DigitSet& a, const DigitSet& b) { return a.elements_ == b.elements_; }

 private:
  std::vector<Rational> elements_;
  std::optional<std::vector<Block>> structure_;
};

/// Set of pairwise sums. Throws NotDirectSumError when two pairs share a sum.
DigitSet direct_sum(const DigitSet& a, const DigitSet& b);

/// D_m (+) 2m D_N (+) (1 + m rho - 2Nm) D_2, with its block structure.
DigitSet alternate_digit_set(long long m, long long N, const Rational& rho);

/// Normalized mask (1/#D) sum_d exp(2 pi i d x).
std::complex<double> mask_eval(const DigitSet& d, double x);
/// Same, with each phase d*x reduced modulo 1 exactly before rounding.
std::complex<double> mask_eval(const DigitSet& d, const Rational& x);

/// Unnormalized mask sum at x as an exact root-of-unity sum, or nullopt when the
/// common denominator of the phases exceeds `max_order`.
std::optional<RootOfUnitySum> mask_root_sum(const DigitSet& d, const Rational& x,
                                            std::uint64_t max_order = RootOfUnitySum::kMaxOrder);

/// Zero set of the mask for a structured set, nullopt when no structure is recorded.
std::optional<ZeroSetExpr> mask_zero_set(const DigitSet& d);

/// Exact m_D(x) == 0 when decidable: through the block structure when present,
/// otherwise through mask_root_sum. nullopt if neither route applies.
std::optional<bool> mask_vanishes(const DigitSet& d, const Rational& x,
                                  std::uint64_t max_order = RootOfUnitySum::kMaxOrder);

}  // namespace fractspec
