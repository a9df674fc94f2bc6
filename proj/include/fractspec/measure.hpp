#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fractspec/digit_set.hpp"
#include "fractspec/zero_set.hpp"

namespace fractspec {

/// mu_{rho,D}: invariant measure of {x -> rho (x + d)}_{d in D}.
class SelfSimilarSpec {
 public:
  SelfSimilarSpec(Rational rho, DigitSet digits);
  const Rational& rho() const { return rho_; }
  const DigitSet& digits() const { return digits_; }

 private:
  Rational rho_;
  DigitSet digits_;
};

/// Invariant measure of {x -> (-1)^floor(d/m) rho (x + d)}_{d in D_n}, m | n.
class AlternatingSpec {
 public:
  AlternatingSpec(Rational rho, long long period, long long digit_count);
  const Rational& rho() const { return rho_; }
  long long period() const { return period_; }
  long long digit_count() const { return digit_count_; }
  /// digit_count / (2 * period) when the block count is even.
  std::optional<long long> half_block_count() const;

 private:
  Rational rho_;
  long long period_;
  long long digit_count_;
};

/// Invariant measure of {x -> (-1)^d rho (x + d)}_{d = -n..n}.
class SymmetricAlternatingSpec {
 public:
  SymmetricAlternatingSpec(Rational rho, long long half_width);
  const Rational& rho() const { return rho_; }
  long long half_width() const { return half_width_; }

 private:
  Rational rho_;
  long long half_width_;
};

/// One factor of a Moran convolution: the stage contributes
/// delta_{(b_1 ... b_k)^{-1} R_k}.
struct MoranStage {
  Rational b;
  DigitSet digits;
};

/// Moran measure given by a finite prefix followed by a tail pattern repeated
/// forever. An empty tail means the convolution stops after the prefix.
class MoranSpec {
 public:
  MoranSpec(std::vector<MoranStage> prefix, std::vector<MoranStage> tail);
  const std::vector<MoranStage>& prefix() const { return prefix_; }
  const std::vector<MoranStage>& tail() const { return tail_; }
  /// Product of the tail factors b over one period.
  Rational tail_period_product() const;

 private:
  std::vector<MoranStage> prefix_;
  std::vector<MoranStage> tail_;
};

using MeasureSpec = std::variant<SelfSimilarSpec, AlternatingSpec, SymmetricAlternatingSpec, MoranSpec>;

struct SignedDigit {
  long long digit;
  int sign;
};

std::vector<SignedDigit> signed_digits(const AlternatingSpec& spec);
std::vector<SignedDigit> signed_digits(const SymmetricAlternatingSpec& spec);

/// The uniform-ratio measure equal to the alternating one when digit_count / period
/// is even, i.e. mu_{rho, D_m (+) 2m D_N (+) (1 + m rho - 2Nm) D_2}.
std::optional<SelfSimilarSpec> equivalent_self_similar(const AlternatingSpec& spec);

/// Exact zero set of the Fourier transform, built from the mask zero sets of
/// structured digit sets. Symmetric alternating measures use the canonical
/// measure on D_{2n+1} (the two transforms differ by a unimodular phase).
/// nullopt for alternating measures with an odd block count or unstructured digits.
std::optional<ZeroSetExpr> measure_zero_set(const MeasureSpec& spec);

}  // namespace fractspec
