#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fractspec/measure.hpp"

namespace fractspec {

/// A double-precision value with a rigorous bound |true - value| <= error_bound.
struct CertifiedComplex {
  std::complex<double> value{1.0, 0.0};
  double error_bound = 0.0;
};

// Fourier transforms use the convention mu^(xi) = integral exp(2 pi i x xi) dmu(x).
//
// Product-type transforms are truncated once the tail satisfies
//   sum_{j > J} |1 - m_{R_j}(x_j)| <= sum_{j > J} 2 pi max|R_j| |x_j| <= tol / 2,
// and the reported bound adds a running floating-point rounding estimate. A
// rational argument for which some finite factor vanishes exactly returns 0
// with bound 0. Requested tolerances below ~1e-13 cannot be met: the bound is
// still honest but then exceeds tol.

CertifiedComplex ft_discrete(const DigitSet& e, double xi);
CertifiedComplex ft_discrete(const DigitSet& e, const Rational& xi);

CertifiedComplex ft_self_similar(const SelfSimilarSpec& spec, double xi, double tol);
CertifiedComplex ft_self_similar(const SelfSimilarSpec& spec, const Rational& xi, double tol);

CertifiedComplex ft_moran(const MoranSpec& spec, double xi, double tol);
CertifiedComplex ft_moran(const MoranSpec& spec, const Rational& xi, double tol);

/// Alternating-sign measures through the cocycle
///   (nu^(t), nu^(-t)) = [[A(u), B(u)], [conj B(u), conj A(u)]] (nu^(u), nu^(-u)),  u = rho t,
/// with A(u) = (1/#D) sum_{sign +} e(d u) and B(u) = (1/#D) sum_{sign -} e(-d u),
/// unrolled K times from the seed (1, 1). Each row has l1 norm <= 1, so the seed
/// error 2 pi max|d| rho^K |t| / (1 - rho) is not amplified.
CertifiedComplex ft_alternating(const AlternatingSpec& spec, double xi, double tol);
CertifiedComplex ft_alternating(const SymmetricAlternatingSpec& spec, double xi, double tol);

CertifiedComplex fourier_transform(const MeasureSpec& spec, double xi, double tol);
CertifiedComplex fourier_transform(const MeasureSpec& spec, const Rational& xi, double tol);

/// R with supp(mu) inside [-R, R], so |mu^(a) - mu^(b)| <= 2 pi R |a - b|.
double support_radius(const MeasureSpec& spec);

/// Exact decision of mu^(xi) == 0 from the finite factors of a product-type
/// transform (self-similar or Moran). Only factors with max|R| |x| >= 1/4 can
/// vanish; beyond them the remaining infinite product is nonzero. nullopt when
/// a relevant factor cannot be decided exactly or the spec is not product-type.
std::optional<bool> exact_product_zero(const MeasureSpec& spec, const Rational& xi);

struct IdentityReport {
  std::size_t samples = 0;
  double max_deviation = 0.0;
  double worst_xi = 0.0;
  /// max over samples of deviation - allowed; <= 0 iff every sample passes.
  double max_excess = 0.0;
  bool pass = true;
};

/// Compares the cocycle evaluator for the m-alternating measure on D_{2Nm} with
/// the product evaluator of mu_{rho, alternate_digit_set(m, N, rho)} at
/// uniformly drawn points of [-window, window].
IdentityReport verify_nu_equals_mu(long long m, long long N, const Rational& rho, std::size_t sample_count,
                                   double window, double tol, std::uint64_t seed = 20240601);

/// Checks nu^(t) = exp(-2 pi i n t rho / (1 - rho)) mu^_{rho, D_{2n+1}}(t) for the
/// symmetric alternating measure on {-n, ..., n}.
IdentityReport verify_symmetric_example(long long n, const Rational& rho, std::size_t sample_count, double window,
                                        double tol, std::uint64_t seed = 20240601);

struct SweepRow {
  double xi;
  CertifiedComplex ft;
};

/// Evaluates on `points` equally spaced abscissae of [from, to] (inclusive).
std::vector<SweepRow> sweep_ft(const MeasureSpec& spec, double from, double to, std::size_t points, double tol,
                               unsigned threads = 1);

namespace detail {

/// Cocycle unrolled exactly `steps` times. error_bound carries only the seed
/// error 2 pi max|d| rho^steps |xi| / (1 - rho).
CertifiedComplex alternating_cocycle(std::span<const SignedDigit> digits, double rho, double xi, int steps);

}  // namespace detail

}  // namespace fractspec
