#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fractspec/fourier.hpp"
#include "fractspec/measure.hpp"

namespace fractspec {

/// Finite frequency set, kept strictly increasing. May be empty.
class FrequencySet {
 public:
  FrequencySet() = default;
  /// Sorts; duplicates are rejected.
  explicit FrequencySet(std::vector<Rational> elements);

  std::span<const Rational> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const Rational& x) const;

  friend bool operator==(const FrequencySet&, const FrequencySet&) = default;

 private:
  std::vector<Rational> elements_;
};

enum class Tri { yes, no, unknown };

struct ZeroDecision {
  Tri zero = Tri::unknown;
  /// "zero-set", "superset", "finite-factors" or "numeric"
  std::string method;
  /// Certified evaluation used by the numeric route.
  std::optional<CertifiedComplex> value;
};

/// Decides mu^(x) == 0 for rational x, trying in order: the exact zero set, the
/// zero-set superset for odd alternating digit counts, the exact finite-factor
/// test, and finally a certified evaluation (decisive only when |value| > bound).
class ZeroOracle {
 public:
  explicit ZeroOracle(MeasureSpec spec, double tol = 1e-12);

  ZeroDecision decide(const Rational& x) const;
  const MeasureSpec& spec() const { return spec_; }
  bool has_exact_zero_set() const { return zero_set_.has_value(); }

 private:
  MeasureSpec spec_;
  double tol_;
  std::optional<ZeroSetExpr> zero_set_;
  std::optional<long long> odd_s_;
};

enum class Verdict { orthogonal, not_orthogonal, indeterminate };

std::string to_string(Verdict v);

struct OrthogonalityResult {
  Verdict verdict = Verdict::orthogonal;
  /// Offending pair (lambda_1 < lambda_2) for a negative or indeterminate verdict.
  std::optional<std::pair<Rational, Rational>> pair;
  std::optional<Rational> difference;
  std::string method;
  std::size_t pairs_checked = 0;
};

/// Lambda is orthogonal iff every nonzero difference lies in the zero set of mu^.
/// A proven non-zero difference is reported before any undecided one.
OrthogonalityResult is_orthogonal(const MeasureSpec& spec, const FrequencySet& lambda, double tol = 1e-12);

struct CertifiedReal {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Q(xi) = sum_{lambda} |mu^(xi + lambda)|^2, each term certified to tol / #Lambda.
CertifiedReal q_function(const MeasureSpec& spec, const FrequencySet& lambda, double xi, double tol);

/// {sum_{j<depth} p^j l_j : l_j in labels}. Throws DomainError ("degenerate label
/// set") when two expansions coincide, or when 0 is not a label.
FrequencySet canonical_spectrum(long long p, const DigitSet& labels, int depth);

class IndeterminateError : public std::runtime_error {
 public:
  IndeterminateError(const std::string& what, Rational a, Rational b)
      : std::runtime_error(what), pair(std::move(a), std::move(b)) {}
  std::pair<Rational, Rational> pair;
};

struct FamilyResult {
  /// A maximum family among proven edges; verified orthogonal.
  FrequencySet family;
  /// Largest clique when undecided pairs count as edges. Equals family.size()
  /// when every pair was decided.
  std::size_t upper_bound = 0;
  std::size_t undecided_pairs = 0;
  std::optional<std::pair<Rational, Rational>> first_undecided;
  std::uint64_t explored_nodes = 0;
  bool exact() const { return upper_bound == family.size(); }
};

/// Maximum orthogonal subfamily of `candidates` by exact clique search. With
/// strict = true an undecided pair raises IndeterminateError instead.
FamilyResult max_orthogonal_family(const MeasureSpec& spec, const FrequencySet& candidates, bool strict = false,
                                   double tol = 1e-12);

/// {0} union {k / (2s) : s does not divide k} inside [-window, window] (odd s).
FrequencySet odd_superset_candidates(long long s, const Rational& window);
/// {0} union {k / (sQ) : s does not divide k} inside [-window, window],
/// Q = p(1 - s) + 1 (even s).
FrequencySet even_superset_candidates(long long p, long long s, const Rational& window);

struct DecompositionResult {
  Rational b1;
  long long c = 1;
  long long q1 = 1;
  long long gamma1 = 1;
  /// index i + q1 j -> {z in Z : b1 ((i + q1 j) / c + z) in Lambda}
  std::map<long long, FrequencySet> cells;
  /// Input elements that fall in no cell (original values).
  FrequencySet leftovers;
};

/// Splits Lambda / b1 by residue class modulo 1/c. Throws DomainError unless
/// b1 != 0, c, q1, gamma1 >= 1 and q1 gamma1 <= c.
DecompositionResult decompose_spectrum(const FrequencySet& lambda, const Rational& b1, long long c, long long q1,
                                       long long gamma1);
/// Inverse of decompose_spectrum.
FrequencySet reassemble(const DecompositionResult& d);

struct SpectralityDecision {
  bool spectral = false;
  std::string reason;
};

/// nu^m_{rho, D_2Nm} (equivalently mu_{rho, D}) is spectral iff 1/rho = p is an
/// integer and 2Nm | p.
SpectralityDecision spectrality_decision(long long m, long long N, const Rational& rho);

/// s when gcd(p, s) = 1 (at most s mutually orthogonal exponentials for the
/// alternating measure on D_s with ratio 1/p), otherwise nullopt.
std::optional<long long> orthogonality_bound(long long p, long long s);

/// Membership in
///   union_{k>=1} ((2Z+1) \ s(2Z+1)) / (2 rho^k s)  union  union_{k>=1} (Z \ sZ) / (rho^k s),
/// a superset of the zero set of the alternating measure on D_s for odd s.
bool nu_zero_superset_member(long long s, const Rational& rho, const Rational& x);

}  // namespace fractspec
