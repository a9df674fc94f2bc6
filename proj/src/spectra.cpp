#include "fractspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fractspec/clique.hpp"

namespace fractspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 6.283185307179586;

bool is_odd_integer(const Rational& x) {
  return x.is_integer() && mpz_odd_p(x.numerator().get_mpz_t()) != 0;
}

bool divisible(const Rational& integer, long long s) {
  mpz_class r = integer.numerator() % mpz_class(static_cast<long>(s));
  return r == 0;
}

std::optional<long long> odd_digit_count(const MeasureSpec& spec) {
  const auto* alt = std::get_if<AlternatingSpec>(&spec);
  if (!alt || alt->period() != 1 || alt->digit_count() < 3 || alt->digit_count() % 2 == 0) return std::nullopt;
  return alt->digit_count();
}

}  // namespace

FrequencySet::FrequencySet(std::vector<Rational> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  if (auto dup = std::adjacent_find(elements_.begin(), elements_.end()); dup != elements_.end())
    throw DomainError("frequency set contains " + dup->to_string() + " twice");
}

bool FrequencySet::contains(const Rational& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

ZeroOracle::ZeroOracle(MeasureSpec spec, double tol) : spec_(std::move(spec)), tol_(tol) {
  if (!(tol_ > 0.0)) throw DomainError("tolerance must be positive");
  zero_set_ = measure_zero_set(spec_);
  odd_s_ = odd_digit_count(spec_);
}

ZeroDecision ZeroOracle::decide(const Rational& x) const {
  if (x.is_zero()) return {Tri::no, "zero-set", std::nullopt};
  if (zero_set_) return {zero_set_->contains(x) ? Tri::yes : Tri::no, "zero-set", std::nullopt};
  const auto& alt = std::get_if<AlternatingSpec>(&spec_);
  if (odd_s_ && !nu_zero_superset_member(*odd_s_, alt->rho(), x)) return {Tri::no, "superset", std::nullopt};
  if (auto z = exact_product_zero(spec_, x)) return {*z ? Tri::yes : Tri::no, "finite-factors", std::nullopt};
  const CertifiedComplex v = fourier_transform(spec_, x, tol_);
  return {std::abs(v.value) > v.error_bound ? Tri::no : Tri::unknown, "numeric", v};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::orthogonal:
      return "orthogonal";
    case Verdict::not_orthogonal:
      return "not_orthogonal";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

OrthogonalityResult is_orthogonal(const MeasureSpec& spec, const FrequencySet& lambda, double tol) {
  const ZeroOracle oracle(spec, tol);
  OrthogonalityResult out;
  std::optional<OrthogonalityResult> undecided;
  auto el = lambda.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      ++out.pairs_checked;
      const Rational diff = el[j] - el[i];
      const ZeroDecision d = oracle.decide(diff);
      if (d.zero == Tri::yes) continue;
      OrthogonalityResult r;
      r.pair = std::pair{el[i], el[j]};
      r.difference = diff;
      r.method = d.method;
      if (d.zero == Tri::no) {
        r.verdict = Verdict::not_orthogonal;
        r.pairs_checked = out.pairs_checked;
        return r;
      }
      r.verdict = Verdict::indeterminate;
      if (!undecided) undecided = r;
    }
  if (undecided) {
    undecided->pairs_checked = out.pairs_checked;
    return *undecided;
  }
  return out;
}

CertifiedReal q_function(const MeasureSpec& spec, const FrequencySet& lambda, double xi, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!std::isfinite(xi)) throw DomainError("xi must be finite");
  const double each = tol / static_cast<double>(std::max<std::size_t>(1, lambda.size()));
  const double radius = support_radius(spec);
  CertifiedReal out;
  for (const auto& lam : lambda.elements()) {
    const double l = lam.to_double();
    const double x = xi + l;
    // argument error from rounding lambda and the sum
    const double arg_err = (std::abs(l) + std::abs(x)) * kEps;
    const CertifiedComplex v = fourier_transform(spec, x, each);
    const double e = v.error_bound + kTwoPi * radius * arg_err;
    const double a = std::abs(v.value);
    out.value += a * a;
    // ||u|^2 - |w|^2| <= |u - w| (|u| + |w|)
    out.error_bound += e * (2.0 * a + e) + 4.0 * kEps * a * a;
  }
  out.error_bound += static_cast<double>(lambda.size()) * kEps * out.value;
  return out;
}

FrequencySet canonical_spectrum(long long p, const DigitSet& labels, int depth) {
  if (p < 2) throw DomainError("canonical spectrum needs p >= 2");
  if (depth < 1) throw DomainError("canonical spectrum needs depth >= 1");
  if (!labels.contains(Rational(0))) throw DomainError("canonical spectrum needs 0 among the labels");
  std::vector<Rational> current{Rational(0)};
  Rational scale(1);
  for (int j = 0; j < depth; ++j) {
    std::vector<Rational> next;
    next.reserve(current.size() * labels.size());
    for (const auto& c : current)
      for (const auto& l : labels.elements()) next.push_back(c + scale * l);
    current = std::move(next);
    scale *= Rational(p);
  }
  std::vector<Rational> sorted = current;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("degenerate label set: two expansions coincide");
  return FrequencySet(std::move(sorted));
}

FamilyResult max_orthogonal_family(const MeasureSpec& spec, const FrequencySet& candidates, bool strict, double tol) {
  const ZeroOracle oracle(spec, tol);
  auto el = candidates.elements();
  const std::size_t n = el.size();
  Graph proven(n), optimistic(n);
  FamilyResult out;
  // Differences repeat across lattice-like candidate sets; decide each once.
  std::map<Rational, Tri> cache;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational diff = el[j] - el[i];
      auto it = cache.find(diff);
      if (it == cache.end()) it = cache.emplace(diff, oracle.decide(diff).zero).first;
      if (it->second == Tri::yes) {
        proven.add_edge(i, j);
        optimistic.add_edge(i, j);
      } else if (it->second == Tri::unknown) {
        if (strict)
          throw IndeterminateError("cannot decide whether " + diff.to_string() + " is a zero of the transform", el[i],
                                   el[j]);
        optimistic.add_edge(i, j);
        if (!out.first_undecided) out.first_undecided = std::pair{el[i], el[j]};
        ++out.undecided_pairs;
      }
    }
  if (n == 0) return out;
  const CliqueResult lower = max_clique(proven);
  std::vector<Rational> family;
  for (auto v : lower.vertices) family.push_back(el[v]);
  out.family = FrequencySet(std::move(family));
  out.explored_nodes = lower.explored_nodes;
  out.upper_bound = out.family.size();
  if (out.undecided_pairs > 0) {
    const CliqueResult upper = max_clique(optimistic);
    out.upper_bound = upper.vertices.size();
    out.explored_nodes += upper.explored_nodes;
  }
  return out;
}

FrequencySet odd_superset_candidates(long long s, const Rational& window) {
  if (s < 3 || s % 2 == 0) throw DomainError("odd superset candidates need odd s >= 3");
  if (window <= Rational(0)) throw DomainError("window must be positive");
  const Rational den(2 * s);
  const long long kmax = (window * den).floor().get_si();
  std::vector<Rational> out{Rational(0)};
  for (long long k = -kmax; k <= kmax; ++k)
    if (k % s != 0) out.push_back(Rational(k) / den);
  return FrequencySet(std::move(out));
}

FrequencySet even_superset_candidates(long long p, long long s, const Rational& window) {
  if (s < 2 || s % 2 != 0) throw DomainError("even superset candidates need even s >= 2");
  if (p < 2) throw DomainError("even superset candidates need p >= 2");
  if (window <= Rational(0)) throw DomainError("window must be positive");
  const long long Q = p * (1 - s) + 1;
  const Rational den(s * Q);
  const long long kmax = (window * den.abs()).floor().get_si();
  std::vector<Rational> out{Rational(0)};
  for (long long k = -kmax; k <= kmax; ++k)
    if (k % s != 0) out.push_back(Rational(k) / den);
  return FrequencySet(std::move(out));
}

DecompositionResult decompose_spectrum(const FrequencySet& lambda, const Rational& b1, long long c, long long q1,
                                       long long gamma1) {
  if (b1.is_zero()) throw DomainError("b1 must be nonzero");
  if (c < 1 || q1 < 1 || gamma1 < 1) throw DomainError("c, q1 and gamma1 must be >= 1");
  if (q1 * gamma1 > c) throw DomainError("q1 * gamma1 must not exceed c");
  DecompositionResult out{b1, c, q1, gamma1, {}, {}};
  std::map<long long, std::vector<Rational>> cells;
  for (long long t = 0; t < q1 * gamma1; ++t) cells[t];
  std::vector<Rational> left;
  for (const auto& lam : lambda.elements()) {
    const Rational cy = Rational(c) * lam / b1;
    if (!cy.is_integer()) {
      left.push_back(lam);
      continue;
    }
    mpz_class t = cy.numerator() % static_cast<long>(c);
    if (t < 0) t += static_cast<long>(c);
    const long long idx = t.get_si();
    if (idx >= q1 * gamma1) {
      left.push_back(lam);
      continue;
    }
    cells[idx].push_back((cy - Rational(idx)) / Rational(c));
  }
  for (auto& [idx, zs] : cells) out.cells.emplace(idx, FrequencySet(std::move(zs)));
  out.leftovers = FrequencySet(std::move(left));
  return out;
}

FrequencySet reassemble(const DecompositionResult& d) {
  std::vector<Rational> out(d.leftovers.elements().begin(), d.leftovers.elements().end());
  for (const auto& [idx, zs] : d.cells)
    for (const auto& z : zs.elements()) out.push_back(d.b1 * (Rational(idx) / Rational(d.c) + z));
  return FrequencySet(std::move(out));
}

SpectralityDecision spectrality_decision(long long m, long long N, const Rational& rho) {
  if (m < 1 || N < 1) throw DomainError("m and N must be >= 1");
  if (rho <= Rational(0) || rho >= Rational(1)) throw DomainError("rho must lie in (0, 1)");
  const Rational inv = rho.reciprocal();
  if (!inv.is_integer()) return {false, "ρ⁻¹ = " + inv.to_string() + " ∉ ℕ"};
  const mpz_class p = inv.numerator();
  const long long block = 2 * N * m;
  if (p % static_cast<long>(block) == 0) return {true, std::to_string(block) + "∣" + p.get_str()};
  return {false, std::to_string(block) + "∤" + p.get_str()};
}

std::optional<long long> orthogonality_bound(long long p, long long s) {
  if (p < 2 || s < 2) throw DomainError("orthogonality bound needs p, s >= 2");
  if (std::gcd(p, s) == 1) return s;
  return std::nullopt;
}

bool nu_zero_superset_member(long long s, const Rational& rho, const Rational& x) {
  if (s < 3 || s % 2 == 0) throw DomainError("zero-set superset needs odd s >= 3");
  if (rho <= Rational(0) || rho >= Rational(1)) throw DomainError("rho must lie in (0, 1)");
  if (x.is_zero()) return false;
  // Both families sit in Z / (2s) \ {0}, so |rho^k x| >= 1 / (2s) bounds k.
  const Rational floor_abs = Rational(1) / Rational(2 * s);
  Rational y = x;
  while (true) {
    y *= rho;
    if (y.abs() < floor_abs) return false;
    const Rational t = Rational(2 * s) * y;
    if (is_odd_integer(t) && !divisible(t, s)) return true;
    const Rational u = Rational(s) * y;
    if (u.is_integer() && !divisible(u, s)) return true;
  }
}

}  // namespace fractspec
