// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fractspec/fourier.hpp"
#include "fractspec/hadamard.hpp"
#include "fractspec/spectra.hpp"

using namespace fractspec;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome hadamard_ground_truth() {
  const auto digits = DigitSet::from_integers({0, 2});
  const auto labels = DigitSet::from_integers({0, 1});
  const auto r = check_hadamard(4, digits, labels);
  const auto* cert = std::get_if<HadamardCertificate>(&r);
  const double dev = unitarity_deviation(4, digits, labels);
  const bool ok = cert && verify_certificate(*cert) && dev < 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof buf, "exact=%s unitarity deviation=%.3g", cert ? "yes" : "no", dev);
  return {ok, buf};
}

Outcome admissible_negative() {
  const auto found = search_companion(4, DigitSet::from_integers({0, 1, 8, 9}), 64, worker_count());
  return {!found.has_value(), found ? "unexpected companion found" : "no companion in [0, 64]"};
}

Outcome product_forms() {
  int ok = 0, total = 0;
  std::string first_failure;
  for (long long m = 1; m <= 5; ++m)
    for (long long N = 1; N <= 5; ++N)
      for (long long pp = 1; pp <= 5; ++pp) {
        ++total;
        try {
          const auto cert = build_product_form(m, N, pp);
          const auto report = verify_product_form(cert);
          const bool same = cert.assembled == alternate_digit_set(m, N, Rational(1) / Rational(cert.p)).scaled(Rational(cert.p));
          if (report.ok && same) {
            ++ok;
            continue;
          }
          if (first_failure.empty()) first_failure = report.detail;
        } catch (const std::exception& e) {
          if (first_failure.empty()) first_failure = e.what();
        }
        if (first_failure.empty()) first_failure = "(m,N,p')=(" + std::to_string(m) + "," + std::to_string(N) + "," + std::to_string(pp) + ")";
      }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " verified" +
                           (first_failure.empty() ? "" : "; first failure: " + first_failure)};
}

Outcome nu_equals_mu() {
  struct Case {
    long long m, N;
    const char* rho;
  };
  const Case cases[] = {{1, 1, "1/2"}, {2, 2, "1/8"}, {2, 3, "1/5"}, {3, 2, "1/7"}};
  bool ok = true;
  double worst_excess = -1.0, worst_dev = 0.0;
  for (const auto& c : cases) {
    const auto r = verify_nu_equals_mu(c.m, c.N, q(c.rho), 200, 10.0, 1e-8);
    ok = ok && r.pass;
    worst_excess = std::max(worst_excess, r.max_excess);
    worst_dev = std::max(worst_dev, r.max_deviation);
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max deviation=%.3g, max(deviation - allowed)=%.3g", worst_dev, worst_excess);
  return {ok, buf};
}

Outcome symmetric_example() {
  bool ok = true;
  double worst = 0.0;
  for (auto [n, rho] : {std::pair{1LL, "1/3"}, std::pair{2LL, "1/5"}}) {
    const auto r = verify_symmetric_example(n, q(rho), 200, 10.0, 1e-8);
    ok = ok && r.pass;
    worst = std::max(worst, r.max_deviation);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max deviation=%.3g", worst);
  return {ok, buf};
}

Outcome q_convergence() {
  const SelfSimilarSpec cantor(q("1/4"), DigitSet::from_integers({0, 2}));
  bool bounded = true, monotone = true;
  double previous = -1.0, last = 0.0;
  std::string mins;
  for (int k : {4, 6, 8}) {
    const auto lam = canonical_spectrum(4, DigitSet::from_integers({0, 1}), k);
    double lowest = 2.0;
    for (int i = 0; i < 100; ++i) {
      const auto v = q_function(cantor, lam, i / 100.0, 1e-9);
      bounded = bounded && v.value <= 1.0 + v.error_bound;
      lowest = std::min(lowest, v.value);
    }
    monotone = monotone && lowest >= previous;
    previous = last = lowest;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%sk=%d: %.6f", mins.empty() ? "" : ", ", k, lowest);
    mins += buf;
  }
  return {bounded && monotone && last >= 0.999, "min-grid Q " + mins};
}

Outcome orthogonality_desk_check() {
  const AlternatingSpec odd(q("1/2"), 1, 3);
  const AlternatingSpec even(q("1/3"), 1, 2);
  const auto a = max_orthogonal_family(odd, odd_superset_candidates(3, Rational(20)));
  const auto b = max_orthogonal_family(even, even_superset_candidates(3, 2, Rational(20)));
  const bool ok = a.family.size() <= 3 && a.upper_bound <= 3 && b.family.size() <= 2 && b.upper_bound <= 2 &&
                  is_orthogonal(odd, a.family).verdict == Verdict::orthogonal &&
                  is_orthogonal(even, b.family).verdict == Verdict::orthogonal;
  return {ok, "(2,3): size " + std::to_string(a.family.size()) + " (upper " + std::to_string(a.upper_bound) +
                  "); (3,2): size " + std::to_string(b.family.size()) + " (upper " + std::to_string(b.upper_bound) + ")"};
}

Outcome spectrality_table() {
  // Spectral iff 2Nm divides k, worked out per row.
  struct Row {
    long long m, N;
    std::vector<long long> spectral_k;
  };
  const Row rows[] = {{1, 1, {2, 4, 6, 8}}, {1, 2, {4, 8}}, {2, 1, {4, 8}}, {2, 2, {8}}};
  int agree = 0;
  for (const auto& r : rows)
    for (long long k = 2; k <= 9; ++k) {
      const bool expected = std::find(r.spectral_k.begin(), r.spectral_k.end(), k) != r.spectral_k.end();
      if (spectrality_decision(r.m, r.N, Rational(1) / Rational(k)).spectral == expected) ++agree;
    }
  return {agree == 32, std::to_string(agree) + "/32 agree"};
}

// Random member of the zero set: pick a component, an atom and (for dilated
// components) one of the first few exponents.
Rational sample_member(const ZeroSetExpr& z, std::mt19937_64& gen) {
  const auto& comps = z.components();
  const auto& comp = comps[std::uniform_int_distribution<std::size_t>(0, comps.size() - 1)(gen)];
  const auto& atom = comp.atoms[std::uniform_int_distribution<std::size_t>(0, comp.atoms.size() - 1)(gen)];
  std::uniform_int_distribution<long long> t(-40, 40);
  Rational y;
  if (const auto* lc = std::get_if<LatticeComplement>(&atom)) {
    long long k = t(gen);
    if (k % lc->modulus == 0) k = k * lc->modulus + 1;  // modulus >= 2 for nonempty atoms
    y = lc->scale * Rational(k) / Rational(lc->modulus);
  } else {
    const auto& ol = std::get<OddLattice>(atom);
    y = ol.scale * Rational(2 * t(gen) + 1) / (Rational(2) * ol.half_denominator);
  }
  if (comp.dilation)
    y *= pow(comp.dilation->base, comp.dilation->first_exponent + std::uniform_int_distribution<long long>(0, 2)(gen));
  return y;
}

Outcome zero_set_soundness() {
  const std::vector<std::pair<const char*, MeasureSpec>> specs = {
      {"middle-fourth", SelfSimilarSpec(q("1/4"), DigitSet::block(Rational(2), 2))},
      {"alternate digits", SelfSimilarSpec(q("1/8"), alternate_digit_set(2, 2, q("1/8")))},
      {"alternating m=2 n=8", AlternatingSpec(q("1/8"), 2, 8)},
      {"symmetric n=1", SymmetricAlternatingSpec(q("1/5"), 1)},
      {"moran", MoranSpec({{Rational(3), DigitSet::block(Rational(1), 3)}},
                          {{Rational(4), DigitSet::block(Rational(2), 2)}, {Rational(6), DigitSet::block(Rational(3), 2)}})},
  };
  std::mt19937_64 gen(9);
  std::size_t accepted = 0, rejected = 0, exact_route = 0, numeric_route = 0;
  for (const auto& [name, spec] : specs) {
    const auto z = measure_zero_set(spec);
    if (!z || z->empty()) return {false, std::string("no exact zero set for ") + name};
    // 200 accepted and 200 rejected points per spec.
    std::vector<mpz_class> dens;
    for (int i = 0; i < 200; ++i) {
      const Rational x = sample_member(*z, gen);
      if (!z->contains(x)) return {false, std::string("sampler produced a non-member for ") + name};
      const auto v = fourier_transform(spec, x.to_double(), 1e-12);
      if (!(std::abs(v.value) <= v.error_bound + 1e-10))
        return {false, std::string(name) + ": |ft| = " + std::to_string(std::abs(v.value)) + " at member " + x.to_string()};
      dens.push_back(x.denominator());
      ++accepted;
    }
    // Non-members drawn with the denominators seen among the members. Some
    // denominators have no non-members at all (every odd/2 is a zero of the
    // middle-fourth transform), so draws are retried with a bounded budget.
    std::uniform_int_distribution<std::size_t> pick(0, dens.size() - 1);
    std::uniform_int_distribution<long long> num(-400, 400);
    int found = 0;
    for (long long tries = 0; found < 200 && tries < 200000; ++tries) {
      const mpz_class& den = dens[pick(gen)];
      const Rational y = Rational(mpz_class(static_cast<long>(num(gen))), den);
      if (y.denominator() != den || y.is_zero() || z->contains(y)) continue;
      if (auto e = exact_product_zero(spec, y); e && !*e) {
        ++exact_route;
      } else {
        const auto w = fourier_transform(spec, y.to_double(), 1e-12);
        if (!(std::abs(w.value) > w.error_bound))
          return {false, std::string(name) + ": cannot separate " + y.to_string() + " from 0"};
        ++numeric_route;
      }
      ++found;
      ++rejected;
    }
    if (found < 200) return {false, std::string(name) + ": only " + std::to_string(found) + " non-members drawn"};
  }
  return {accepted == 1000 && rejected == 1000,
          std::to_string(accepted) + " members within bound; " + std::to_string(rejected) + " non-members nonzero (" +
              std::to_string(exact_route) + " exact, " + std::to_string(numeric_route) + " certified)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Hadamard ground truth", 1.0, hadamard_ground_truth},
      {2, "Admissible-pair negative", 60.0, admissible_negative},
      {3, "Product-form construction (125 cases)", 60.0, product_forms},
      {4, "nu = mu identity", 30.0, nu_equals_mu},
      {5, "Symmetric example phase identity", 0.0, symmetric_example},
      {6, "Q-function convergence", 0.0, q_convergence},
      {7, "Orthogonal family desk check", 60.0, orthogonality_desk_check},
      {8, "Spectrality decision table", 0.0, spectrality_table},
      {9, "Zero-set soundness", 0.0, zero_set_soundness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
