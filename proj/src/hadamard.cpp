#include "fractspec/hadamard.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>

namespace fractspec {

namespace {

std::optional<HadamardFailure> check_pair(long long p, const DigitSet& digits, const Rational& l1, const Rational& l2,
                                          std::vector<PairWitness>* witnesses) {
  const Rational x = (l2 - l1) / Rational(p);
  auto sum = mask_root_sum(digits, x);
  if (!sum) throw DomainError("Hadamard check: root-of-unity order too large for (" + l1.to_string() + ", " +
                              l2.to_string() + ")");
  if (!sum->is_zero()) return HadamardFailure{l1, l2, mask_eval(digits, x)};
  if (witnesses) witnesses->push_back({l1, l2, std::move(*sum)});
  return std::nullopt;
}

DigitSet direct_sum_all(const std::vector<DigitSet>& parts) {
  DigitSet out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = direct_sum(out, parts[i]);
  return out;
}

// Distinct values of E_j(d) over d in D^(j-1).
std::vector<DigitSet> distinct_stage_sets(const StageMap& stage, const DigitSet& previous) {
  std::vector<DigitSet> out;
  if (stage.branches.empty()) return {stage.constant};
  for (const auto& d : previous.elements()) {
    const DigitSet& e = stage.at(d);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

// Calls f on every choice (one entry per list) of the cartesian product.
template <class F>
bool for_each_choice(const std::vector<std::vector<DigitSet>>& lists, F&& f) {
  std::vector<std::size_t> idx(lists.size(), 0);
  while (true) {
    std::vector<DigitSet> pick;
    for (std::size_t i = 0; i < lists.size(); ++i) pick.push_back(lists[i][idx[i]]);
    if (!f(pick)) return false;
    std::size_t i = 0;
    while (i < lists.size() && ++idx[i] == lists[i].size()) idx[i++] = 0;
    if (i == lists.size()) return true;
  }
}

}  // namespace

HadamardResult check_hadamard(long long p, const DigitSet& digits, const DigitSet& labels) {
  if (p < 1) throw DomainError("Hadamard modulus must be >= 1");
  if (digits.size() != labels.size())
    throw DomainError("Hadamard triple needs #digits == #labels, got " + std::to_string(digits.size()) + " and " +
                      std::to_string(labels.size()));
  HadamardCertificate cert{p, digits, labels, {}};
  auto ls = labels.elements();
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j)
      if (auto f = check_pair(p, digits, ls[i], ls[j], &cert.witnesses)) return *f;
  return cert;
}

bool verify_certificate(const HadamardCertificate& cert) {
  if (cert.digits.size() != cert.labels.size()) return false;
  const std::size_t n = cert.labels.size();
  if (cert.witnesses.size() != n * (n - 1) / 2) return false;
  std::set<std::pair<Rational, Rational>> seen;
  for (const auto& w : cert.witnesses) {
    if (!cert.labels.contains(w.l1) || !cert.labels.contains(w.l2) || w.l1 == w.l2) return false;
    auto key = w.l1 < w.l2 ? std::pair{w.l1, w.l2} : std::pair{w.l2, w.l1};
    if (!seen.insert(key).second) return false;
    auto sum = mask_root_sum(cert.digits, (w.l2 - w.l1) / Rational(cert.p));
    if (!sum || sum->order() != w.sum.order() || sum->coefficients() != w.sum.coefficients()) return false;
    if (!w.sum.is_zero()) return false;
  }
  return true;
}

double unitarity_deviation(long long p, const DigitSet& digits, const DigitSet& labels) {
  if (digits.size() != labels.size()) throw DomainError("unitarity check needs #digits == #labels");
  const std::size_t n = digits.size();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::complex<double>> h(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const Rational phase = (digits.elements()[r] * labels.elements()[c] / Rational(p)).frac();
      h[r * n + c] = std::polar(norm, 2.0 * std::numbers::pi * phase.to_double());
    }
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += std::conj(h[r * n + a]) * h[r * n + b];
      if (a == b) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

std::optional<HadamardCertificate> search_companion(long long p, const DigitSet& digits, long long label_bound,
                                                    unsigned threads) {
  if (p < 1) throw DomainError("Hadamard modulus must be >= 1");
  if (label_bound < 0) throw DomainError("label bound must be >= 0");
  const std::size_t n = digits.size();
  if (n == 1) return std::get<HadamardCertificate>(check_hadamard(p, digits, DigitSet::consecutive(1)));

  // m_D(-x) is the conjugate of m_D(x), so vanishing depends on |l1 - l2| only.
  std::vector<char> zero(static_cast<std::size_t>(label_bound) + 1, 0);
  for (long long delta = 1; delta <= label_bound; ++delta) {
    auto v = mask_vanishes(digits, Rational(delta) / Rational(p));
    if (!v) throw DomainError("companion search: mask vanishing undecidable at " + std::to_string(delta) + "/" +
                              std::to_string(p));
    zero[static_cast<std::size_t>(delta)] = *v ? 1 : 0;
  }

  // Depth-first over increasing labels; `cands` holds labels compatible with all chosen ones.
  auto extend = [&](auto&& self, std::vector<long long>& chosen, const std::vector<long long>& cands) -> bool {
    if (chosen.size() == n) return true;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (chosen.size() + (cands.size() - i) < n) return false;
      const long long c = cands[i];
      std::vector<long long> next;
      for (std::size_t j = i + 1; j < cands.size(); ++j)
        if (zero[static_cast<std::size_t>(cands[j] - c)]) next.push_back(cands[j]);
      chosen.push_back(c);
      if (self(self, chosen, next)) return true;
      chosen.pop_back();
    }
    return false;
  };

  std::vector<long long> second;
  for (long long l = 1; l <= label_bound; ++l)
    if (zero[static_cast<std::size_t>(l)]) second.push_back(l);

  // Branch b fixes the second label second[b]; the lowest successful branch wins.
  std::vector<std::optional<std::vector<long long>>> found(second.size());
  std::atomic<std::size_t> next_branch{0};
  std::atomic<std::size_t> best{second.size()};
  auto worker = [&] {
    for (std::size_t b = next_branch++; b < second.size(); b = next_branch++) {
      if (b > best.load()) return;
      std::vector<long long> chosen{0, second[b]};
      std::vector<long long> cands;
      for (std::size_t j = b + 1; j < second.size(); ++j)
        if (zero[static_cast<std::size_t>(second[j] - second[b])]) cands.push_back(second[j]);
      if (extend(extend, chosen, cands)) {
        found[b] = chosen;
        std::size_t cur = best.load();
        while (b < cur && !best.compare_exchange_weak(cur, b)) {
        }
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(second.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (best.load() == second.size()) return std::nullopt;

  std::vector<Rational> labels;
  for (long long l : *found[best.load()]) labels.emplace_back(l);
  auto result = check_hadamard(p, digits, DigitSet(labels));
  if (!std::holds_alternative<HadamardCertificate>(result))
    throw std::logic_error("companion search produced a label set that fails the Hadamard check");
  return std::get<HadamardCertificate>(std::move(result));
}

const DigitSet& StageMap::at(const Rational& previous_digit) const {
  if (branches.empty()) return constant;
  auto it = branches.find(previous_digit);
  if (it == branches.end()) throw DomainError("stage map has no branch for digit " + previous_digit.to_string());
  return it->second;
}

DigitSet assemble_product_form(long long p, const DigitSet& stage0, const std::vector<StageMap>& stages,
                               const std::vector<long long>& exponents) {
  if (stages.size() != exponents.size()) throw DomainError("product form needs one exponent per stage");
  DigitSet current = stage0;
  long long cumulative = 0;
  for (std::size_t j = 0; j < stages.size(); ++j) {
    if (exponents[j] < 0) throw DomainError("product-form exponents must be >= 0");
    cumulative += exponents[j];
    const Rational scale = pow(Rational(p), cumulative);
    std::vector<Rational> next;
    for (const auto& d : current.elements())
      for (const auto& e : stages[j].at(d).elements()) next.push_back(d + scale * e);
    std::vector<Rational> sorted = next;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
      throw NotDirectSumError("not a direct sum: " + dup->to_string() + " is reached twice at stage " +
                              std::to_string(j + 1));
    current = DigitSet(std::move(next));
  }
  return current;
}

ProductFormReport verify_product_form(const ProductFormCertificate& cert) {
  ProductFormReport report;
  auto fail = [&](std::string detail, std::optional<HadamardFailure> f = std::nullopt) {
    report.ok = false;
    report.detail = std::move(detail);
    report.failure = std::move(f);
    return report;
  };
  const std::size_t k = cert.stages.size();
  if (cert.p < 1) return fail("modulus must be >= 1");
  if (cert.exponents.size() != k) return fail("expected " + std::to_string(k) + " exponents");
  if (cert.labels.size() != k + 1) return fail("expected " + std::to_string(k + 1) + " label sets");

  // Assembly, keeping every intermediate D^(j) for the branch lookups.
  std::vector<DigitSet> levels{cert.stage0};
  try {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<StageMap> prefix(cert.stages.begin(), cert.stages.begin() + static_cast<long>(j) + 1);
      std::vector<long long> exps(cert.exponents.begin(), cert.exponents.begin() + static_cast<long>(j) + 1);
      levels.push_back(assemble_product_form(cert.p, cert.stage0, prefix, exps));
    }
  } catch (const DomainError& e) {
    return fail(std::string("assembly: ") + e.what());
  }
  if (!(levels.back() == cert.assembled)) return fail("assembled digit set does not match the stage recursion");

  std::vector<std::vector<DigitSet>> stage_sets{{cert.stage0}};
  for (std::size_t j = 0; j < k; ++j) {
    try {
      stage_sets.push_back(distinct_stage_sets(cert.stages[j], levels[j]));
    } catch (const DomainError& e) {
      return fail(std::string("stage ") + std::to_string(j + 1) + ": " + e.what());
    }
  }

  auto run = [&](const std::string& name, const std::vector<DigitSet>& parts,
                 const std::vector<DigitSet>& label_parts) -> bool {
    DigitSet e = parts.front(), l = label_parts.front();
    try {
      e = direct_sum_all(parts);
      l = direct_sum_all(label_parts);
    } catch (const NotDirectSumError& err) {
      fail(name + ": " + err.what());
      return false;
    }
    ++report.checks_run;
    HadamardResult r = HadamardFailure{};
    try {
      r = check_hadamard(cert.p, e, l);
    } catch (const DomainError& err) {
      fail(name + ": " + err.what());
      return false;
    }
    if (auto* f = std::get_if<HadamardFailure>(&r)) {
      fail(name + ": not a Hadamard triple", *f);
      return false;
    }
    return true;
  };

  // (i) every stage on its own.
  for (std::size_t j = 0; j <= k; ++j)
    for (const auto& e : stage_sets[j])
      if (!run("E" + std::to_string(j), {e}, {cert.labels[j]})) return report;

  // (ii) prefixes E_0..E_r and suffixes E_r..E_k for 1 <= r <= k.
  for (std::size_t r = 1; r <= k; ++r) {
    std::vector<DigitSet> prefix_labels(cert.labels.begin(), cert.labels.begin() + static_cast<long>(r) + 1);
    std::vector<std::vector<DigitSet>> prefix_sets(stage_sets.begin(), stage_sets.begin() + static_cast<long>(r) + 1);
    const std::string pname = "E0..E" + std::to_string(r);
    if (!for_each_choice(prefix_sets, [&](const auto& pick) { return run(pname, pick, prefix_labels); })) return report;

    std::vector<DigitSet> suffix_labels(cert.labels.begin() + static_cast<long>(r), cert.labels.end());
    std::vector<std::vector<DigitSet>> suffix_sets(stage_sets.begin() + static_cast<long>(r), stage_sets.end());
    const std::string sname = "E" + std::to_string(r) + "..E" + std::to_string(k);
    if (!for_each_choice(suffix_sets, [&](const auto& pick) { return run(sname, pick, suffix_labels); })) return report;
  }
  return report;
}

ProductFormCertificate build_product_form(long long m, long long N, long long p_prime) {
  if (m < 1 || N < 1 || p_prime < 1) throw DomainError("product form needs m, N, p' >= 1");
  const long long p = 2 * m * N * p_prime;
  ProductFormCertificate cert;
  cert.p = p;
  cert.stage0 = DigitSet::from_integers({0, (1 - 2 * m * N) * p + m});
  cert.stages = {StageMap{DigitSet::consecutive(m), {}}, StageMap{DigitSet::block(Rational(2 * m), N), {}}};
  cert.exponents = {1, 0};
  cert.labels = {DigitSet::from_integers({0, N * p_prime}), DigitSet::block(Rational(2 * N * p_prime), m),
                 DigitSet::block(Rational(p_prime), N)};
  cert.assembled = assemble_product_form(p, cert.stage0, cert.stages, cert.exponents);

  const std::vector<DigitSet> e{cert.stage0, cert.stages[0].constant, cert.stages[1].constant};
  auto certify = [&](std::string name, const std::vector<DigitSet>& parts, const std::vector<DigitSet>& labels) {
    auto r = check_hadamard(p, direct_sum_all(parts), direct_sum_all(labels));
    if (auto* f = std::get_if<HadamardFailure>(&r))
      throw std::logic_error("product form (" + std::to_string(m) + ", " + std::to_string(N) + ", " +
                             std::to_string(p_prime) + "): " + name + " fails at labels " + f->l1.to_string() +
                             ", " + f->l2.to_string());
    cert.checks.push_back({std::move(name), std::get<HadamardCertificate>(std::move(r))});
  };
  const auto& L = cert.labels;
  certify("E0", {e[0]}, {L[0]});
  certify("E1", {e[1]}, {L[1]});
  certify("E2", {e[2]}, {L[2]});
  certify("E0..E1", {e[0], e[1]}, {L[0], L[1]});
  certify("E1..E2", {e[1], e[2]}, {L[1], L[2]});
  certify("E0..E2", {e[0], e[1], e[2]}, {L[0], L[1], L[2]});
  return cert;
}

}  // namespace fractspec
