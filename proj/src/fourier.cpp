#include "fractspec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace fractspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Relative slack on analytically computed tail bounds.
constexpr double kBoundSlack = 1.0 + 1e-9;

void require_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive");
}

void require_finite(double xi) {
  if (!std::isfinite(xi)) throw DomainError("frequency must be finite");
}

// Digits pre-converted for the hot loops.
struct Mask {
  std::vector<double> digits;
  double max_abs = 0.0;

  explicit Mask(const DigitSet& d) {
    digits.reserve(d.size());
    for (const auto& x : d.elements()) digits.push_back(x.to_double());
    max_abs = d.max_abs().to_double();
  }

  std::complex<double> eval(double x) const {
    double re = 0.0, im = 0.0;
    for (double d : digits) {
      double phase = d * x;
      phase -= std::floor(phase);
      double angle = kTwoPi * phase;
      re += std::cos(angle);
      im += std::sin(angle);
    }
    double n = static_cast<double>(digits.size());
    return {re / n, im / n};
  }

  // Rounding estimate for eval(x) when x carries a relative error of `rel_steps` ulps.
  double rounding(double x, double rel_steps) const {
    return (kTwoPi * max_abs * std::abs(x) * (rel_steps + 2.0) + static_cast<double>(digits.size()) + 4.0) * kEps;
  }
};

// A double is treated as a candidate for the exact zero test only when it is a
// dyadic rational with a small denominator (grid points like 1, 0.5, 3.25).
std::optional<Rational> small_dyadic(double xi) {
  double scaled = std::ldexp(xi, 20);
  if (std::abs(scaled) > 9.0e15 || scaled != std::trunc(scaled)) return std::nullopt;
  return Rational::from_double(xi);
}

std::optional<bool> self_similar_exact_zero(const SelfSimilarSpec& spec, const Rational& xi) {
  if (xi.is_zero()) return false;
  const Rational quarter(1, 4);
  const Rational maxd = spec.digits().max_abs();
  Rational x = xi * spec.rho();
  bool undecided = false;
  while (maxd * x.abs() >= quarter) {
    auto v = mask_vanishes(spec.digits(), x);
    if (!v)
      undecided = true;
    else if (*v)
      return true;
    x *= spec.rho();
  }
  if (undecided) return std::nullopt;
  return false;
}

std::optional<bool> moran_exact_zero(const MoranSpec& spec, const Rational& xi) {
  if (xi.is_zero()) return false;
  const Rational quarter(1, 4);
  bool undecided = false;
  Rational x = xi;
  auto visit = [&](const MoranStage& stage) -> bool {
    x /= stage.b;
    if (stage.digits.max_abs() * x.abs() < quarter) return false;
    auto v = mask_vanishes(stage.digits, x);
    if (!v) {
      undecided = true;
      return false;
    }
    return *v;
  };
  for (const auto& stage : spec.prefix())
    if (visit(stage)) return true;
  if (!spec.tail().empty()) {
    // The same stage one period later sees x / B with |B| > 1, so once a full
    // period stays below the quarter-turn threshold every later stage does too.
    bool any_large = true;
    while (any_large) {
      any_large = false;
      for (const auto& stage : spec.tail()) {
        if (visit(stage)) return true;
        if (stage.digits.max_abs() * x.abs() >= quarter) any_large = true;
      }
    }
  }
  if (undecided) return std::nullopt;
  return false;
}

CertifiedComplex self_similar_numeric(const SelfSimilarSpec& spec, double xi, double tol) {
  const Mask mask(spec.digits());
  const double rho = spec.rho().to_double();
  if (xi == 0.0 || mask.max_abs == 0.0) return {{1.0, 0.0}, 0.0};
  double tail = kTwoPi * mask.max_abs * std::abs(xi) * rho / (1.0 - rho);
  std::complex<double> value{1.0, 0.0};
  double rounding = 0.0;
  double x = xi;
  int j = 0;
  while (tail * kBoundSlack > tol / 2.0) {
    ++j;
    x *= rho;
    value *= mask.eval(x);
    rounding += mask.rounding(x, j + 1) + 4.0 * kEps;
    tail *= rho;
  }
  return {value, tail * kBoundSlack + 2.0 * rounding};
}

struct StageMask {
  Mask mask;
  double inv_b;
};

CertifiedComplex moran_numeric(const MoranSpec& spec, double xi, double tol) {
  if (xi == 0.0) return {{1.0, 0.0}, 0.0};
  std::vector<StageMask> prefix, tail;
  for (const auto& s : spec.prefix()) prefix.push_back({Mask(s.digits), s.b.reciprocal().to_double()});
  for (const auto& s : spec.tail()) tail.push_back({Mask(s.digits), s.b.reciprocal().to_double()});

  std::complex<double> value{1.0, 0.0};
  double rounding = 0.0;
  double x = xi;
  int k = 0;
  auto apply = [&](const StageMask& s) {
    ++k;
    x *= s.inv_b;
    if (s.mask.max_abs == 0.0) return;
    value *= s.mask.eval(x);
    rounding += s.mask.rounding(x, 2.0 * k + 1.0) + 4.0 * kEps;
  };
  for (const auto& s : prefix) apply(s);
  if (tail.empty()) return {value, 2.0 * rounding};

  const double period_contraction = std::abs(spec.tail_period_product().reciprocal().to_double());
  auto remainder = [&]() {
    double s = 0.0, y = std::abs(x);
    for (const auto& st : tail) {
      y *= std::abs(st.inv_b);
      s += kTwoPi * st.mask.max_abs * y;
    }
    return s / (1.0 - period_contraction) * kBoundSlack;
  };
  double rem = remainder();
  while (rem > tol / 2.0) {
    for (const auto& s : tail) apply(s);
    rem = remainder();
  }
  return {value, rem + 2.0 * rounding};
}

double support_radius_bound(double max_digit, double rho) { return max_digit / (1.0 - rho); }

CertifiedComplex alternating_numeric(std::span<const SignedDigit> digits, double rho, double xi, double tol) {
  double max_digit = 0.0;
  for (const auto& d : digits) max_digit = std::max(max_digit, std::abs(static_cast<double>(d.digit)));
  if (xi == 0.0 || max_digit == 0.0) return {{1.0, 0.0}, 0.0};
  int steps = 0;
  double seed = kTwoPi * max_digit * std::abs(xi) / (1.0 - rho);
  while (seed * kBoundSlack > tol / 2.0) {
    ++steps;
    seed *= rho;
  }
  CertifiedComplex out = detail::alternating_cocycle(digits, rho, xi, steps);
  double rounding = 0.0;
  double u = xi;
  for (int k = 1; k <= steps; ++k) {
    u *= rho;
    double entry = (kTwoPi * max_digit * std::abs(u) * (k + 3.0) + static_cast<double>(digits.size()) + 4.0) * kEps;
    rounding += 2.0 * entry + 6.0 * kEps;
  }
  out.error_bound = out.error_bound * kBoundSlack + 2.0 * rounding;
  return out;
}

}  // namespace

namespace detail {

CertifiedComplex alternating_cocycle(std::span<const SignedDigit> digits, double rho, double xi, int steps) {
  double max_digit = 0.0;
  for (const auto& d : digits) max_digit = std::max(max_digit, std::abs(static_cast<double>(d.digit)));
  const double n = static_cast<double>(digits.size());

  std::vector<double> u(static_cast<std::size_t>(steps) + 1);
  u[0] = xi;
  for (int k = 1; k <= steps; ++k) u[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k) - 1] * rho;

  std::complex<double> f0{1.0, 0.0}, f1{1.0, 0.0};
  for (int k = steps; k >= 1; --k) {
    const double uk = u[static_cast<std::size_t>(k)];
    std::complex<double> a{0.0, 0.0}, b{0.0, 0.0};
    for (const auto& d : digits) {
      double phase = static_cast<double>(d.digit) * uk;
      phase -= std::floor(phase);
      double angle = kTwoPi * phase;
      if (d.sign > 0)
        a += std::complex<double>(std::cos(angle), std::sin(angle));
      else
        b += std::complex<double>(std::cos(angle), -std::sin(angle));
    }
    a /= n;
    b /= n;
    std::complex<double> g0 = a * f0 + b * f1;
    std::complex<double> g1 = std::conj(b) * f0 + std::conj(a) * f1;
    f0 = g0;
    f1 = g1;
  }
  double seed = kTwoPi * max_digit * std::pow(rho, steps) * std::abs(xi) / (1.0 - rho);
  return {f0, seed};
}

}  // namespace detail

CertifiedComplex ft_discrete(const DigitSet& e, double xi) {
  require_finite(xi);
  const Mask mask(e);
  return {mask.eval(xi), 2.0 * mask.rounding(xi, 1.0)};
}

CertifiedComplex ft_discrete(const DigitSet& e, const Rational& xi) {
  if (auto z = mask_vanishes(e, xi); z && *z) return {{0.0, 0.0}, 0.0};
  return {mask_eval(e, xi), static_cast<double>(e.size() + 6) * kEps};
}

CertifiedComplex ft_self_similar(const SelfSimilarSpec& spec, double xi, double tol) {
  require_tol(tol);
  require_finite(xi);
  if (auto q = small_dyadic(xi)) {
    if (auto z = self_similar_exact_zero(spec, *q); z && *z) return {{0.0, 0.0}, 0.0};
  }
  return self_similar_numeric(spec, xi, tol);
}

CertifiedComplex ft_self_similar(const SelfSimilarSpec& spec, const Rational& xi, double tol) {
  require_tol(tol);
  if (auto z = self_similar_exact_zero(spec, xi); z && *z) return {{0.0, 0.0}, 0.0};
  const double approx = xi.to_double();
  CertifiedComplex out = self_similar_numeric(spec, approx, tol);
  // |mu^(a) - mu^(b)| <= 2 pi R |a - b| with R bounding the support.
  const double radius = support_radius_bound(spec.digits().max_abs().to_double(), spec.rho().to_double());
  out.error_bound += kTwoPi * radius * std::abs(approx) * kEps;
  return out;
}

CertifiedComplex ft_moran(const MoranSpec& spec, double xi, double tol) {
  require_tol(tol);
  require_finite(xi);
  if (auto q = small_dyadic(xi)) {
    if (auto z = moran_exact_zero(spec, *q); z && *z) return {{0.0, 0.0}, 0.0};
  }
  return moran_numeric(spec, xi, tol);
}

CertifiedComplex ft_moran(const MoranSpec& spec, const Rational& xi, double tol) {
  require_tol(tol);
  if (auto z = moran_exact_zero(spec, xi); z && *z) return {{0.0, 0.0}, 0.0};
  const double approx = xi.to_double();
  CertifiedComplex out = moran_numeric(spec, approx, tol);
  const double radius = support_radius(spec);
  out.error_bound += kTwoPi * radius * std::abs(approx) * kEps * 2.0;
  return out;
}

CertifiedComplex ft_alternating(const AlternatingSpec& spec, double xi, double tol) {
  require_tol(tol);
  require_finite(xi);
  auto digits = signed_digits(spec);
  return alternating_numeric(digits, spec.rho().to_double(), xi, tol);
}

CertifiedComplex ft_alternating(const SymmetricAlternatingSpec& spec, double xi, double tol) {
  require_tol(tol);
  require_finite(xi);
  auto digits = signed_digits(spec);
  return alternating_numeric(digits, spec.rho().to_double(), xi, tol);
}

CertifiedComplex fourier_transform(const MeasureSpec& spec, double xi, double tol) {
  return std::visit(
      [&](const auto& s) -> CertifiedComplex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelfSimilarSpec>)
          return ft_self_similar(s, xi, tol);
        else if constexpr (std::is_same_v<T, MoranSpec>)
          return ft_moran(s, xi, tol);
        else
          return ft_alternating(s, xi, tol);
      },
      spec);
}

CertifiedComplex fourier_transform(const MeasureSpec& spec, const Rational& xi, double tol) {
  return std::visit(
      [&](const auto& s) -> CertifiedComplex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelfSimilarSpec>) {
          return ft_self_similar(s, xi, tol);
        } else if constexpr (std::is_same_v<T, MoranSpec>) {
          return ft_moran(s, xi, tol);
        } else {
          if (auto z = exact_product_zero(spec, xi); z && *z) return CertifiedComplex{{0.0, 0.0}, 0.0};
          const double approx = xi.to_double();
          CertifiedComplex out = ft_alternating(s, approx, tol);
          double maxd = 0.0;
          for (const auto& d : signed_digits(s)) maxd = std::max(maxd, std::abs(static_cast<double>(d.digit)));
          out.error_bound += kTwoPi * support_radius_bound(maxd, s.rho().to_double()) * std::abs(approx) * kEps;
          return out;
        }
      },
      spec);
}

double support_radius(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelfSimilarSpec>) {
          return support_radius_bound(s.digits().max_abs().to_double(), s.rho().to_double());
        } else if constexpr (std::is_same_v<T, MoranSpec>) {
          double radius = 0.0, scale = 1.0;
          for (const auto& st : s.prefix()) {
            scale /= std::abs(st.b.to_double());
            radius += st.digits.max_abs().to_double() * scale;
          }
          if (!s.tail().empty()) {
            double period = 0.0, t = scale;
            for (const auto& st : s.tail()) {
              t /= std::abs(st.b.to_double());
              period += st.digits.max_abs().to_double() * t;
            }
            radius += period / (1.0 - std::abs(s.tail_period_product().reciprocal().to_double()));
          }
          return radius * (1.0 + 1e-12);
        } else {
          double maxd = 0.0;
          for (const auto& d : signed_digits(s)) maxd = std::max(maxd, std::abs(static_cast<double>(d.digit)));
          return support_radius_bound(maxd, s.rho().to_double());
        }
      },
      spec);
}

std::optional<bool> exact_product_zero(const MeasureSpec& spec, const Rational& xi) {
  if (const auto* ss = std::get_if<SelfSimilarSpec>(&spec)) return self_similar_exact_zero(*ss, xi);
  if (const auto* mo = std::get_if<MoranSpec>(&spec)) return moran_exact_zero(*mo, xi);
  if (const auto* alt = std::get_if<AlternatingSpec>(&spec)) {
    if (auto eq = equivalent_self_similar(*alt)) return self_similar_exact_zero(*eq, xi);
    return std::nullopt;
  }
  const auto& sym = std::get<SymmetricAlternatingSpec>(spec);
  return self_similar_exact_zero(SelfSimilarSpec(sym.rho(), DigitSet::consecutive(2 * sym.half_width() + 1)), xi);
}

namespace {

template <typename Lhs, typename Rhs>
IdentityReport compare_on_samples(std::size_t samples, double window, double tol, std::uint64_t seed, Lhs lhs,
                                  Rhs rhs) {
  require_tol(tol);
  if (!(window > 0.0)) throw DomainError("sample window must be positive");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-window, window);
  IdentityReport report;
  report.samples = samples;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double xi = dist(gen);
    auto [a, ea] = lhs(xi);
    auto [b, eb] = rhs(xi);
    const double dev = std::abs(a - b);
    const double allowed = tol + ea + eb;
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_xi = xi;
    }
    report.max_excess = std::max(report.max_excess, dev - allowed);
    if (dev > allowed) report.pass = false;
  }
  if (samples == 0) report.max_excess = 0.0;
  return report;
}

}  // namespace

IdentityReport verify_nu_equals_mu(long long m, long long N, const Rational& rho, std::size_t sample_count,
                                   double window, double tol, std::uint64_t seed) {
  const AlternatingSpec nu(rho, m, 2 * N * m);
  const SelfSimilarSpec mu(rho, alternate_digit_set(m, N, rho));
  return compare_on_samples(
      sample_count, window, tol, seed,
      [&](double xi) {
        auto r = ft_alternating(nu, xi, tol);
        return std::pair{r.value, r.error_bound};
      },
      [&](double xi) {
        auto r = ft_self_similar(mu, xi, tol);
        return std::pair{r.value, r.error_bound};
      });
}

IdentityReport verify_symmetric_example(long long n, const Rational& rho, std::size_t sample_count, double window,
                                        double tol, std::uint64_t seed) {
  const SymmetricAlternatingSpec nu(rho, n);
  const SelfSimilarSpec mu(rho, DigitSet::consecutive(2 * n + 1));
  const double r = rho.to_double();
  const double drift = static_cast<double>(n) * r / (1.0 - r);
  return compare_on_samples(
      sample_count, window, tol, seed,
      [&](double t) {
        auto v = ft_alternating(nu, t, tol);
        return std::pair{v.value, v.error_bound};
      },
      [&](double t) {
        auto v = ft_self_similar(mu, t, tol);
        const double angle = -kTwoPi * drift * t;
        const std::complex<double> phase{std::cos(angle), std::sin(angle)};
        const double phase_err = (std::abs(angle) * 4.0 + 4.0) * kEps;
        return std::pair{phase * v.value, v.error_bound + phase_err};
      });
}

std::vector<SweepRow> sweep_ft(const MeasureSpec& spec, double from, double to, std::size_t points, double tol,
                               unsigned threads) {
  require_tol(tol);
  std::vector<SweepRow> rows(points);
  auto abscissa = [&](std::size_t i) {
    if (points == 1) return from;
    return from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
  };
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double xi = abscissa(i);
      rows[i] = {xi, fourier_transform(spec, xi, tol)};
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(points, 1))));
  if (threads == 1) {
    work(0, points);
    return rows;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (points + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(points, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace fractspec
