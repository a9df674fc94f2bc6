#include "fractspec/measure.hpp"

namespace fractspec {

namespace {

void require_ratio(const Rational& rho) {
  if (rho <= Rational(0) || rho >= Rational(1)) throw DomainError("contraction ratio must lie in (0, 1), got " + rho.to_string());
}

std::optional<ZeroSetExpr> self_similar_zero_set(const SelfSimilarSpec& spec) {
  auto mask = mask_zero_set(spec.digits());
  if (!mask) return std::nullopt;
  std::vector<ZeroSetComponent> comps;
  for (auto c : mask->components()) {
    c.dilation = DilationFamily{spec.rho().reciprocal(), 1};
    comps.push_back(std::move(c));
  }
  return ZeroSetExpr(std::move(comps));
}

}  // namespace

SelfSimilarSpec::SelfSimilarSpec(Rational rho, DigitSet digits) : rho_(std::move(rho)), digits_(std::move(digits)) {
  require_ratio(rho_);
}

AlternatingSpec::AlternatingSpec(Rational rho, long long period, long long digit_count)
    : rho_(std::move(rho)), period_(period), digit_count_(digit_count) {
  require_ratio(rho_);
  if (period_ < 1 || digit_count_ < 1) throw DomainError("alternating spec needs m, n >= 1");
  if (digit_count_ % period_ != 0) throw DomainError("alternating spec needs m | n");
}

std::optional<long long> AlternatingSpec::half_block_count() const {
  long long blocks = digit_count_ / period_;
  if (blocks % 2 != 0) return std::nullopt;
  return blocks / 2;
}

SymmetricAlternatingSpec::SymmetricAlternatingSpec(Rational rho, long long half_width)
    : rho_(std::move(rho)), half_width_(half_width) {
  require_ratio(rho_);
  if (half_width_ < 1) throw DomainError("symmetric alternating spec needs n >= 1");
}

MoranSpec::MoranSpec(std::vector<MoranStage> prefix, std::vector<MoranStage> tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (const auto* stages : {&prefix_, &tail_})
    for (const auto& s : *stages)
      if (s.b.is_zero()) throw DomainError("Moran factor b must be nonzero");
  // With a periodic tail, sum_k max|R_k| / |b_1 ... b_k| converges iff the
  // period product exceeds 1 in absolute value.
  if (!tail_.empty() && tail_period_product().abs() <= Rational(1))
    throw DomainError("divergent Moran tail: |product of b over one period| must exceed 1");
}

Rational MoranSpec::tail_period_product() const {
  Rational p(1);
  for (const auto& s : tail_) p *= s.b;
  return p;
}

std::vector<SignedDigit> signed_digits(const AlternatingSpec& spec) {
  std::vector<SignedDigit> out;
  for (long long d = 0; d < spec.digit_count(); ++d)
    out.push_back({d, ((d / spec.period()) % 2 == 0) ? 1 : -1});
  return out;
}

std::vector<SignedDigit> signed_digits(const SymmetricAlternatingSpec& spec) {
  std::vector<SignedDigit> out;
  for (long long d = -spec.half_width(); d <= spec.half_width(); ++d) out.push_back({d, (d % 2 == 0) ? 1 : -1});
  return out;
}

std::optional<SelfSimilarSpec> equivalent_self_similar(const AlternatingSpec& spec) {
  auto N = spec.half_block_count();
  if (!N) return std::nullopt;
  return SelfSimilarSpec(spec.rho(), alternate_digit_set(spec.period(), *N, spec.rho()));
}

std::optional<ZeroSetExpr> measure_zero_set(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::optional<ZeroSetExpr> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelfSimilarSpec>) {
          return self_similar_zero_set(s);
        } else if constexpr (std::is_same_v<T, AlternatingSpec>) {
          auto eq = equivalent_self_similar(s);
          if (!eq) return std::nullopt;
          return self_similar_zero_set(*eq);
        } else if constexpr (std::is_same_v<T, SymmetricAlternatingSpec>) {
          return self_similar_zero_set(SelfSimilarSpec(s.rho(), DigitSet::consecutive(2 * s.half_width() + 1)));
        } else {
          // Z = union_n (b_1 ... b_n) Z(m_{R_n}); the tail repeats with the period product.
          std::vector<ZeroSetComponent> comps;
          Rational cumulative(1);
          for (const auto& stage : s.prefix()) {
            cumulative *= stage.b;
            auto z = mask_zero_set(stage.digits);
            if (!z) return std::nullopt;
            for (const auto& c : z->components()) {
              ZeroSetComponent scaled;
              for (const auto& a : c.atoms) scaled.atoms.push_back(scale_atom(a, cumulative));
              comps.push_back(std::move(scaled));
            }
          }
          if (!s.tail().empty()) {
            const Rational period = s.tail_period_product();
            for (const auto& stage : s.tail()) {
              cumulative *= stage.b;
              auto z = mask_zero_set(stage.digits);
              if (!z) return std::nullopt;
              for (const auto& c : z->components()) {
                ZeroSetComponent scaled;
                for (const auto& a : c.atoms) scaled.atoms.push_back(scale_atom(a, cumulative));
                scaled.dilation = DilationFamily{period, 0};
                comps.push_back(std::move(scaled));
              }
            }
          }
          return ZeroSetExpr(std::move(comps));
        }
      },
      spec);
}

}  // namespace fractspec
