#include <algorithm>

#include "densitylab/error.hpp"
#include "densitylab/kernels.hpp"
#include "densitylab/measure.hpp"

namespace densitylab {

namespace {

IndexSequence gap_points(unsigned long k) {
  // 2^(3·2^(i-1)) sits strictly between the blocks ending at 2·2^(2^i) and
  // starting at 2^(2^(i+1)).
  std::vector<Integer> pts;
  for (unsigned long i = 2; i <= k + 1; ++i) pts.push_back(pow2(3UL << (i - 1)));
  return IndexSequence::explicit_points(std::move(pts));
}

SandwichCheck sandwich_at(const SymbolicSet& s, const std::vector<Integer>& points) {
  SandwichCheck c;
  c.set = s.to_string();
  for (const auto& n : points) {
    Integer a = s.count(n);
    Integer b = s.count(Integer(2 * n));
    ++c.points_checked;
    if (!(a <= b && b <= a + n)) {
      c.holds = false;
      if (!c.first_failure) c.first_failure = n;
    }
  }
  return c;
}

PropertyRow monotonicity_row(const MeasureRule& mu, const SymbolicSet& small, const SymbolicSet& big,
                             const Rational& tol) {
  PropertyRow row;
  row.rule = mu.to_string();
  row.pair = small.to_string() + " <= " + big.to_string();
  row.property = "a";
  auto ms = evaluate(mu, small, tol);
  auto mb = evaluate(mu, big, tol);
  if (ms.has_value() && mb.has_value()) {
    row.lhs = ms.value;
    row.rhs = mb.value;
    row.status = row.lhs <= row.rhs + tol ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return row;
}

PropertyRow scaling_row(const MeasureRule& mu, const SymbolicSet& s, const Rational& tol) {
  PropertyRow row;
  const auto doubled = scale(s, 2);
  row.rule = mu.to_string();
  row.pair = doubled.to_string() + " vs " + s.to_string();
  row.property = "b";
  auto m2 = evaluate(mu, doubled, tol);
  auto m1 = evaluate(mu, s, tol);
  if (m2.has_value() && m1.has_value()) {
    row.lhs = m2.value;
    row.rhs = m1.value / 2;
    row.status = abs(Rational(row.lhs - row.rhs)) <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return row;
}

}  // namespace

SuiteReport counterexample_suite(const SuiteConfig& config) {
  if (config.dexp_terms < 2) throw Error(ErrorCode::InvalidArgument, "suite needs dexp terms >= 2");
  SuiteReport r;
  r.config = config;
  const Rational& tol = config.tol;
  const unsigned long k = config.dexp_terms;

  const auto a = SymbolicSet::blocks(BlockSource::double_exponential());
  const auto a2 = scale(a, 2);
  const auto b = SymbolicSet::periodic(4, {1, 2, 3});
  r.set_a = a.to_string();
  r.set_2a = a2.to_string();
  r.set_b = b.to_string();

  const auto seq = IndexSequence::double_exponential(k);
  const auto combo = MeasureRule::blumlinger_combo(seq);

  // (1)
  r.points = seq.points();
  r.mu_a = evaluate(combo, a, tol);
  r.combo_a = r.mu_a.partials;
  r.ud_a = density(a, config.ud_window_end, config.ud_window_start, tol);
  r.mu_exceeds_ud = r.mu_a.has_value() && r.mu_a.value > r.ud_a.upper + tol;

  // (2)
  r.mu_2a = evaluate(combo, a2, tol);
  r.combo_2a = r.mu_2a.partials;
  r.half_mu_a = r.mu_a.value / 2;
  {
    const std::uint64_t h = config.ratio_grid_horizon;
    auto pa = kernels::prefix_counts(a.indicator(h));
    auto p2 = kernels::prefix_counts(a2.indicator(2 * h));
    bool same = true;
    for (std::uint64_t n = 1; n <= h; ++n) same = same && pa[n] == p2[2 * n];
    r.ratio_grid_points = h;
    r.ratio_identically_one = same;
  }
  r.scaling_violated = r.ratio_identically_one && r.mu_2a.has_value() && r.mu_a.has_value() &&
                       abs(Rational(r.mu_2a.value - r.half_mu_a)) > tol;

  // (3)
  {
    const std::uint64_t h = config.dominance_horizon;
    auto pa = kernels::prefix_counts(a.indicator(h));
    auto pb = kernels::prefix_counts(b.indicator(h));
    r.dominance_checked = h;
    for (std::uint64_t n = 1; n <= h; ++n) {
      if (pb[n] < pa[n]) {
        r.dominance_failure = n;
        break;
      }
    }
  }
  // A(n)/n peaks at the block ends e_i; B(n) >= 3n/4 everywhere.
  r.tail_bound_holds = true;
  for (unsigned long i = 1; i <= k; ++i) {
    Integer e = 2 * double_exp(i) - 1;
    bool ok = 4 * a.count(e) <= 3 * e;
    r.boundary_checks.emplace_back(e, ok);
    r.tail_bound_holds = r.tail_bound_holds && ok;
  }
  r.density_b = *b.exact_density();
  r.mu_b = evaluate(combo, b, tol);
  r.sample_n = from_u64(config.dominance_horizon);
  r.sample_b = b.count(r.sample_n);
  r.sample_a = a.count(r.sample_n);
  r.monotonicity_violated = !r.dominance_failure && r.tail_bound_holds && r.mu_b.has_value() &&
                            r.mu_a.has_value() && r.mu_b.value + tol < r.mu_a.value;

  // (4)
  {
    auto pts = seq.points();
    for (const auto& n : IndexSequence::doubled(seq).points()) pts.push_back(n);
    for (const auto& s : {a, a2, b}) r.sandwich.push_back(sandwich_at(s, pts));
  }

  // (5) A(n)/n moves by ~A(2^16)/2^16 while 2^16 is in the tail half, so the
  // plain-limit rules run two terms longer.
  {
    const auto longer = IndexSequence::double_exponential(k + 2);
    const auto mix =
        MeasureRule::mixture({{Rational(1, 2), MeasureRule::subsequence_limit(longer)},
                              {Rational(1, 2), MeasureRule::subsequence_limit(gap_points(k + 2))}});
    const auto probe = MeasureRule::subsequence_limit(IndexSequence::doubled(longer));
    for (const auto& mu : {combo, mix, probe}) {
      r.mixture_rows.push_back(monotonicity_row(mu, a, b, tol));
      r.mixture_rows.push_back(scaling_row(mu, a, tol));
      r.mixture_rows.push_back(scaling_row(mu, b, tol));
    }
  }
  return r;
}

}  // namespace densitylab
