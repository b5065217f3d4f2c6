#include "densitylab/asymptotics.hpp"

#include <algorithm>

#include "densitylab/error.hpp"
#include "densitylab/kernels.hpp"

namespace densitylab {

namespace {

// Sequences this long (and within budget) are profiled from one indicator sweep.
constexpr std::size_t kMaterializeThreshold = 1024;

void require_nonempty(const IndexSequence& seq) {
  if (seq.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty index sequence");
  }
  seq.require_profile_size();
}

}  // namespace

std::vector<Integer> counts_along(const SymbolicSet& s, const IndexSequence& seq,
                                  ProfileRoute route) {
  require_nonempty(seq);
  const Integer last = seq.last();
  if (route == ProfileRoute::Auto) {
    route = (seq.size() >= kMaterializeThreshold && last <= from_u64(enumeration_budget()))
                ? ProfileRoute::Materialized
                : ProfileRoute::ClosedForm;
  }
  std::vector<Integer> out;
  out.reserve(seq.size());
  if (route == ProfileRoute::ClosedForm) {
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(s.count(seq.point(i)));
    return out;
  }
  auto bytes = s.indicator(require_u64(last, "profile horizon"));
  auto prefix = kernels::prefix_counts(bytes);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out.push_back(from_u64(prefix[require_u64(seq.point(i), "point")]));
  }
  return out;
}

Profile ratio_profile(const SymbolicSet& s, const IndexSequence& seq, ProfileRoute route) {
  auto counts = counts_along(s, seq, route);
  Profile out;
  out.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    Integer n = seq.point(i);
    Rational q = make_rational(counts[i], n);
    out.push_back({std::move(n), std::move(q)});
  }
  return out;
}

std::size_t default_tail_window(std::size_t size) { return (size + 1) / 2; }

LimitReport limit_of_values(std::string sequence, std::vector<Integer> points,
                            std::vector<Rational> values, const Rational& tol,
                            std::optional<std::size_t> tail_window) {
  if (values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "limit of an empty profile");
  }
  LimitReport r;
  r.sequence = std::move(sequence);
  r.tail_window = std::min(values.size(), std::max<std::size_t>(
                                              1, tail_window.value_or(default_tail_window(values.size()))));
  auto first = values.end() - static_cast<std::ptrdiff_t>(r.tail_window);
  auto [lo, hi] = std::minmax_element(first, values.end());
  r.tail_inf = *lo;
  r.tail_sup = *hi;
  r.achieved_tol = r.tail_sup - r.tail_inf;
  r.value = values.back();
  r.verdict = r.achieved_tol <= tol ? LimitReport::Verdict::Converged
                                    : LimitReport::Verdict::Oscillating;
  r.points = std::move(points);
  r.values = std::move(values);
  return r;
}

LimitReport limit_along(const SymbolicSet& s, const IndexSequence& seq, const Rational& tol,
                        std::optional<std::size_t> tail_window) {
  auto profile = ratio_profile(s, seq);
  std::vector<Integer> points;
  std::vector<Rational> values;
  points.reserve(profile.size());
  values.reserve(profile.size());
  for (auto& e : profile) {
    points.push_back(std::move(e.n));
    values.push_back(std::move(e.value));
  }
  return limit_of_values(seq.to_string(), std::move(points), std::move(values), tol, tail_window);
}

WindowExtrema ratio_extrema_dense(const SymbolicSet& s, const Integer& lo, const Integer& hi) {
  if (lo < 1 || lo > hi) {
    throw Error(ErrorCode::InvalidArgument, "window must satisfy 1 <= lo <= hi");
  }
  const std::uint64_t a = require_u64(lo, "window start");
  const std::uint64_t b = require_u64(hi, "window end");
  auto bytes = s.indicator(b);
  auto prefix = kernels::prefix_counts(bytes);
  // Track the extrema as (count, n) pairs compared by cross-multiplication.
  std::uint64_t min_c = prefix[a], min_n = a, max_c = prefix[a], max_n = a;
  for (std::uint64_t n = a + 1; n <= b; ++n) {
    const auto c = static_cast<unsigned __int128>(prefix[n]);
    if (c * min_n < static_cast<unsigned __int128>(min_c) * n) {
      min_c = prefix[n];
      min_n = n;
    }
    if (c * max_n > static_cast<unsigned __int128>(max_c) * n) {
      max_c = prefix[n];
      max_n = n;
    }
  }
  return {make_rational(from_u64(min_c), from_u64(min_n)),
          make_rational(from_u64(max_c), from_u64(max_n)), from_u64(min_n), from_u64(max_n)};
}

std::optional<WindowExtrema> ratio_extrema_runs(const SymbolicSet& s, const Integer& lo,
                                                const Integer& hi) {
  if (lo < 1 || lo > hi) {
    throw Error(ErrorCode::InvalidArgument, "window must satisfy 1 <= lo <= hi");
  }
  auto runs = s.runs_upto(hi);
  if (!runs) return std::nullopt;
  std::vector<Integer> candidates{lo, hi};
  for (const auto& iv : *runs) {
    for (Integer c : {Integer(iv.lo - 1), Integer(iv.hi - 1)}) {
      if (c >= lo && c <= hi) candidates.push_back(c);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::optional<WindowExtrema> out;
  for (const auto& n : candidates) {
    Rational q = make_rational(s.count(n), n);
    if (!out) {
      out = WindowExtrema{q, q, n, n};
      continue;
    }
    if (q < out->inf) {
      out->inf = q;
      out->argmin = n;
    }
    if (q > out->sup) {
      out->sup = q;
      out->argmax = n;
    }
  }
  return out;
}

DensityReport density(const SymbolicSet& s, const Integer& horizon, const Integer& tail_start,
                      const Rational& tol) {
  if (tail_start < 1 || tail_start >= horizon) {
    throw Error(ErrorCode::InvalidArgument, "density needs 1 <= tail start < horizon");
  }
  DensityReport r;
  r.exact = s.exact_density();
  r.horizon = horizon;
  r.tail_start = tail_start;
  r.tol = tol;
  std::optional<WindowExtrema> ext;
  if (auto runs = ratio_extrema_runs(s, tail_start, horizon)) {
    ext = std::move(runs);
    r.route = "runs";
  } else {
    ext = ratio_extrema_dense(s, tail_start, horizon);
    r.route = "dense";
  }
  r.lower = ext->inf;
  r.upper = ext->sup;
  r.argmin = ext->argmin;
  r.argmax = ext->argmax;
  return r;
}

StatLimitReport statistical_limit(const IndexRule& x, const Rational& limit,
                                  const std::vector<Rational>& eps_grid,
                                  const IndexSequence& checkpoints, const Rational& slack,
                                  std::optional<std::size_t> tail_window) {
  require_nonempty(checkpoints);
  if (eps_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "statistical limit needs a nonempty eps grid");
  }
  for (const auto& e : eps_grid) {
    if (e <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  }
  StatLimitReport r;
  r.limit = limit;
  r.checkpoints_spec = checkpoints.to_string();
  r.checkpoints = checkpoints.points();
  r.slack = slack;
  const Integer& horizon = r.checkpoints.back();
  const Integer budget = from_u64(enumeration_budget());
  if (horizon > budget) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, horizon, budget);
  }
  const std::uint64_t last = require_u64(horizon, "horizon");

  std::vector<std::uint64_t> running(eps_grid.size(), 0);
  for (const auto& e : eps_grid) r.rows.push_back(StatRow{e, {}, {}, 0});
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= last; ++n) {
    const Integer nn = from_u64(n);
    Rational dev = abs(Rational(x(nn) - limit));
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
      if (dev >= eps_grid[j]) ++running[j];
    }
    while (next < r.checkpoints.size() && r.checkpoints[next] == nn) {
      for (std::size_t j = 0; j < eps_grid.size(); ++j) {
        r.rows[j].exceptions.push_back(from_u64(running[j]));
        r.rows[j].densities.push_back(make_rational(from_u64(running[j]), nn));
      }
      ++next;
    }
  }

  r.tail_window = std::min(r.checkpoints.size(),
                           std::max<std::size_t>(1, tail_window.value_or(
                                                        default_tail_window(r.checkpoints.size()))));
  r.convergent_likely = true;
  for (auto& row : r.rows) {
    auto first = row.densities.end() - static_cast<std::ptrdiff_t>(r.tail_window);
    row.tail_max = *std::max_element(first, row.densities.end());
    if (row.tail_max > slack) r.convergent_likely = false;
  }
  return r;
}

FridyWitness full_density_witness(const IndexRule& x, const Rational& limit,
                                  const Integer& horizon, const std::vector<Rational>& eps_schedule,
                                  const WitnessOptions& options) {
  if (horizon < 10) {
    throw Error(ErrorCode::InvalidArgument, "witness horizon must be >= 10");
  }
  if (eps_schedule.empty()) {
    throw Error(ErrorCode::InvalidArgument, "eps schedule must be nonempty");
  }
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    if (eps_schedule[j] <= 0 || (j > 0 && eps_schedule[j] >= eps_schedule[j - 1])) {
      throw Error(ErrorCode::InvalidArgument, "eps schedule must be positive and decreasing");
    }
  }
  const Integer budget = from_u64(enumeration_budget());
  if (horizon > budget) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, horizon, budget);
  }

  FridyWitness w;
  w.stage_eps = eps_schedule;
  const std::size_t stages = eps_schedule.size();
  // n_j = ceil(horizon / ratio^(J - j)); the last stage ends at the horizon.
  for (std::size_t j = 1; j <= stages; ++j) {
    Integer p;
    mpz_pow_ui(p.get_mpz_t(), options.stage_ratio.get_mpz_t(), stages - j);
    w.stage_bounds.push_back(ceil_div(horizon, p));
  }
  w.stage_max_deviation.assign(stages, Rational(0));

  std::vector<Integer> kept;
  std::size_t stage = 0;
  const std::uint64_t last = require_u64(horizon, "horizon");
  for (std::uint64_t n = 1; n <= last; ++n) {
    const Integer nn = from_u64(n);
    while (nn > w.stage_bounds[stage]) ++stage;
    Rational dev = abs(Rational(x(nn) - limit));
    if (dev >= eps_schedule[stage]) continue;
    kept.push_back(nn);
    if (dev > w.stage_max_deviation[stage]) w.stage_max_deviation[stage] = dev;
  }
  w.size = static_cast<unsigned long>(kept.size());
  w.ratio = make_rational(w.size, horizon);
  w.witness = SymbolicSet::finite(std::move(kept));
  if (w.ratio < options.floor) {
    throw Error(ErrorCode::WitnessTooSparse,
                "witness ratio " + w.ratio.get_str() + " below floor " + options.floor.get_str());
  }
  return w;
}

}  // namespace densitylab
