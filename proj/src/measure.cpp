#include "densitylab/measure.hpp"

#include <algorithm>

#include "densitylab/error.hpp"
#include "densitylab/kernels.hpp"

namespace densitylab {

// ---------------------------------------------------------------------------
// Rules

MeasureRule MeasureRule::subsequence_limit(IndexSequence seq) {
  MeasureRule m;
  m.kind_ = Kind::SubsequenceLimit;
  m.seq_ = std::make_shared<const IndexSequence>(std::move(seq));
  return m;
}

MeasureRule MeasureRule::blumlinger_combo(IndexSequence seq) {
  MeasureRule m;
  m.kind_ = Kind::BlumlingerCombo;
  m.seq_ = std::make_shared<const IndexSequence>(std::move(seq));
  return m;
}

MeasureRule MeasureRule::mixture(std::vector<std::pair<Rational, MeasureRule>> terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::InvalidArgument, "mixture needs at least one term");
  }
  Rational total = 0;
  for (const auto& [w, rule] : terms) {
    if (w <= 0) throw Error(ErrorCode::InvalidArgument, "mixture weights must be positive");
    if (rule.kind() == Kind::Mixture) {
      throw Error(ErrorCode::InvalidArgument, "mixtures may only contain primitive rules");
    }
    total += w;
  }
  if (total != 1) {
    throw Error(ErrorCode::InvalidArgument, "mixture weights sum to " + total.get_str() + ", not 1");
  }
  MeasureRule m;
  m.kind_ = Kind::Mixture;
  m.terms_ = std::make_shared<const std::vector<std::pair<Rational, MeasureRule>>>(std::move(terms));
  return m;
}

const IndexSequence& MeasureRule::sequence() const {
  if (!seq_) throw Error(ErrorCode::InvalidArgument, "mixture has no single sequence");
  return *seq_;
}

const std::vector<std::pair<Rational, MeasureRule>>& MeasureRule::terms() const {
  if (!terms_) throw Error(ErrorCode::InvalidArgument, "rule is not a mixture");
  return *terms_;
}

std::string MeasureRule::to_string() const {
  switch (kind_) {
    case Kind::SubsequenceLimit: return "sublim(" + seq_->to_string() + ")";
    case Kind::BlumlingerCombo: return "combo(" + seq_->to_string() + ")";
    case Kind::Mixture: {
      std::string s = "mix(";
      for (std::size_t i = 0; i < terms_->size(); ++i) {
        if (i) s += ",";
        s += (*terms_)[i].first.get_str() + ":" + (*terms_)[i].second.to_string();
      }
      return s + ")";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Evaluation

CountProvider counts_of(const SymbolicSet& s) {
  return [s](const IndexSequence& seq) { return counts_along(s, seq); };
}

CountProvider image_counts_of(const PermutationRule& p, const SymbolicSet& s) {
  return [p, s](const IndexSequence& seq) { return image_counts(p, s, seq); };
}

namespace {

std::vector<Rational> ratios(const std::vector<Integer>& counts, const std::vector<Integer>& points) {
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out.push_back(make_rational(counts[i], points[i]));
  return out;
}

void set_verdict(MeasureReport& r, const LimitReport& partial) {
  r.achieved_tol = partial.achieved_tol;
  if (partial.converged()) {
    r.verdict = MeasureReport::Verdict::Value;
    r.value = partial.value;
    r.lo = r.hi = partial.value;
  } else {
    r.verdict = MeasureReport::Verdict::Interval;
    r.lo = partial.tail_inf;
    r.hi = partial.tail_sup;
  }
}

}  // namespace

MeasureReport evaluate(const MeasureRule& mu, const CountProvider& counts, const Rational& tol,
                       std::optional<std::size_t> tail_window) {
  MeasureReport r;
  r.rule = mu.to_string();
  switch (mu.kind()) {
    case MeasureRule::Kind::SubsequenceLimit: {
      const auto& seq = mu.sequence();
      auto points = seq.points();
      auto values = ratios(counts(seq), points);
      auto lim = limit_of_values(seq.to_string(), points, values, tol, tail_window);
      r.points = std::move(points);
      r.partials = std::move(values);
      set_verdict(r, lim);
      r.constituents.push_back(std::move(lim));
      return r;
    }
    case MeasureRule::Kind::BlumlingerCombo: {
      const auto& seq = mu.sequence();
      const auto doubled = IndexSequence::doubled(seq);
      auto points = seq.points();
      auto doubled_points = doubled.points();
      auto base = ratios(counts(seq), points);
      auto twice = ratios(counts(doubled), doubled_points);
      std::vector<Rational> partials;
      partials.reserve(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) partials.push_back(2 * twice[i] - base[i]);
      auto lim = limit_of_values(seq.to_string(), points, partials, tol, tail_window);
      set_verdict(r, lim);
      r.constituents.push_back(limit_of_values(seq.to_string(), points, base, tol, tail_window));
      r.constituents.push_back(
          limit_of_values(doubled.to_string(), doubled_points, twice, tol, tail_window));
      r.points = std::move(points);
      r.partials = std::move(partials);
      return r;
    }
    case MeasureRule::Kind::Mixture: {
      bool all_values = true;
      r.value = r.lo = r.hi = r.achieved_tol = 0;
      for (const auto& [w, term] : mu.terms()) {
        auto sub = evaluate(term, counts, tol, tail_window);
        all_values = all_values && sub.has_value();
        r.lo += w * sub.lo;
        r.hi += w * sub.hi;
        r.achieved_tol += w * sub.achieved_tol;
        r.value += w * (sub.has_value() ? sub.value : sub.lo);
        r.terms.emplace_back(w, std::move(sub));
      }
      r.verdict = all_values ? MeasureReport::Verdict::Value : MeasureReport::Verdict::Interval;
      if (all_values) r.lo = r.hi = r.value;
      return r;
    }
  }
  return r;
}

MeasureReport evaluate(const MeasureRule& mu, const SymbolicSet& a, const Rational& tol,
                       std::optional<std::size_t> tail_window) {
  return evaluate(mu, counts_of(a), tol, tail_window);
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

CheckStatus status_of(const Rational& deviation, const Rational& tol) {
  return deviation <= tol ? CheckStatus::Pass : CheckStatus::Fail;
}

CheckStatus aggregate(const std::vector<AxiomRow>& rows) {
  bool inconclusive = false;
  for (const auto& row : rows) {
    if (row.status == CheckStatus::Fail) return CheckStatus::Fail;
    inconclusive = inconclusive || row.status == CheckStatus::Inconclusive;
  }
  return inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
}

// Disjointness horizon for corpus pairs (closed form where available).
const Integer kDisjointnessHorizon = 1'000'000;

}  // namespace

AxiomReport check_axioms(const MeasureRule& mu, const std::vector<DensitySet>& corpus,
                         const std::vector<std::pair<SymbolicSet, SymbolicSet>>& disjoint_pairs,
                         const Rational& tol) {
  AxiomReport r;
  r.rule = mu.to_string();
  r.tol = tol;

  auto full = evaluate(mu, SymbolicSet::full(), tol);
  r.normalization.label = "full";
  if (full.has_value()) {
    r.normalization.deviation = abs(Rational(full.value - 1));
    r.normalization.status = status_of(r.normalization.deviation, tol);
  }

  r.max_additivity_deviation = 0;
  for (const auto& [a, b] : disjoint_pairs) {
    if (SymbolicSet::intersection_of(a, b).count(kDisjointnessHorizon) != 0) {
      throw Error(ErrorCode::InvalidArgument,
                  a.to_string() + " and " + b.to_string() + " are not disjoint");
    }
    AxiomRow row;
    row.label = a.to_string() + " + " + b.to_string();
    auto ma = evaluate(mu, a, tol);
    auto mb = evaluate(mu, b, tol);
    auto mab = evaluate(mu, SymbolicSet::union_of(a, b), tol);
    if (ma.has_value() && mb.has_value() && mab.has_value()) {
      row.deviation = abs(Rational(mab.value - ma.value - mb.value));
      row.status = status_of(row.deviation, tol);
      r.max_additivity_deviation = std::max(r.max_additivity_deviation, row.deviation);
    }
    r.additivity.push_back(std::move(row));
  }

  r.max_extension_deviation = 0;
  for (const auto& item : corpus) {
    AxiomRow row;
    row.label = item.set.to_string();
    auto m = evaluate(mu, item.set, tol);
    if (m.has_value()) {
      row.deviation = abs(Rational(m.value - item.density));
      row.status = status_of(row.deviation, tol);
      r.max_extension_deviation = std::max(r.max_extension_deviation, row.deviation);
    }
    r.extension.push_back(std::move(row));
  }

  r.additivity_status = aggregate(r.additivity);
  r.extension_status = aggregate(r.extension);
  r.passed = r.normalization.status == CheckStatus::Pass &&
             r.additivity_status == CheckStatus::Pass && r.extension_status == CheckStatus::Pass;
  return r;
}

InvarianceReport check_invariance(const MeasureRule& mu, const PermutationRule& p,
                                  const std::vector<SymbolicSet>& corpus, const Rational& tol) {
  InvarianceReport r;
  r.rule = mu.to_string();
  r.permutation = p.to_string();
  r.tol = tol;
  r.max_deviation = 0;
  bool all_pass = true;
  for (const auto& a : corpus) {
    InvarianceRow row;
    row.set = a.to_string();
    row.measure = evaluate(mu, counts_of(a), tol);
    row.image_measure = evaluate(mu, image_counts_of(p, a), tol);
    if (row.measure.has_value() && row.image_measure.has_value()) {
      row.deviation = abs(Rational(row.measure.value - row.image_measure.value));
      row.status = status_of(row.deviation, tol);
      r.max_deviation = std::max(r.max_deviation, row.deviation);
    }
    all_pass = all_pass && row.status == CheckStatus::Pass;
    r.rows.push_back(std::move(row));
  }
  r.passed = all_pass;
  return r;
}

// ---------------------------------------------------------------------------
// Violation certificates

ViolationCertificate find_invariance_violation(const PermutationRule& p, const Integer& horizon,
                                               const ViolationOptions& options) {
  if (horizon < 3) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 3");
  const Integer tail_start = options.tail_start.value_or(std::max(Integer(1), Integer(horizon / 10)));
  if (tail_start < 1 || tail_start >= horizon) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= tail start < horizon");
  }
  const auto window = require_u64(Integer(horizon - tail_start + 1), "tail window");
  auto defects = levy_defect_profile(p, IndexSequence::all(horizon), DefectMode::Upward,
                                     options.thresholds, window);
  if (defects.classification.hint != LevyHint::NonLevyLikely) {
    throw Error(ErrorCode::NoViolationFound,
                p.to_string() + " is " + to_string(defects.classification.hint) +
                    " (tail max defect " + defects.classification.tail_max.get_str() + ")");
  }

  // Strict local maxima of the defect inside the tail, strongest first.
  const auto& d = defects.defects;
  std::vector<std::size_t> maxima;
  const std::size_t first = require_u64(Integer(tail_start - 1), "tail index");
  for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < d.size(); ++i) {
    if (d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] > options.thresholds.non_levy_min) {
      maxima.push_back(i);
    }
  }
  if (maxima.size() < options.points) {
    throw Error(ErrorCode::NoViolationFound,
                "only " + std::to_string(maxima.size()) + " defect local maxima in the tail");
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });
  maxima.resize(options.points);
  std::sort(maxima.begin(), maxima.end());

  ViolationCertificate cert;
  cert.permutation = p.to_string();
  cert.witness = levy_witness_set(p, from_u64(enumeration_budget()));
  std::vector<Integer> pts;
  cert.gap = d[maxima.front()];
  for (auto i : maxima) {
    pts.push_back(defects.points[i]);
    cert.gap = std::min(cert.gap, d[i]);
  }
  cert.subsequence = IndexSequence::explicit_points(pts);
  cert.profile = displacement_profile(p, cert.witness, cert.subsequence);
  for (std::size_t k = 0; k < maxima.size(); ++k) {
    if (cert.profile[k].count - cert.profile[k].image_count != defects.crossings[maxima[k]]) {
      throw std::logic_error("witness identity failed at n = " + pts[k].get_str());
    }
  }
  cert.defects = std::move(defects);
  return cert;
}

Rational recompute_gap(const ViolationCertificate& cert, const PermutationRule& p) {
  auto profile = displacement_profile(p, cert.witness, cert.subsequence);
  Rational gap = profile.front().value;
  for (const auto& e : profile) gap = std::min(gap, e.value);
  return gap;
}

// ---------------------------------------------------------------------------
// Equal-measure test

EqualMeasureReport equal_measure_test(const SymbolicSet& a, const SymbolicSet& b,
                                      const std::vector<IndexSequence>& seq_corpus,
                                      const Rational& tol, const Integer& horizon,
                                      const Integer& tail_start) {
  if (tail_start < 1 || tail_start > horizon) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= tail start <= horizon");
  }
  EqualMeasureReport r;
  r.horizon = horizon;
  r.tail_start = tail_start;
  r.tol = tol;

  const std::uint64_t h = require_u64(horizon, "horizon");
  const std::uint64_t lo = require_u64(tail_start, "tail start");
  auto pa = kernels::prefix_counts(a.indicator(h));
  auto pb = kernels::prefix_counts(b.indicator(h));
  std::uint64_t best_gap = 0, best_n = lo;
  for (std::uint64_t n = lo; n <= h; ++n) {
    std::uint64_t gap = pa[n] > pb[n] ? pa[n] - pb[n] : pb[n] - pa[n];
    if (static_cast<unsigned __int128>(gap) * best_n >
        static_cast<unsigned __int128>(best_gap) * n) {
      best_gap = gap;
      best_n = n;
    }
  }
  r.dense_tail_sup = make_rational(from_u64(best_gap), from_u64(best_n));
  r.dense_argmax = from_u64(best_n);

  r.max_sequence_gap = 0;
  for (const auto& seq : seq_corpus) {
    auto ca = counts_along(a, seq);
    auto cb = counts_along(b, seq);
    auto points = seq.points();
    std::vector<Rational> gaps;
    for (std::size_t i = 0; i < points.size(); ++i) {
      gaps.push_back(abs(make_rational(ca[i] - cb[i], points[i])));
    }
    auto lim = limit_of_values(seq.to_string(), points, gaps, tol);
    Rational gap = lim.converged() ? lim.value : lim.tail_sup;
    r.max_sequence_gap = std::max(r.max_sequence_gap, gap);
    r.per_sequence.emplace_back(seq.to_string(), std::move(gap));
  }
  r.equivalent_likely = r.dense_tail_sup <= tol && r.max_sequence_gap <= tol;
  return r;
}

}  // namespace densitylab
