#pragma once

// Finitely additive density-measure surrogates built from limits along index
// sequences, their axiom and invariance checkers, and the counterexample
// suite around the double-exponential block set A = ⋃ [2^(2^i), 2·2^(2^i)).
//
// Every report is stamped with the sequences it was evaluated on; no value
// here is claimed to be a true ultrafilter limit.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "densitylab/asymptotics.hpp"
#include "densitylab/nset.hpp"
#include "densitylab/perm.hpp"
#include "densitylab/sequence.hpp"

namespace densitylab {

class MeasureRule {
 public:
  enum class Kind { SubsequenceLimit, BlumlingerCombo, Mixture };

  /// lim A(n)/n along `seq`.
  static MeasureRule subsequence_limit(IndexSequence seq);
  /// 2·lim A(2n)/(2n) − lim A(n)/n along `seq`.
  static MeasureRule blumlinger_combo(IndexSequence seq);
  /// Finite convex combination of primitive rules; weights positive, sum 1.
  static MeasureRule mixture(std::vector<std::pair<Rational, MeasureRule>> terms);

  Kind kind() const { return kind_; }
  const IndexSequence& sequence() const;
  const std::vector<std::pair<Rational, MeasureRule>>& terms() const;

  std::string to_string() const;

 private:
  MeasureRule() = default;

  Kind kind_ = Kind::SubsequenceLimit;
  std::shared_ptr<const IndexSequence> seq_;
  std::shared_ptr<const std::vector<std::pair<Rational, MeasureRule>>> terms_;
};

/// Counts A(n) at every point of a sequence. Lets image sets πA be measured
/// through inverse scans instead of materialization.
using CountProvider = std::function<std::vector<Integer>(const IndexSequence&)>;

CountProvider counts_of(const SymbolicSet& s);
CountProvider image_counts_of(const PermutationRule& p, const SymbolicSet& s);

struct MeasureReport {
  enum class Verdict { Value, Interval };

  std::string rule;
  Verdict verdict = Verdict::Interval;
  Rational value;  // Value
  Rational achieved_tol;
  Rational lo;  // Interval bounds (equal to value when Value)
  Rational hi;
  std::vector<Integer> points;     // evaluation points (primitive rules)
  std::vector<Rational> partials;  // per-point partial values (primitive rules)
  std::vector<LimitReport> constituents;
  std::vector<std::pair<Rational, MeasureReport>> terms;  // Mixture

  bool has_value() const { return verdict == Verdict::Value; }
};

MeasureReport evaluate(const MeasureRule& mu, const CountProvider& counts, const Rational& tol,
                       std::optional<std::size_t> tail_window = std::nullopt);
MeasureReport evaluate(const MeasureRule& mu, const SymbolicSet& a, const Rational& tol,
                       std::optional<std::size_t> tail_window = std::nullopt);

enum class CheckStatus { Pass, Fail, Inconclusive };

const char* to_string(CheckStatus s);

struct AxiomRow {
  std::string label;
  CheckStatus status = CheckStatus::Inconclusive;
  Rational deviation;
};

struct AxiomReport {
  std::string rule;
  Rational tol;
  AxiomRow normalization;             // |μ(ℕ) − 1|
  std::vector<AxiomRow> additivity;   // |μ(A ∪ B) − μ(A) − μ(B)| per disjoint pair
  std::vector<AxiomRow> extension;    // |μ(A) − d(A)| per set with a density
  CheckStatus additivity_status = CheckStatus::Inconclusive;
  CheckStatus extension_status = CheckStatus::Inconclusive;
  Rational max_additivity_deviation;
  Rational max_extension_deviation;
  bool passed = false;
};

struct DensitySet {
  SymbolicSet set;
  Rational density;
};

AxiomReport check_axioms(const MeasureRule& mu, const std::vector<DensitySet>& corpus,
                         const std::vector<std::pair<SymbolicSet, SymbolicSet>>& disjoint_pairs,
                         const Rational& tol);

struct InvarianceRow {
  std::string set;
  CheckStatus status = CheckStatus::Inconclusive;
  MeasureReport measure;
  MeasureReport image_measure;
  Rational deviation;
};

struct InvarianceReport {
  std::string rule;
  std::string permutation;
  Rational tol;
  std::vector<InvarianceRow> rows;
  Rational max_deviation;
  bool passed = false;
};

InvarianceReport check_invariance(const MeasureRule& mu, const PermutationRule& p,
                                  const std::vector<SymbolicSet>& corpus, const Rational& tol);

struct ViolationCertificate {
  std::string permutation;
  SymbolicSet witness;          // {k : π(k) > k}
  IndexSequence subsequence = IndexSequence::explicit_points({Integer(1)});
  Rational gap;                 // min defect over the subsequence
  std::vector<DisplacementEntry> profile;  // witness displacement at the subsequence
  DefectProfile defects;        // defect profile used to choose the points
};

struct ViolationOptions {
  std::optional<Integer> tail_start;  // default horizon / 10
  std::size_t points = 3;
  ClassificationThresholds thresholds;
};

/// For a permutation classified NonLevyLikely: the canonical witness set and
/// the largest defect local maxima in the tail. Throws NoViolationFound otherwise.
ViolationCertificate find_invariance_violation(const PermutationRule& p, const Integer& horizon,
                                               const ViolationOptions& options = {});

/// Recomputes min (A_w(n) − (πA_w)(n))/n over the certificate's points.
Rational recompute_gap(const ViolationCertificate& cert, const PermutationRule& p);

struct EqualMeasureReport {
  Integer horizon;
  Integer tail_start;
  Rational dense_tail_sup;  // sup |A(n) − B(n)|/n over [tail_start, horizon]
  Integer dense_argmax;
  std::vector<std::pair<std::string, Rational>> per_sequence;  // limit gap along each sequence (tail sup if it oscillates)
  Rational max_sequence_gap;
  Rational tol;
  bool equivalent_likely = false;
};

EqualMeasureReport equal_measure_test(const SymbolicSet& a, const SymbolicSet& b,
                                      const std::vector<IndexSequence>& seq_corpus,
                                      const Rational& tol, const Integer& horizon,
                                      const Integer& tail_start);

// ---------------------------------------------------------------------------
// Counterexample suite

struct SuiteConfig {
  unsigned long dexp_terms = 6;
  Rational tol{1, 1000};
  Integer ud_window_start = 1024;     // 2^10
  Integer ud_window_end = 1048576;    // 2^20
  std::uint64_t dominance_horizon = 1'000'000;
  std::uint64_t ratio_grid_horizon = 10'000;
};

struct SandwichCheck {
  std::string set;
  std::size_t points_checked = 0;
  bool holds = true;
  std::optional<Integer> first_failure;
};

struct PropertyRow {
  std::string rule;
  std::string pair;
  std::string property;  // "a" (monotonicity) or "b" (scaling)
  CheckStatus status = CheckStatus::Inconclusive;
  Rational lhs;
  Rational rhs;
};

struct SuiteReport {
  SuiteConfig config;
  std::string set_a;
  std::string set_2a;
  std::string set_b;

  // (1) combo measure of A versus its upper density
  std::vector<Integer> points;        // 2^(2^i), i = 1..K
  std::vector<Rational> combo_a;      // per-point partials
  MeasureReport mu_a;
  DensityReport ud_a;
  bool mu_exceeds_ud = false;

  // (2) combo measure of 2A and the scaling property
  std::vector<Rational> combo_2a;
  MeasureReport mu_2a;
  Rational half_mu_a;
  std::size_t ratio_grid_points = 0;
  bool ratio_identically_one = false;  // A(n) / (2A)(2n) = 1 on the grid
  bool scaling_violated = false;

  // (3) monotonicity
  std::uint64_t dominance_checked = 0;
  std::optional<std::uint64_t> dominance_failure;
  std::vector<std::pair<Integer, bool>> boundary_checks;  // 4·A(e_i) <= 3·e_i at e_i = 2·2^(2^i) − 1
  bool tail_bound_holds = false;
  Rational density_b;
  MeasureReport mu_b;
  Integer sample_n;
  Integer sample_b;
  Integer sample_a;
  bool monotonicity_violated = false;

  // (4) doubling sandwich at every evaluated point
  std::vector<SandwichCheck> sandwich;

  // (5) Lauwers-type mixtures on the same pairs
  std::vector<PropertyRow> mixture_rows;
};

SuiteReport counterexample_suite(const SuiteConfig& config = {});

}  // namespace densitylab
