#pragma once

// Permutations of the positive integers given by finite rules, the Lévy-group
// diagnostics (defect, displacement, ratio statistics) and the pairing
// constructions that swap the i-th elements of two disjoint sets.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "densitylab/asymptotics.hpp"
#include "densitylab/nset.hpp"
#include "densitylab/numeric.hpp"
#include "densitylab/sequence.hpp"

namespace densitylab {

class PermutationRule {
 public:
  enum class Kind {
    Identity,
    FiniteTable,
    InterlacedPairing,
    QuarterBlockSwap,
    Restricted,
    Compose,
    Inverse,
  };

  struct Node;

  PermutationRule();  // identity

  static PermutationRule identity();
  /// Product of disjoint cycles; (a b c) maps a→b→c→a.
  static PermutationRule from_cycles(const std::vector<std::vector<Integer>>& cycles);
  /// Swaps [4^j, 2·4^j) with [2·4^j, 3·4^j) by translation ±4^j for every j >= 1.
  static PermutationRule quarter_block_swap();
  /// n ↦ outer(inner(n)).
  static PermutationRule compose(PermutationRule outer, PermutationRule inner);
  static PermutationRule inverse(PermutationRule inner);

  Kind kind() const;

  Integer apply(const Integer& n) const;
  Integer invert(const Integer& m) const;

  std::string to_string() const;

  // InterlacedPairing / Restricted accessors.
  const SymbolicSet& pairing_a() const;         // A as given
  const SymbolicSet& pairing_b() const;         // B as given
  const SymbolicSet& disjoint_a() const;        // A' = A ∖ (A ∩ B)
  const SymbolicSet& disjoint_b() const;        // B' = B ∖ (A ∩ B)
  const PermutationRule& restricted_base() const;
  const SymbolicSet& restricted_input() const;  // F
  /// F' = A' ∩ (F ∪ φF) for a Restricted rule, as a predicate set.
  SymbolicSet restricted_core(const Integer& cap) const;
  /// E = F' ∪ φF', the set a Restricted rule fixes pointwise.
  SymbolicSet restricted_fixed(const Integer& cap) const;

  // Compose / Inverse operands.
  const PermutationRule& outer() const;
  const PermutationRule& inner() const;

 private:
  friend PermutationRule pairing_permutation(const SymbolicSet& a, const SymbolicSet& b);
  friend PermutationRule restrict_pairing(const PermutationRule& phi, const SymbolicSet& f);

  explicit PermutationRule(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// The involution φ fixing ℕ∖(A'∪B') and swapping a_i ↔ b_i, where
/// A' = A∖(A∩B) = {a_1 < a_2 < ...} and B' likewise. A' and B' must both be
/// declared infinite or finite with equal cardinality.
PermutationRule pairing_permutation(const SymbolicSet& a, const SymbolicSet& b);

/// ψ: identity on E = F' ∪ φF' with F' = A' ∩ (F ∪ φF), φ elsewhere.
PermutationRule restrict_pairing(const PermutationRule& phi, const SymbolicSet& f);

/// True when A, B, ℕ∖A and ℕ∖B are all declared infinite (the hypothesis
/// under which equal relative counts yield a Lévy permutation carrying A to B).
/// Throws UnknownInfinitude when any flag is unknown.
bool infinite_and_coinfinite(const SymbolicSet& a, const SymbolicSet& b);

/// π(1..horizon) and π⁻¹(1..horizon) as 64-bit tables; index 0 is unused and
/// values beyond 2^64 - 1 saturate. horizon <= enumeration_budget().
std::vector<std::uint64_t> forward_table(const PermutationRule& p, std::uint64_t horizon);
std::vector<std::uint64_t> inverse_table(const PermutationRule& p, std::uint64_t horizon);

// ---------------------------------------------------------------------------
// Lévy diagnostics

enum class LevyHint { LevyLikely, NonLevyLikely, Inconclusive };

const char* to_string(LevyHint h);

struct ClassificationThresholds {
  Rational levy_max{1, 100};  // multiplied by slack_factor
  Rational slack_factor{1};
  Rational non_levy_min{1, 10};
  std::size_t recurrence = 3;  // tail points at or above non_levy_min
  Integer min_horizon = 10000;
};

struct TailClassification {
  LevyHint hint = LevyHint::Inconclusive;
  Rational tail_max;
  std::size_t tail_points_above = 0;
  std::size_t tail_window = 0;
};

/// Classifies a nonnegative diagnostic that should vanish for Lévy permutations.
TailClassification classify_tail(const std::vector<Rational>& values, const Integer& horizon,
                                 const ClassificationThresholds& t,
                                 std::optional<std::size_t> tail_window = std::nullopt);

enum class DefectMode {
  Upward,             // n - |{m <= n : π⁻¹(m) <= n}|
  UpwardDirect,       // |{k <= n : π(k) > n}| from the forward table
  DownwardInclusive,  // |{k : π(k) <= n <= k}|
};

enum class ScanRoute { Auto, PerPoint, Sweep };

struct DefectProfile {
  std::string permutation;
  std::string sequence;
  DefectMode mode = DefectMode::Upward;
  std::vector<Integer> points;
  std::vector<Integer> crossings;  // n · defect
  std::vector<Rational> defects;
  TailClassification classification;
};

DefectProfile levy_defect_profile(const PermutationRule& p, const IndexSequence& seq,
                                  DefectMode mode = DefectMode::Upward,
                                  const ClassificationThresholds& thresholds = {},
                                  std::optional<std::size_t> tail_window = std::nullopt,
                                  ScanRoute route = ScanRoute::Auto);

/// (πA)(n) = |{m <= n : π⁻¹(m) ∈ A}| at every point.
std::vector<Integer> image_counts(const PermutationRule& p, const SymbolicSet& a,
                                  const IndexSequence& seq);

/// πA as a predicate set {m : π⁻¹(m) ∈ A}, enumerable up to `cap`.
SymbolicSet image_set(const PermutationRule& p, const SymbolicSet& a, const Integer& cap);

struct DisplacementEntry {
  Integer n;
  Integer count;        // A(n)
  Integer image_count;  // (πA)(n)
  Rational value;       // (A(n) - (πA)(n)) / n
};

/// Finite-horizon evidence only: a vanishing profile over one set never
/// certifies membership in the Lévy group.
std::vector<DisplacementEntry> displacement_profile(const PermutationRule& p, const SymbolicSet& a,
                                                    const IndexSequence& seq);

struct RatioStatReport {
  StatLimitReport table;  // statistics of π(n)/n against 1
  TailClassification classification;
};

RatioStatReport ratio_stat_report(const PermutationRule& p, const std::vector<Rational>& eps_grid,
                                  const IndexSequence& checkpoints,
                                  const ClassificationThresholds& thresholds = {});

struct ExceptionalSets {
  Rational eps;
  Integer horizon;
  SymbolicSet above;  // {k <= horizon : π(k) - k > eps·k}
  SymbolicSet below;  // {k <= horizon : k - π(k) > eps·k}
  Profile union_ratios;  // C(n)/n for C = above ∪ below
};

ExceptionalSets exceptional_sets(const PermutationRule& p, const Rational& eps,
                                 const Integer& horizon, const IndexSequence& checkpoints);

struct VanDouwenReport {
  Integer tail_start;
  Integer horizon;
  Rational sup_deviation;  // sup |π(n)/n - 1| over [tail_start, horizon]
  Integer argmax;
  Rational tol;
  bool holds = false;
};

VanDouwenReport van_douwen_ratio_report(const PermutationRule& p, const Integer& horizon,
                                        const Integer& tail_start, const Rational& tol);

/// {k : π(k) > k} as a predicate set with the given enumeration cap.
SymbolicSet levy_witness_set(const PermutationRule& p, const Integer& cap);

}  // namespace densitylab
