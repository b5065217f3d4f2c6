#pragma once

// Symbolic subsets of the positive integers with exact membership, counting
// A(n) = |A ∩ [1, n]|, selection of the k-th element and scaling by t.
//
// Values are immutable handles; copying shares the underlying node. All
// operations are pure and may be called concurrently.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/numeric.hpp"

namespace densitylab {

/// Half-open interval [lo, hi) of positive integers.
struct Interval {
  Integer lo;
  Integer hi;
};

/// Whether a set is known to be finite or infinite. Algebra nodes propagate
/// this conservatively; callers that need infinitude reject Unknown.
enum class Extent { Finite, Infinite, Unknown };

const char* to_string(Extent e);

/// Default cap on elements enumerated when no closed form applies.
inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t budget);

class BlockSource {
 public:
  /// Sorted, disjoint, nonempty half-open intervals with lo >= 1.
  static BlockSource explicit_blocks(std::vector<Interval> intervals);
  /// Interval i is [2^(2^i), 2·2^(2^i)) for i = 1, 2, ...
  static BlockSource double_exponential();

  bool is_double_exponential() const { return dexp_; }
  const std::vector<Interval>& explicit_intervals() const { return intervals_; }

  /// The i-th double-exponential interval (i >= 1).
  static Interval double_exponential_interval(unsigned long i);

  /// All intervals with lo <= n, in increasing order.
  std::vector<Interval> intervals_upto(const Integer& n) const;

  bool contains(const Integer& n) const;

 private:
  BlockSource() = default;
  bool dexp_ = false;
  std::vector<Interval> intervals_;
};

using MembershipRule = std::function<bool(const Integer&)>;

class SymbolicSet {
 public:
  enum class Kind {
    Empty,
    Full,
    FiniteList,
    Periodic,
    Blocks,
    Scaled,
    Predicate,
    Union,
    Intersect,
    Diff,
    Complement,
  };

  struct Node;

  /// The empty set; also the value of a default-constructed handle.
  SymbolicSet();

  static SymbolicSet empty();
  static SymbolicSet full();
  /// Elements must be >= 1; they are sorted and deduplicated.
  static SymbolicSet finite(std::vector<Integer> elements);
  /// {n >= 1 : n mod m ∈ residues}; residues must be distinct and < m.
  static SymbolicSet periodic(std::uint64_t modulus, std::vector<std::uint64_t> residues);
  static SymbolicSet blocks(BlockSource source);
  /// Membership by rule; counting beyond `cap` raises PredicateCapExceeded.
  static SymbolicSet predicate(MembershipRule rule, Integer cap, std::string label,
                               Extent extent = Extent::Unknown);

  /// Smart constructors; apply exact canonical simplifications.
  static SymbolicSet union_of(const SymbolicSet& a, const SymbolicSet& b);
  static SymbolicSet intersection_of(const SymbolicSet& a, const SymbolicSet& b);
  static SymbolicSet difference_of(const SymbolicSet& a, const SymbolicSet& b);
  static SymbolicSet complement_of(const SymbolicSet& a);

  Kind kind() const;
  Extent extent() const;

  bool contains(const Integer& n) const;
  /// A(n) = |S ∩ [1, n]|; zero for n <= 0.
  Integer count(const Integer& n) const;
  /// The k-th smallest element (k >= 1).
  Integer select(const Integer& k) const;

  /// Closed-form asymptotic density, when one is known.
  std::optional<Rational> exact_density() const;

  /// Largest element bound for sets known to be finite.
  std::optional<Integer> upper_bound() const;

  /// Maximal runs of consecutive members meeting [1, n], when the set has
  /// interval structure (finite lists, blocks).
  std::optional<std::vector<Interval>> runs_upto(const Integer& n) const;

  /// Membership bytes for 0..horizon (index 0 is always 0). Requires
  /// horizon <= enumeration_budget().
  std::vector<std::uint8_t> indicator(std::uint64_t horizon) const;

  /// Expression in the set grammar (predicates render as `pred<label>`).
  std::string to_string() const;

  // Structural accessors, valid for the matching kind (elements() also for Empty).
  const std::vector<Integer>& elements() const;
  std::uint64_t modulus() const;
  const std::vector<std::uint64_t>& residues() const;
  const BlockSource& block_source() const;
  std::uint64_t factor() const;
  const SymbolicSet& left() const;   // Scaled/Complement inner, or the left operand
  const SymbolicSet& right() const;
  const Integer& predicate_cap() const;

 private:
  friend SymbolicSet scale(const SymbolicSet& s, std::uint64_t t);

  explicit SymbolicSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static SymbolicSet scaled_node(std::uint64_t t, const SymbolicSet& s);

  std::shared_ptr<const Node> node_;
};

/// {t·a : a ∈ S}; scale(S, 1) is S itself.
SymbolicSet scale(const SymbolicSet& s, std::uint64_t t);

}  // namespace densitylab
