#pragma once

#include <memory>
#include <string>
#include <vector>

#include "densitylab/numeric.hpp"

namespace densitylab {

/// Profiles keep one exact value per point, so a sequence may have at most
/// min(enumeration budget, kMaxProfilePoints) points when materialized.
inline constexpr std::size_t kMaxProfilePoints = std::size_t{1} << 22;

/// A strictly increasing list of evaluation points n >= 1. Limits "along" a
/// sequence stand in for limits along a free ultrafilter containing it.
class IndexSequence {
 public:
  enum class Kind { All, Explicit, DoubleExponential, Doubled, Geometric };

  /// 1, 2, ..., horizon.
  static IndexSequence all(const Integer& horizon);
  static IndexSequence explicit_points(std::vector<Integer> points);
  /// 2^(2^i) for i = 1..count.
  static IndexSequence double_exponential(unsigned long count);
  /// Pointwise 2·n over `inner`.
  static IndexSequence doubled(IndexSequence inner);
  /// first, first·ratio, ..., first·ratio^(count-1).
  static IndexSequence geometric(const Integer& first, const Integer& ratio, unsigned long count);

  Kind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  Integer point(std::size_t i) const;
  /// Throws BudgetError beyond the profile size limit.
  std::vector<Integer> points() const;
  void require_profile_size() const;
  Integer last() const { return point(size_ - 1); }

  const IndexSequence& inner() const;

  std::string to_string() const;

 private:
  IndexSequence() = default;

  Kind kind_ = Kind::Explicit;
  std::size_t size_ = 0;
  Integer first_;   // All: horizon; Geometric: first
  Integer ratio_;   // Geometric
  std::vector<Integer> explicit_;
  std::shared_ptr<const IndexSequence> inner_;
};

}  // namespace densitylab
