#include "densitylab/sequence.hpp"

#include <algorithm>

#include "densitylab/error.hpp"
#include "densitylab/nset.hpp"

namespace densitylab {

IndexSequence IndexSequence::all(const Integer& horizon) {
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, "all(N) needs N >= 1");
  }
  IndexSequence s;
  s.kind_ = Kind::All;
  s.first_ = horizon;
  s.size_ = require_u64(horizon, "sequence horizon");
  return s;
}

IndexSequence IndexSequence::explicit_points(std::vector<Integer> points) {
  if (points.empty()) {
    throw Error(ErrorCode::InvalidArgument, "explicit sequence must be nonempty");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 1 || (i > 0 && points[i] <= points[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "explicit sequence must be strictly increasing and >= 1");
    }
  }
  IndexSequence s;
  s.kind_ = Kind::Explicit;
  s.size_ = points.size();
  s.explicit_ = std::move(points);
  return s;
}

IndexSequence IndexSequence::double_exponential(unsigned long count) {
  if (count == 0 || count > 20) {
    throw Error(ErrorCode::InvalidArgument, "dexp(K) needs 1 <= K <= 20");
  }
  IndexSequence s;
  s.kind_ = Kind::DoubleExponential;
  s.size_ = count;
  return s;
}

IndexSequence IndexSequence::doubled(IndexSequence inner) {
  IndexSequence s;
  s.kind_ = Kind::Doubled;
  s.size_ = inner.size();
  s.inner_ = std::make_shared<const IndexSequence>(std::move(inner));
  return s;
}

IndexSequence IndexSequence::geometric(const Integer& first, const Integer& ratio,
                                       unsigned long count) {
  if (first < 1 || ratio < 2 || count == 0) {
    throw Error(ErrorCode::InvalidArgument, "geom(first, ratio, K) needs first >= 1, ratio >= 2, K >= 1");
  }
  IndexSequence s;
  s.kind_ = Kind::Geometric;
  s.first_ = first;
  s.ratio_ = ratio;
  s.size_ = count;
  return s;
}

Integer IndexSequence::point(std::size_t i) const {
  if (i >= size_) {
    throw Error(ErrorCode::InvalidArgument, "sequence index out of range");
  }
  switch (kind_) {
    case Kind::All: return from_u64(i + 1);
    case Kind::Explicit: return explicit_[i];
    case Kind::DoubleExponential: return double_exp(i + 1);
    case Kind::Doubled: return 2 * inner_->point(i);
    case Kind::Geometric: {
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), ratio_.get_mpz_t(), i);
      return first_ * p;
    }
  }
  return 0;
}

void IndexSequence::require_profile_size() const {
  const std::uint64_t limit = std::min<std::uint64_t>(enumeration_budget(), kMaxProfilePoints);
  if (size_ > limit) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, from_u64(size_), from_u64(limit));
  }
}

std::vector<Integer> IndexSequence::points() const {
  require_profile_size();
  std::vector<Integer> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
  return out;
}

const IndexSequence& IndexSequence::inner() const {
  if (!inner_) {
    throw Error(ErrorCode::InvalidArgument, "sequence has no inner sequence");
  }
  return *inner_;
}

std::string IndexSequence::to_string() const {
  switch (kind_) {
    case Kind::All: return "all(" + first_.get_str() + ")";
    case Kind::Explicit: {
      std::string s = "explicit(";
      for (std::size_t i = 0; i < explicit_.size(); ++i) {
        if (i) s += ",";
        s += explicit_[i].get_str();
      }
      return s + ")";
    }
    case Kind::DoubleExponential: return "dexp(" + std::to_string(size_) + ")";
    case Kind::Doubled: return "doubled(" + inner_->to_string() + ")";
    case Kind::Geometric:
      return "geom(" + first_.get_str() + "," + ratio_.get_str() + "," + std::to_string(size_) +
             ")";
  }
  return "";
}

}  // namespace densitylab
