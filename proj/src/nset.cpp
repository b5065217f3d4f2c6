#include "densitylab/nset.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <variant>

#include "densitylab/error.hpp"
#include "densitylab/kernels.hpp"

namespace densitylab {

namespace {

std::atomic<std::uint64_t> g_budget{kDefaultEnumerationBudget};

// Periodic merges beyond this modulus stay symbolic.
constexpr std::uint64_t kMaxMergedModulus = 1U << 20;

// Recursion bound for closed-form intersection counting.
constexpr int kMaxClosedFormDepth = 6;

void require_within_budget(const Integer& horizon) {
  const Integer limit = from_u64(enumeration_budget());
  if (horizon > limit) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, horizon, limit);
  }
}

}  // namespace

const char* to_string(Extent e) {
  switch (e) {
    case Extent::Finite: return "finite";
    case Extent::Infinite: return "infinite";
    case Extent::Unknown: return "unknown";
  }
  return "unknown";
}

std::uint64_t enumeration_budget() { return g_budget.load(std::memory_order_relaxed); }

void set_enumeration_budget(std::uint64_t budget) {
  g_budget.store(budget, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// BlockSource

BlockSource BlockSource::explicit_blocks(std::vector<Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (iv.lo < 1 || iv.lo >= iv.hi) {
      throw Error(ErrorCode::InvalidArgument,
                  "block [" + iv.lo.get_str() + "," + iv.hi.get_str() + ") is empty or below 1");
    }
    if (i > 0 && intervals[i - 1].hi > iv.lo) {
      throw Error(ErrorCode::InvalidArgument, "blocks must be sorted and disjoint");
    }
  }
  BlockSource b;
  b.intervals_ = std::move(intervals);
  return b;
}

BlockSource BlockSource::double_exponential() {
  BlockSource b;
  b.dexp_ = true;
  return b;
}

Interval BlockSource::double_exponential_interval(unsigned long i) {
  Integer lo = double_exp(i);
  Integer hi = 2 * lo;
  return {std::move(lo), std::move(hi)};
}

std::vector<Interval> BlockSource::intervals_upto(const Integer& n) const {
  std::vector<Interval> out;
  if (!dexp_) {
    for (const auto& iv : intervals_) {
      if (iv.lo > n) break;
      out.push_back(iv);
    }
    return out;
  }
  for (unsigned long i = 1;; ++i) {
    // 2^(2^i) <= n requires 2^i <= log2(n).
    if (n < 4 || (1UL << i) > mpz_sizeinbase(n.get_mpz_t(), 2) - 1) break;
    out.push_back(double_exponential_interval(i));
  }
  return out;
}

bool BlockSource::contains(const Integer& n) const {
  if (n < 1) return false;
  if (dexp_) {
    // n ∈ [2^(2^i), 2^(2^i+1)) iff floor(log2 n) = 2^i with i >= 1.
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;
    return bits >= 2 && (bits & (bits - 1)) == 0;
  }
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), n,
                             [](const Integer& v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return n < it->hi;
}

// ---------------------------------------------------------------------------
// Nodes

struct SymbolicSet::Node {
  struct EmptyN {};
  struct FullN {};
  struct FiniteN {
    std::vector<Integer> elements;
  };
  struct PeriodicN {
    std::uint64_t modulus;
    std::vector<std::uint64_t> residues;
  };
  struct BlocksN {
    BlockSource source;
  };
  struct ScaledN {
    std::uint64_t factor;
    SymbolicSet inner;
  };
  struct PredicateN {
    MembershipRule rule;
    Integer cap;
    std::string label;
    Extent extent;
  };
  struct UnionN {
    SymbolicSet a, b;
  };
  struct IntersectN {
    SymbolicSet a, b;
  };
  struct DiffN {
    SymbolicSet a, b;
  };
  struct ComplementN {
    SymbolicSet inner;
  };

  using Variant = std::variant<EmptyN, FullN, FiniteN, PeriodicN, BlocksN, ScaledN, PredicateN,
                               UnionN, IntersectN, DiffN, ComplementN>;
  Variant v;
  Extent extent = Extent::Unknown;
};

namespace {

using Node = SymbolicSet::Node;

template <class T>
const T* as(const std::shared_ptr<const Node>& n) {
  return std::get_if<T>(&n->v);
}

}  // namespace

SymbolicSet::SymbolicSet()
    : node_(std::make_shared<const Node>(Node{Node::EmptyN{}, Extent::Finite})) {}

SymbolicSet SymbolicSet::empty() { return SymbolicSet(); }

SymbolicSet SymbolicSet::full() {
  static const SymbolicSet f(std::make_shared<const Node>(Node{Node::FullN{}, Extent::Infinite}));
  return f;
}

SymbolicSet SymbolicSet::finite(std::vector<Integer> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && elements.front() < 1) {
    throw Error(ErrorCode::InvalidArgument, "finite set elements must be >= 1");
  }
  if (elements.empty()) return empty();
  return SymbolicSet(
      std::make_shared<const Node>(Node{Node::FiniteN{std::move(elements)}, Extent::Finite}));
}

SymbolicSet SymbolicSet::periodic(std::uint64_t modulus, std::vector<std::uint64_t> residues) {
  if (modulus == 0) {
    throw Error(ErrorCode::InvalidArgument, "periodic modulus must be >= 1");
  }
  std::sort(residues.begin(), residues.end());
  if (std::adjacent_find(residues.begin(), residues.end()) != residues.end()) {
    throw Error(ErrorCode::InvalidArgument, "periodic residues must be distinct");
  }
  if (!residues.empty() && residues.back() >= modulus) {
    throw Error(ErrorCode::InvalidArgument, "periodic residue out of range");
  }
  Extent e = residues.empty() ? Extent::Finite : Extent::Infinite;
  return SymbolicSet(
      std::make_shared<const Node>(Node{Node::PeriodicN{modulus, std::move(residues)}, e}));
}

SymbolicSet SymbolicSet::blocks(BlockSource source) {
  Extent e = source.is_double_exponential() ? Extent::Infinite : Extent::Finite;
  if (!source.is_double_exponential() && source.explicit_intervals().empty()) return empty();
  return SymbolicSet(std::make_shared<const Node>(Node{Node::BlocksN{std::move(source)}, e}));
}

SymbolicSet SymbolicSet::predicate(MembershipRule rule, Integer cap, std::string label,
                                   Extent extent) {
  if (cap < 1) {
    throw Error(ErrorCode::InvalidArgument, "predicate cap must be >= 1");
  }
  return SymbolicSet(std::make_shared<const Node>(
      Node{Node::PredicateN{std::move(rule), std::move(cap), std::move(label), extent}, extent}));
}

namespace {

std::uint64_t lcm_or_zero(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t q = a / g;
  if (q > kMaxMergedModulus / b + 1) return 0;
  std::uint64_t l = q * b;
  return l <= kMaxMergedModulus ? l : 0;
}

// Combine two periodic sets over their common period with a boolean rule.
template <class Op>
std::optional<SymbolicSet> merge_periodic(const SymbolicSet& a, const SymbolicSet& b, Op op) {
  std::uint64_t m = lcm_or_zero(a.modulus(), b.modulus());
  if (m == 0) return std::nullopt;
  std::vector<std::uint8_t> ina(a.modulus()), inb(b.modulus());
  for (auto r : a.residues()) ina[r] = 1;
  for (auto r : b.residues()) inb[r] = 1;
  std::vector<std::uint64_t> rs;
  for (std::uint64_t r = 0; r < m; ++r) {
    if (op(ina[r % a.modulus()] != 0, inb[r % b.modulus()] != 0)) rs.push_back(r);
  }
  return SymbolicSet::periodic(m, std::move(rs));
}

bool is_unbounded_blocks(const SymbolicSet& s) {
  return s.kind() == SymbolicSet::Kind::Blocks && s.block_source().is_double_exponential();
}

}  // namespace

SymbolicSet SymbolicSet::union_of(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.kind() == Kind::Empty) return b;
  if (b.kind() == Kind::Empty) return a;
  if (a.kind() == Kind::Full || b.kind() == Kind::Full) return full();
  if (a.kind() == Kind::Periodic && b.kind() == Kind::Periodic) {
    if (auto m = merge_periodic(a, b, [](bool x, bool y) { return x || y; })) return *m;
  }
  if (a.kind() == Kind::FiniteList && b.kind() == Kind::FiniteList) {
    std::vector<Integer> all = a.elements();
    all.insert(all.end(), b.elements().begin(), b.elements().end());
    return finite(std::move(all));
  }
  Extent e = Extent::Unknown;
  if (a.extent() == Extent::Infinite || b.extent() == Extent::Infinite) e = Extent::Infinite;
  else if (a.extent() == Extent::Finite && b.extent() == Extent::Finite) e = Extent::Finite;
  return SymbolicSet(std::make_shared<const Node>(Node{Node::UnionN{a, b}, e}));
}

SymbolicSet SymbolicSet::intersection_of(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.kind() == Kind::Empty || b.kind() == Kind::Empty) return empty();
  if (a.kind() == Kind::Full) return b;
  if (b.kind() == Kind::Full) return a;
  if (a.kind() == Kind::Periodic && b.kind() == Kind::Periodic) {
    if (auto m = merge_periodic(a, b, [](bool x, bool y) { return x && y; })) return *m;
  }
  for (const auto* p : {&a, &b}) {
    const SymbolicSet& other = p == &a ? b : a;
    if (p->kind() == Kind::FiniteList && other.kind() != Kind::Predicate) {
      std::vector<Integer> kept;
      for (const auto& x : p->elements()) {
        if (other.contains(x)) kept.push_back(x);
      }
      return finite(std::move(kept));
    }
  }
  Extent e = Extent::Unknown;
  if (a.extent() == Extent::Finite || b.extent() == Extent::Finite) {
    e = Extent::Finite;
  } else if ((is_unbounded_blocks(a) && b.kind() == Kind::Periodic && !b.residues().empty()) ||
             (is_unbounded_blocks(b) && a.kind() == Kind::Periodic && !a.residues().empty())) {
    // Every residue class meets the arbitrarily long blocks.
    e = Extent::Infinite;
  }
  return SymbolicSet(std::make_shared<const Node>(Node{Node::IntersectN{a, b}, e}));
}

SymbolicSet SymbolicSet::difference_of(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.kind() == Kind::Empty || b.kind() == Kind::Full) return empty();
  if (b.kind() == Kind::Empty) return a;
  if (a.kind() == Kind::Full) return complement_of(b);
  if (a.kind() == Kind::Periodic && b.kind() == Kind::Periodic) {
    if (auto m = merge_periodic(a, b, [](bool x, bool y) { return x && !y; })) return *m;
  }
  if (a.kind() == Kind::FiniteList && b.kind() != Kind::Predicate) {
    std::vector<Integer> kept;
    for (const auto& x : a.elements()) {
      if (!b.contains(x)) kept.push_back(x);
    }
    return finite(std::move(kept));
  }
  Extent e = Extent::Unknown;
  if (a.extent() == Extent::Finite) e = Extent::Finite;
  else if (a.extent() == Extent::Infinite && b.extent() == Extent::Finite) e = Extent::Infinite;
  return SymbolicSet(std::make_shared<const Node>(Node{Node::DiffN{a, b}, e}));
}

SymbolicSet SymbolicSet::complement_of(const SymbolicSet& a) {
  switch (a.kind()) {
    case Kind::Empty: return full();
    case Kind::Full: return empty();
    case Kind::Complement: return a.left();
    case Kind::Periodic: {
      std::vector<std::uint64_t> rs;
      std::size_t j = 0;
      for (std::uint64_t r = 0; r < a.modulus(); ++r) {
        if (j < a.residues().size() && a.residues()[j] == r) {
          ++j;
        } else {
          rs.push_back(r);
        }
      }
      return periodic(a.modulus(), std::move(rs));
    }
    default: break;
  }
  Extent e = Extent::Unknown;
  if (a.extent() == Extent::Finite || is_unbounded_blocks(a) ||
      (a.kind() == Kind::Scaled && a.factor() >= 2)) {
    // Finite sets, sets with unbounded gaps and t·S (t >= 2) all miss infinitely many n.
    e = Extent::Infinite;
  }
  return SymbolicSet(std::make_shared<const Node>(Node{Node::ComplementN{a}, e}));
}

SymbolicSet SymbolicSet::scaled_node(std::uint64_t t, const SymbolicSet& s) {
  return SymbolicSet(std::make_shared<const Node>(Node{Node::ScaledN{t, s}, s.extent()}));
}

SymbolicSet scale(const SymbolicSet& s, std::uint64_t t) {
  if (t == 0) {
    throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 1");
  }
  if (t == 1 || s.kind() == SymbolicSet::Kind::Empty) return s;
  if (s.kind() == SymbolicSet::Kind::FiniteList) {
    std::vector<Integer> out;
    out.reserve(s.elements().size());
    for (const auto& x : s.elements()) out.push_back(x * from_u64(t));
    return SymbolicSet::finite(std::move(out));
  }
  return SymbolicSet::scaled_node(t, s);
}

// ---------------------------------------------------------------------------
// Accessors

SymbolicSet::Kind SymbolicSet::kind() const { return static_cast<Kind>(node_->v.index()); }

Extent SymbolicSet::extent() const { return node_->extent; }

const std::vector<Integer>& SymbolicSet::elements() const {
  static const std::vector<Integer> none;
  if (kind() == Kind::Empty) return none;
  return std::get<Node::FiniteN>(node_->v).elements;
}
std::uint64_t SymbolicSet::modulus() const { return std::get<Node::PeriodicN>(node_->v).modulus; }
const std::vector<std::uint64_t>& SymbolicSet::residues() const {
  return std::get<Node::PeriodicN>(node_->v).residues;
}
const BlockSource& SymbolicSet::block_source() const {
  return std::get<Node::BlocksN>(node_->v).source;
}
std::uint64_t SymbolicSet::factor() const { return std::get<Node::ScaledN>(node_->v).factor; }
const Integer& SymbolicSet::predicate_cap() const {
  return std::get<Node::PredicateN>(node_->v).cap;
}

const SymbolicSet& SymbolicSet::left() const {
  return std::visit(
      [this](const auto& n) -> const SymbolicSet& {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Node::ScaledN> || std::is_same_v<T, Node::ComplementN>) {
          return n.inner;
        } else if constexpr (std::is_same_v<T, Node::UnionN> ||
                             std::is_same_v<T, Node::IntersectN> ||
                             std::is_same_v<T, Node::DiffN>) {
          return n.a;
        } else {
          throw Error(ErrorCode::InvalidArgument, "set has no operand: " + to_string());
        }
      },
      node_->v);
}

const SymbolicSet& SymbolicSet::right() const {
  return std::visit(
      [this](const auto& n) -> const SymbolicSet& {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Node::UnionN> || std::is_same_v<T, Node::IntersectN> ||
                      std::is_same_v<T, Node::DiffN>) {
          return n.b;
        } else {
          throw Error(ErrorCode::InvalidArgument, "set has no right operand: " + to_string());
        }
      },
      node_->v);
}

// ---------------------------------------------------------------------------
// Membership

bool SymbolicSet::contains(const Integer& n) const {
  if (n < 1) return false;
  return std::visit(
      [&n](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::EmptyN>) {
          return false;
        } else if constexpr (std::is_same_v<T, Node::FullN>) {
          return true;
        } else if constexpr (std::is_same_v<T, Node::FiniteN>) {
          return std::binary_search(node.elements.begin(), node.elements.end(), n);
        } else if constexpr (std::is_same_v<T, Node::PeriodicN>) {
          Integer r = n % from_u64(node.modulus);
          return std::binary_search(node.residues.begin(), node.residues.end(),
                                    require_u64(r, "residue"));
        } else if constexpr (std::is_same_v<T, Node::BlocksN>) {
          return node.source.contains(n);
        } else if constexpr (std::is_same_v<T, Node::ScaledN>) {
          Integer t = from_u64(node.factor);
          return mpz_divisible_p(n.get_mpz_t(), t.get_mpz_t()) != 0 &&
                 node.inner.contains(Integer(n / t));
        } else if constexpr (std::is_same_v<T, Node::PredicateN>) {
          if (n > node.cap) {
            throw BudgetError(ErrorCode::PredicateCapExceeded, n, node.cap);
          }
          return node.rule(n);
        } else if constexpr (std::is_same_v<T, Node::UnionN>) {
          return node.a.contains(n) || node.b.contains(n);
        } else if constexpr (std::is_same_v<T, Node::IntersectN>) {
          return node.a.contains(n) && node.b.contains(n);
        } else if constexpr (std::is_same_v<T, Node::DiffN>) {
          return node.a.contains(n) && !node.b.contains(n);
        } else {
          return !node.inner.contains(n);
        }
      },
      node_->v);
}

// ---------------------------------------------------------------------------
// Counting

namespace {

Integer count_periodic(std::uint64_t m, const std::vector<std::uint64_t>& residues,
                       const Integer& n) {
  if (n < 1) return 0;
  Integer mm = from_u64(m);
  Integer q = n / mm;
  std::uint64_t rem = require_u64(Integer(n % mm), "remainder");
  Integer total = q * static_cast<unsigned long>(residues.size());
  for (auto r : residues) {
    if (r >= 1 && r <= rem) total += 1;
  }
  return total;
}

Integer count_runs(const std::vector<Interval>& runs, const Integer& n) {
  Integer total = 0;
  for (const auto& iv : runs) {
    if (iv.lo > n) break;
    total += (iv.hi <= n ? iv.hi : Integer(n + 1)) - iv.lo;
  }
  return total;
}

Integer count_by_enumeration(const SymbolicSet& s, const Integer& n) {
  require_within_budget(n);
  auto bytes = s.indicator(require_u64(n, "horizon"));
  return from_u64(kernels::count_nonzero(bytes));
}

std::optional<Integer> count_intersection(const SymbolicSet& a, const SymbolicSet& b,
                                          const Integer& n, int depth);

Integer count_or_enumerate_intersection(const SymbolicSet& a, const SymbolicSet& b,
                                        const Integer& n) {
  if (auto c = count_intersection(a, b, n, 0)) return *c;
  return count_by_enumeration(SymbolicSet::intersection_of(a, b), n);
}

// Closed-form |a ∩ b ∩ [1, n]| where one is known; nullopt otherwise.
std::optional<Integer> count_intersection(const SymbolicSet& a, const SymbolicSet& b,
                                          const Integer& n, int depth) {
  using K = SymbolicSet::Kind;
  if (n < 1) return Integer(0);
  if (depth > kMaxClosedFormDepth) return std::nullopt;
  if (a.kind() == K::Empty || b.kind() == K::Empty) return Integer(0);
  if (a.kind() == K::Full) return b.count(n);
  if (b.kind() == K::Full) return a.count(n);
  if (a.kind() == K::Predicate || b.kind() == K::Predicate) return std::nullopt;

  for (int pass = 0; pass < 2; ++pass) {
    const SymbolicSet& x = pass == 0 ? a : b;
    const SymbolicSet& y = pass == 0 ? b : a;
    if (x.kind() == K::FiniteList) {
      Integer total = 0;
      for (const auto& e : x.elements()) {
        if (e > n) break;
        if (y.contains(e)) total += 1;
      }
      return total;
    }
  }
  for (int pass = 0; pass < 2; ++pass) {
    const SymbolicSet& x = pass == 0 ? a : b;
    const SymbolicSet& y = pass == 0 ? b : a;
    if (x.kind() == K::Complement) {
      auto inner = count_intersection(x.left(), y, n, depth + 1);
      if (!inner) return std::nullopt;
      return y.count(n) - *inner;
    }
  }
  if (a.kind() == K::Periodic && b.kind() == K::Periodic) {
    auto both = SymbolicSet::intersection_of(a, b);
    if (both.kind() != K::Intersect) return both.count(n);
  }
  for (int pass = 0; pass < 2; ++pass) {
    const SymbolicSet& x = pass == 0 ? a : b;
    const SymbolicSet& y = pass == 0 ? b : a;
    if (x.kind() == K::Blocks) {
      Integer total = 0;
      for (const auto& iv : x.block_source().intervals_upto(n)) {
        Integer last = iv.hi <= n ? Integer(iv.hi - 1) : n;
        total += y.count(last) - y.count(Integer(iv.lo - 1));
      }
      return total;
    }
  }
  if (a.kind() == K::Scaled && b.kind() == K::Scaled && a.factor() == b.factor()) {
    return count_intersection(a.left(), b.left(), Integer(n / from_u64(a.factor())), depth + 1);
  }
  for (int pass = 0; pass < 2; ++pass) {
    const SymbolicSet& x = pass == 0 ? a : b;
    const SymbolicSet& y = pass == 0 ? b : a;
    if (x.kind() == K::Scaled && y.kind() == K::Periodic) {
      // t·u ≡ r (mod m) depends only on u mod m / gcd(t, m).
      std::uint64_t t = x.factor();
      std::uint64_t m = y.modulus();
      std::uint64_t period = m / std::gcd(t, m);
      std::vector<std::uint64_t> rs;
      for (std::uint64_t u = 0; u < period; ++u) {
        std::uint64_t prod = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(t % m) * u) % m);
        if (std::binary_search(y.residues().begin(), y.residues().end(), prod)) rs.push_back(u);
      }
      return count_intersection(x.left(), SymbolicSet::periodic(period, std::move(rs)),
                                Integer(n / from_u64(t)), depth + 1);
    }
  }
  for (int pass = 0; pass < 2; ++pass) {
    const SymbolicSet& x = pass == 0 ? a : b;
    const SymbolicSet& y = pass == 0 ? b : a;
    if (x.kind() == K::Union) {
      auto l = count_intersection(x.left(), y, n, depth + 1);
      auto r = count_intersection(x.right(), y, n, depth + 1);
      auto both = count_intersection(x.left(), SymbolicSet::intersection_of(x.right(), y), n,
                                     depth + 1);
      if (!l || !r || !both) return std::nullopt;
      return *l + *r - *both;
    }
    if (x.kind() == K::Intersect) {
      return count_intersection(x.left(), SymbolicSet::intersection_of(x.right(), y), n,
                                depth + 1);
    }
    if (x.kind() == K::Diff) {
      auto l = count_intersection(x.left(), y, n, depth + 1);
      auto both = count_intersection(x.right(), SymbolicSet::intersection_of(x.left(), y), n,
                                     depth + 1);
      if (!l || !both) return std::nullopt;
      return *l - *both;
    }
  }
  return std::nullopt;
}

}  // namespace

Integer SymbolicSet::count(const Integer& n) const {
  if (n < 1) return 0;
  return std::visit(
      [this, &n](const auto& node) -> Integer {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::EmptyN>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Node::FullN>) {
          return n;
        } else if constexpr (std::is_same_v<T, Node::FiniteN>) {
          auto it = std::upper_bound(node.elements.begin(), node.elements.end(), n);
          return static_cast<unsigned long>(it - node.elements.begin());
        } else if constexpr (std::is_same_v<T, Node::PeriodicN>) {
          return count_periodic(node.modulus, node.residues, n);
        } else if constexpr (std::is_same_v<T, Node::BlocksN>) {
          return count_runs(node.source.intervals_upto(n), n);
        } else if constexpr (std::is_same_v<T, Node::ScaledN>) {
          return node.inner.count(Integer(n / from_u64(node.factor)));
        } else if constexpr (std::is_same_v<T, Node::PredicateN>) {
          if (n > node.cap) {
            throw BudgetError(ErrorCode::PredicateCapExceeded, n, node.cap);
          }
          Integer total = 0;
          for (Integer k = 1; k <= n; ++k) {
            if (node.rule(k)) total += 1;
          }
          return total;
        } else if constexpr (std::is_same_v<T, Node::UnionN>) {
          return node.a.count(n) + node.b.count(n) -
                 count_or_enumerate_intersection(node.a, node.b, n);
        } else if constexpr (std::is_same_v<T, Node::IntersectN>) {
          if (auto c = count_intersection(node.a, node.b, n, 0)) return *c;
          return count_by_enumeration(*this, n);
        } else if constexpr (std::is_same_v<T, Node::DiffN>) {
          return node.a.count(n) - count_or_enumerate_intersection(node.a, node.b, n);
        } else {
          return n - node.inner.count(n);
        }
      },
      node_->v);
}

// ---------------------------------------------------------------------------
// Selection

Integer SymbolicSet::select(const Integer& k) const {
  if (k < 1) {
    throw Error(ErrorCode::InvalidArgument, "select index must be >= 1");
  }
  if (kind() == Kind::FiniteList) {
    const auto& el = elements();
    if (k > static_cast<unsigned long>(el.size())) {
      throw Error(ErrorCode::IndexBeyondSet,
                  "set has " + std::to_string(el.size()) + " elements, asked for " + k.get_str());
    }
    return el[require_u64(Integer(k - 1), "index")];
  }

  std::optional<Integer> limit;
  if (extent() == Extent::Finite) {
    limit = upper_bound().value_or(pow2(256));
  } else if (extent() == Extent::Unknown) {
    limit = kind() == Kind::Predicate ? predicate_cap() : pow2(256);
  }

  // Exponential search for an upper bound, then bisection on the monotone count.
  Integer hi = k;
  while (count(hi) < k) {
    if (limit && hi >= *limit) {
      throw Error(ErrorCode::IndexBeyondSet,
                  "fewer than " + k.get_str() + " elements up to " + limit->get_str());
    }
    hi *= 2;
    if (limit && hi > *limit) hi = *limit;
  }
  Integer lo = k;  // count(lo - 1) < k since count(x) <= x
  while (lo < hi) {
    Integer mid = (lo + hi) / 2;
    if (count(mid) >= k) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Densities, bounds, runs

std::optional<Rational> SymbolicSet::exact_density() const {
  switch (kind()) {
    case Kind::Empty:
    case Kind::FiniteList: return Rational(0);
    case Kind::Full: return Rational(1);
    case Kind::Periodic:
      return make_rational(static_cast<unsigned long>(residues().size()), from_u64(modulus()));
    case Kind::Blocks:
      if (!block_source().is_double_exponential()) return Rational(0);
      return std::nullopt;
    case Kind::Scaled:
      if (auto d = left().exact_density()) return Rational(*d / from_u64(factor()));
      return std::nullopt;
    case Kind::Complement:
      if (auto d = left().exact_density()) return Rational(1 - *d);
      return std::nullopt;
    default: break;
  }
  if (extent() == Extent::Finite) return Rational(0);
  if (kind() == Kind::Union) {
    if (left().extent() == Extent::Finite) return right().exact_density();
    if (right().extent() == Extent::Finite) return left().exact_density();
  }
  if (kind() == Kind::Diff && right().extent() == Extent::Finite) return left().exact_density();
  return std::nullopt;
}

std::optional<Integer> SymbolicSet::upper_bound() const {
  switch (kind()) {
    case Kind::Empty: return Integer(0);
    case Kind::FiniteList: return elements().back();
    case Kind::Periodic:
      if (residues().empty()) return Integer(0);
      return std::nullopt;
    case Kind::Blocks:
      if (block_source().is_double_exponential()) return std::nullopt;
      return Integer(block_source().explicit_intervals().back().hi - 1);
    case Kind::Scaled:
      if (auto b = left().upper_bound()) return Integer(*b * from_u64(factor()));
      return std::nullopt;
    case Kind::Union: {
      auto l = left().upper_bound();
      auto r = right().upper_bound();
      if (l && r) return std::max(*l, *r);
      return std::nullopt;
    }
    case Kind::Intersect: {
      auto l = left().upper_bound();
      auto r = right().upper_bound();
      if (l && r) return std::min(*l, *r);
      return l ? l : r;
    }
    case Kind::Diff: return left().upper_bound();
    default: return std::nullopt;
  }
}

std::optional<std::vector<Interval>> SymbolicSet::runs_upto(const Integer& n) const {
  switch (kind()) {
    case Kind::Empty: return std::vector<Interval>{};
    case Kind::Blocks: return block_source().intervals_upto(n);
    case Kind::FiniteList: {
      std::vector<Interval> runs;
      for (const auto& e : elements()) {
        if (e > n) break;
        if (!runs.empty() && runs.back().hi == e) {
          runs.back().hi += 1;
        } else {
          runs.push_back({e, e + 1});
        }
      }
      return runs;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Materialization

std::vector<std::uint8_t> SymbolicSet::indicator(std::uint64_t horizon) const {
  require_within_budget(from_u64(horizon));
  std::vector<std::uint8_t> out(horizon + 1, 0);
  auto fill_interval = [&out, horizon](const Interval& iv) {
    std::uint64_t lo = require_u64(iv.lo, "block start");
    if (lo > horizon) return;
    auto hi_opt = to_u64(iv.hi);
    std::uint64_t hi = hi_opt && *hi_opt <= horizon + 1 ? *hi_opt : horizon + 1;
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(lo),
              out.begin() + static_cast<std::ptrdiff_t>(hi), 1);
  };
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        const Integer h = from_u64(horizon);
        if constexpr (std::is_same_v<T, Node::EmptyN>) {
        } else if constexpr (std::is_same_v<T, Node::FullN>) {
          std::fill(out.begin() + 1, out.end(), 1);
        } else if constexpr (std::is_same_v<T, Node::FiniteN>) {
          for (const auto& e : node.elements) {
            if (e > h) break;
            out[require_u64(e, "element")] = 1;
          }
        } else if constexpr (std::is_same_v<T, Node::PeriodicN>) {
          std::vector<std::uint8_t> pattern(node.modulus, 0);
          for (auto r : node.residues) pattern[r] = 1;
          std::uint64_t r = 1 % node.modulus;
          for (std::uint64_t i = 1; i <= horizon; ++i) {
            out[i] = pattern[r];
            if (++r == node.modulus) r = 0;
          }
        } else if constexpr (std::is_same_v<T, Node::BlocksN>) {
          for (const auto& iv : node.source.intervals_upto(h)) fill_interval(iv);
        } else if constexpr (std::is_same_v<T, Node::ScaledN>) {
          auto inner = node.inner.indicator(horizon / node.factor);
          for (std::uint64_t i = 1; i < inner.size(); ++i) out[i * node.factor] = inner[i];
        } else if constexpr (std::is_same_v<T, Node::PredicateN>) {
          if (h > node.cap) {
            throw BudgetError(ErrorCode::PredicateCapExceeded, h, node.cap);
          }
          for (std::uint64_t i = 1; i <= horizon; ++i) out[i] = node.rule(from_u64(i)) ? 1 : 0;
        } else if constexpr (std::is_same_v<T, Node::ComplementN>) {
          out = node.inner.indicator(horizon);
          kernels::flip(out);
          out[0] = 0;
        } else {
          out = node.a.indicator(horizon);
          auto rhs = node.b.indicator(horizon);
          kernels::SetOp op = std::is_same_v<T, Node::UnionN>       ? kernels::SetOp::Or
                              : std::is_same_v<T, Node::IntersectN> ? kernels::SetOp::And
                                                                    : kernels::SetOp::AndNot;
          kernels::combine(out, rhs, op);
        }
      },
      node_->v);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string SymbolicSet::to_string() const {
  auto join = [](const auto& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ",";
      if constexpr (std::is_same_v<std::decay_t<decltype(items[i])>, Integer>) {
        s += items[i].get_str();
      } else {
        s += std::to_string(items[i]);
      }
    }
    return s;
  };
  return std::visit(
      [&](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::EmptyN>) {
          return "empty";
        } else if constexpr (std::is_same_v<T, Node::FullN>) {
          return "full";
        } else if constexpr (std::is_same_v<T, Node::FiniteN>) {
          return "finite(" + join(node.elements) + ")";
        } else if constexpr (std::is_same_v<T, Node::PeriodicN>) {
          return "periodic(" + std::to_string(node.modulus) + ";" + join(node.residues) + ")";
        } else if constexpr (std::is_same_v<T, Node::BlocksN>) {
          if (node.source.is_double_exponential()) return "blocks(dexp)";
          std::string s = "blocks(";
          const auto& ivs = node.source.explicit_intervals();
          for (std::size_t i = 0; i < ivs.size(); ++i) {
            if (i) s += ",";
            s += "[" + ivs[i].lo.get_str() + "," + ivs[i].hi.get_str() + ")";
          }
          return s + ")";
        } else if constexpr (std::is_same_v<T, Node::ScaledN>) {
          return "scale(" + std::to_string(node.factor) + "," + node.inner.to_string() + ")";
        } else if constexpr (std::is_same_v<T, Node::PredicateN>) {
          return "pred<" + node.label + ">";
        } else if constexpr (std::is_same_v<T, Node::UnionN>) {
          return "union(" + node.a.to_string() + "," + node.b.to_string() + ")";
        } else if constexpr (std::is_same_v<T, Node::IntersectN>) {
          return "inter(" + node.a.to_string() + "," + node.b.to_string() + ")";
        } else if constexpr (std::is_same_v<T, Node::DiffN>) {
          return "diff(" + node.a.to_string() + "," + node.b.to_string() + ")";
        } else {
          return "compl(" + node.inner.to_string() + ")";
        }
      },
      node_->v);
}

}  // namespace densitylab
