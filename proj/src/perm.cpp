#include "densitylab/perm.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <variant>

#include "densitylab/error.hpp"
#include "densitylab/kernels.hpp"

namespace densitylab {

namespace {

// Pairing caches hold at least this many (a_i, b_i) pairs when reachable.
constexpr std::size_t kPairCacheTarget = std::size_t{1} << 16;
constexpr std::uint64_t kPairCacheMaxHorizon = std::uint64_t{1} << 22;

std::uint64_t saturate(const Integer& v) {
  return to_u64(v).value_or(std::numeric_limits<std::uint64_t>::max());
}

}  // namespace

struct PermutationRule::Node {
  struct IdentityN {};
  struct TableN {
    std::map<Integer, Integer> forward;
    std::map<Integer, Integer> backward;
    std::vector<std::vector<Integer>> cycles;
  };
  struct PairingN {
    SymbolicSet a, b;    // as given
    SymbolicSet ad, bd;  // disjointified
    std::uint64_t cache_horizon = 0;
    std::vector<std::uint64_t> a_cache;  // all elements of A' up to cache_horizon
    std::vector<std::uint64_t> b_cache;  // all elements of B' up to cache_horizon
  };
  struct QuarterN {};
  struct RestrictedN {
    PermutationRule base;
    SymbolicSet f;
  };
  struct ComposeN {
    PermutationRule outer, inner;
  };
  struct InverseN {
    PermutationRule inner;
  };
  using Variant =
      std::variant<IdentityN, TableN, PairingN, QuarterN, RestrictedN, ComposeN, InverseN>;
  Variant v;
};

namespace {

using PNode = PermutationRule::Node;

// Partner of n under the pairing: n's index among one side, then the element
// with the same index on the other side.
std::optional<Integer> pairing_partner(const PNode::PairingN& p, const Integer& n) {
  auto lookup = [&](const std::vector<std::uint64_t>& own, const SymbolicSet& own_set,
                    const std::vector<std::uint64_t>& other,
                    const SymbolicSet& other_set) -> std::optional<Integer> {
    Integer index;
    auto small = to_u64(n);
    if (small && *small <= p.cache_horizon) {
      auto it = std::lower_bound(own.begin(), own.end(), *small);
      if (it == own.end() || *it != *small) return std::nullopt;
      index = static_cast<unsigned long>(it - own.begin() + 1);
    } else {
      if (!own_set.contains(n)) return std::nullopt;
      index = own_set.count(n);
    }
    if (index <= static_cast<unsigned long>(other.size())) {
      return from_u64(other[require_u64(Integer(index - 1), "index")]);
    }
    return other_set.select(index);
  };
  if (auto r = lookup(p.a_cache, p.ad, p.b_cache, p.bd)) return r;
  return lookup(p.b_cache, p.bd, p.a_cache, p.ad);
}

Integer quarter_swap(const Integer& n) {
  if (n < 4) return n;
  std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;  // floor(log2 n)
  Integer block = pow2(static_cast<unsigned long>(bits & ~std::size_t{1}));  // 4^j <= n < 4^(j+1)
  if (n < 2 * block) return n + block;
  if (n < 3 * block) return n - block;
  return n;
}

bool restricted_fixes(const PNode::RestrictedN& r, const Integer& n, const Integer& image) {
  const SymbolicSet& ad = r.base.disjoint_a();
  auto in_core = [&](const Integer& x, const Integer& partner) {
    return ad.contains(x) && (r.f.contains(x) || r.f.contains(partner));
  };
  // n ∈ F' or n ∈ φF' (equivalently φ(n) ∈ F', φ being an involution).
  return in_core(n, image) || in_core(image, n);
}

}  // namespace

PermutationRule::PermutationRule()
    : node_(std::make_shared<const Node>(Node{Node::IdentityN{}})) {}

PermutationRule PermutationRule::identity() { return PermutationRule(); }

PermutationRule PermutationRule::from_cycles(const std::vector<std::vector<Integer>>& cycles) {
  Node::TableN t;
  for (const auto& cycle : cycles) {
    for (const auto& x : cycle) {
      if (x < 1) throw Error(ErrorCode::InvalidArgument, "table entries must be >= 1");
      if (t.forward.count(x)) {
        throw Error(ErrorCode::InvalidArgument, "element " + x.get_str() + " repeated in table");
      }
      t.forward[x] = x;  // placeholder, overwritten below
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Integer& from = cycle[i];
      const Integer& to = cycle[(i + 1) % cycle.size()];
      t.forward[from] = to;
      t.backward[to] = from;
    }
    if (cycle.size() > 1) t.cycles.push_back(cycle);
  }
  for (auto it = t.forward.begin(); it != t.forward.end();) {
    if (it->first == it->second) {
      t.backward.erase(it->first);
      it = t.forward.erase(it);
    } else {
      ++it;
    }
  }
  if (t.forward.empty()) return identity();
  return PermutationRule(std::make_shared<const Node>(Node{std::move(t)}));
}

PermutationRule PermutationRule::quarter_block_swap() {
  return PermutationRule(std::make_shared<const Node>(Node{Node::QuarterN{}}));
}

PermutationRule PermutationRule::compose(PermutationRule outer, PermutationRule inner) {
  return PermutationRule(
      std::make_shared<const Node>(Node{Node::ComposeN{std::move(outer), std::move(inner)}}));
}

PermutationRule PermutationRule::inverse(PermutationRule inner) {
  return PermutationRule(std::make_shared<const Node>(Node{Node::InverseN{std::move(inner)}}));
}

PermutationRule::Kind PermutationRule::kind() const { return static_cast<Kind>(node_->v.index()); }

Integer PermutationRule::apply(const Integer& n) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "permutations act on n >= 1");
  return std::visit(
      [&n](const auto& node) -> Integer {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::IdentityN>) {
          return n;
        } else if constexpr (std::is_same_v<T, Node::TableN>) {
          auto it = node.forward.find(n);
          return it == node.forward.end() ? n : it->second;
        } else if constexpr (std::is_same_v<T, Node::PairingN>) {
          return pairing_partner(node, n).value_or(n);
        } else if constexpr (std::is_same_v<T, Node::QuarterN>) {
          return quarter_swap(n);
        } else if constexpr (std::is_same_v<T, Node::RestrictedN>) {
          Integer image = node.base.apply(n);
          return restricted_fixes(node, n, image) ? n : image;
        } else if constexpr (std::is_same_v<T, Node::ComposeN>) {
          return node.outer.apply(node.inner.apply(n));
        } else {
          return node.inner.invert(n);
        }
      },
      node_->v);
}

Integer PermutationRule::invert(const Integer& m) const {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "permutations act on n >= 1");
  return std::visit(
      [this, &m](const auto& node) -> Integer {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::TableN>) {
          auto it = node.backward.find(m);
          return it == node.backward.end() ? m : it->second;
        } else if constexpr (std::is_same_v<T, Node::ComposeN>) {
          return node.inner.invert(node.outer.invert(m));
        } else if constexpr (std::is_same_v<T, Node::InverseN>) {
          return node.inner.apply(m);
        } else {
          // Identity, pairings, the quarter swap and restrictions are involutions.
          return apply(m);
        }
      },
      node_->v);
}

std::string PermutationRule::to_string() const {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::IdentityN>) {
          return "id";
        } else if constexpr (std::is_same_v<T, Node::TableN>) {
          std::string s = "table(";
          for (const auto& c : node.cycles) {
            s += "(";
            for (std::size_t i = 0; i < c.size(); ++i) {
              if (i) s += " ";
              s += c[i].get_str();
            }
            s += ")";
          }
          return s + ")";
        } else if constexpr (std::is_same_v<T, Node::PairingN>) {
          return "pair(" + node.a.to_string() + "," + node.b.to_string() + ")";
        } else if constexpr (std::is_same_v<T, Node::QuarterN>) {
          return "qswap";
        } else if constexpr (std::is_same_v<T, Node::RestrictedN>) {
          return "restrict(" + node.base.to_string() + "," + node.f.to_string() + ")";
        } else if constexpr (std::is_same_v<T, Node::ComposeN>) {
          return "comp(" + node.outer.to_string() + "," + node.inner.to_string() + ")";
        } else {
          return "inv(" + node.inner.to_string() + ")";
        }
      },
      node_->v);
}

const SymbolicSet& PermutationRule::pairing_a() const {
  return std::get<Node::PairingN>(node_->v).a;
}
const SymbolicSet& PermutationRule::pairing_b() const {
  return std::get<Node::PairingN>(node_->v).b;
}
const SymbolicSet& PermutationRule::disjoint_a() const {
  if (kind() == Kind::Restricted) return restricted_base().disjoint_a();
  return std::get<Node::PairingN>(node_->v).ad;
}
const SymbolicSet& PermutationRule::disjoint_b() const {
  if (kind() == Kind::Restricted) return restricted_base().disjoint_b();
  return std::get<Node::PairingN>(node_->v).bd;
}
const PermutationRule& PermutationRule::restricted_base() const {
  return std::get<Node::RestrictedN>(node_->v).base;
}
const SymbolicSet& PermutationRule::restricted_input() const {
  return std::get<Node::RestrictedN>(node_->v).f;
}
const PermutationRule& PermutationRule::outer() const {
  return std::get<Node::ComposeN>(node_->v).outer;
}
const PermutationRule& PermutationRule::inner() const {
  if (kind() == Kind::Inverse) return std::get<Node::InverseN>(node_->v).inner;
  return std::get<Node::ComposeN>(node_->v).inner;
}

SymbolicSet PermutationRule::restricted_core(const Integer& cap) const {
  const auto& r = std::get<Node::RestrictedN>(node_->v);
  auto rule = [r](const Integer& n) {
    return r.base.disjoint_a().contains(n) && (r.f.contains(n) || r.f.contains(r.base.apply(n)));
  };
  return SymbolicSet::predicate(rule, cap, "core " + to_string());
}

SymbolicSet PermutationRule::restricted_fixed(const Integer& cap) const {
  const auto& r = std::get<Node::RestrictedN>(node_->v);
  auto rule = [r](const Integer& n) { return restricted_fixes(r, n, r.base.apply(n)); };
  return SymbolicSet::predicate(rule, cap, "fixed " + to_string());
}

PermutationRule pairing_permutation(const SymbolicSet& a, const SymbolicSet& b) {
  PNode::PairingN p;
  p.a = a;
  p.b = b;
  const SymbolicSet common = SymbolicSet::intersection_of(a, b);
  p.ad = SymbolicSet::difference_of(a, common);
  p.bd = SymbolicSet::difference_of(b, common);

  const Extent ea = p.ad.extent();
  const Extent eb = p.bd.extent();
  if (ea == Extent::Unknown || eb == Extent::Unknown) {
    throw Error(ErrorCode::UnknownInfinitude,
                "cannot decide whether " + p.ad.to_string() + " and " + p.bd.to_string() +
                    " are infinite");
  }
  if (ea != eb) {
    throw Error(ErrorCode::CardinalityMismatch, "one side of the pairing is finite, the other infinite");
  }

  std::uint64_t horizon = 0;
  if (ea == Extent::Finite) {
    Integer ub = std::max(p.ad.upper_bound().value_or(0), p.bd.upper_bound().value_or(0));
    if (p.ad.count(ub) != p.bd.count(ub)) {
      throw Error(ErrorCode::CardinalityMismatch,
                  "finite sides have " + p.ad.count(ub).get_str() + " and " +
                      p.bd.count(ub).get_str() + " elements");
    }
    horizon = require_u64(ub, "finite pairing bound");
  } else {
    horizon = std::min<std::uint64_t>(4096, enumeration_budget());
  }

  // Materialize both sides; grow the horizon until the cache target is met.
  for (;;) {
    auto ia = p.ad.indicator(horizon);
    auto ib = p.bd.indicator(horizon);
    p.a_cache.clear();
    p.b_cache.clear();
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      if (ia[n]) p.a_cache.push_back(n);
      if (ib[n]) p.b_cache.push_back(n);
    }
    p.cache_horizon = horizon;
    bool enough = std::min(p.a_cache.size(), p.b_cache.size()) >= kPairCacheTarget;
    if (ea == Extent::Finite || enough || horizon >= kPairCacheMaxHorizon ||
        horizon * 2 > enumeration_budget()) {
      break;
    }
    horizon *= 2;
  }
  if (p.ad.kind() == SymbolicSet::Kind::Empty && p.bd.kind() == SymbolicSet::Kind::Empty) {
    // A' = B' = ∅: the pairing is the identity but keeps its sets for reporting.
    p.cache_horizon = 0;
  }
  return PermutationRule(std::make_shared<const PNode>(PNode{std::move(p)}));
}

PermutationRule restrict_pairing(const PermutationRule& phi, const SymbolicSet& f) {
  if (phi.kind() != PermutationRule::Kind::InterlacedPairing) {
    throw Error(ErrorCode::InvalidArgument, "restrict needs a pairing permutation, got " +
                                                phi.to_string());
  }
  return PermutationRule(std::make_shared<const PNode>(PNode{PNode::RestrictedN{phi, f}}));
}

bool infinite_and_coinfinite(const SymbolicSet& a, const SymbolicSet& b) {
  for (const auto& s : {a, b, SymbolicSet::complement_of(a), SymbolicSet::complement_of(b)}) {
    if (s.extent() == Extent::Unknown) {
      throw Error(ErrorCode::UnknownInfinitude, "infinitude of " + s.to_string() + " is unknown");
    }
    if (s.extent() == Extent::Finite) return false;
  }
  return true;
}

std::vector<std::uint64_t> forward_table(const PermutationRule& p, std::uint64_t horizon) {
  const Integer budget = from_u64(enumeration_budget());
  if (from_u64(horizon) > budget) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, from_u64(horizon), budget);
  }
  std::vector<std::uint64_t> t(horizon + 1, 0);
  for (std::uint64_t n = 1; n <= horizon; ++n) t[n] = saturate(p.apply(from_u64(n)));
  return t;
}

std::vector<std::uint64_t> inverse_table(const PermutationRule& p, std::uint64_t horizon) {
  const Integer budget = from_u64(enumeration_budget());
  if (from_u64(horizon) > budget) {
    throw BudgetError(ErrorCode::EnumerationBudgetExceeded, from_u64(horizon), budget);
  }
  std::vector<std::uint64_t> t(horizon + 1, 0);
  for (std::uint64_t m = 1; m <= horizon; ++m) t[m] = saturate(p.invert(from_u64(m)));
  return t;
}

// ---------------------------------------------------------------------------
// Diagnostics

const char* to_string(LevyHint h) {
  switch (h) {
    case LevyHint::LevyLikely: return "LevyLikely";
    case LevyHint::NonLevyLikely: return "NonLevyLikely";
    case LevyHint::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

TailClassification classify_tail(const std::vector<Rational>& values, const Integer& horizon,
                                 const ClassificationThresholds& t,
                                 std::optional<std::size_t> tail_window) {
  TailClassification c;
  if (values.empty()) return c;
  c.tail_window = std::min(values.size(), std::max<std::size_t>(
                                              1, tail_window.value_or(default_tail_window(values.size()))));
  auto first = values.end() - static_cast<std::ptrdiff_t>(c.tail_window);
  c.tail_max = *std::max_element(first, values.end());
  c.tail_points_above = static_cast<std::size_t>(
      std::count_if(first, values.end(), [&](const Rational& v) { return v >= t.non_levy_min; }));
  if (c.tail_points_above >= t.recurrence) {
    c.hint = LevyHint::NonLevyLikely;
  } else if (c.tail_max <= t.levy_max * t.slack_factor && horizon >= t.min_horizon) {
    c.hint = LevyHint::LevyLikely;
  } else {
    c.hint = LevyHint::Inconclusive;
  }
  return c;
}

namespace {

// |{m <= n : table[m] > n}| (strict) or >= n (inclusive) at each point.
std::vector<std::uint64_t> crossing_counts(const std::vector<std::uint64_t>& table,
                                           const std::vector<std::uint64_t>& points,
                                           bool inclusive, ScanRoute route) {
  const std::uint64_t horizon = table.size() - 1;
  if (route == ScanRoute::Auto) route = points.size() > 16 ? ScanRoute::Sweep : ScanRoute::PerPoint;
  std::vector<std::uint64_t> out;
  out.reserve(points.size());
  if (route == ScanRoute::PerPoint) {
    std::span<const std::uint64_t> values(table.data() + 1, horizon);
    for (auto n : points) {
      std::uint64_t bound = inclusive ? n - 1 : n;
      out.push_back(kernels::count_greater(values.first(n), bound));
    }
    return out;
  }
  // Sweep: `landing[v]` counts earlier m with table[m] = v; those stop
  // crossing once n reaches v.
  std::vector<std::uint64_t> landing(horizon + 2, 0);
  std::uint64_t crossing = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= horizon && next < points.size(); ++n) {
    const std::uint64_t v = table[n];
    crossing -= landing[n];
    if (v > n) {
      ++crossing;
      if (v <= horizon) ++landing[v];
    }
    while (next < points.size() && points[next] == n) {
      std::uint64_t c = crossing;
      if (inclusive) c += landing[n] + (v == n ? 1 : 0);
      out.push_back(c);
      ++next;
    }
  }
  return out;
}

std::vector<std::uint64_t> small_points(const IndexSequence& seq) {
  seq.require_profile_size();
  std::vector<std::uint64_t> pts;
  pts.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) pts.push_back(require_u64(seq.point(i), "point"));
  return pts;
}

}  // namespace

DefectProfile levy_defect_profile(const PermutationRule& p, const IndexSequence& seq,
                                  DefectMode mode, const ClassificationThresholds& thresholds,
                                  std::optional<std::size_t> tail_window, ScanRoute route) {
  if (seq.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty index sequence");
  const Integer last = seq.last();
  const Integer budget = from_u64(enumeration_budget());
  if (last > budget) throw BudgetError(ErrorCode::EnumerationBudgetExceeded, last, budget);
  const std::uint64_t horizon = require_u64(last, "horizon");
  auto pts = small_points(seq);

  std::vector<std::uint64_t> counts;
  switch (mode) {
    case DefectMode::Upward: {
      // n - |{m <= n : π⁻¹(m) <= n}| = |{m <= n : π⁻¹(m) > n}|.
      counts = crossing_counts(inverse_table(p, horizon), pts, false, route);
      break;
    }
    case DefectMode::UpwardDirect:
      counts = crossing_counts(forward_table(p, horizon), pts, false, route);
      break;
    case DefectMode::DownwardInclusive:
      counts = crossing_counts(inverse_table(p, horizon), pts, true, route);
      break;
  }

  DefectProfile d;
  d.permutation = p.to_string();
  d.sequence = seq.to_string();
  d.mode = mode;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Integer n = from_u64(pts[i]);
    Integer c = from_u64(counts[i]);
    d.defects.push_back(make_rational(c, n));
    d.crossings.push_back(std::move(c));
    d.points.push_back(std::move(n));
  }
  d.classification = classify_tail(d.defects, last, thresholds, tail_window);
  return d;
}

std::vector<Integer> image_counts(const PermutationRule& p, const SymbolicSet& a,
                                  const IndexSequence& seq) {
  if (seq.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty index sequence");
  const std::uint64_t horizon = require_u64(seq.last(), "horizon");
  auto inv = inverse_table(p, horizon);
  std::uint64_t reach = horizon;
  for (std::uint64_t m = 1; m <= horizon; ++m) reach = std::max(reach, inv[m]);
  std::vector<std::uint8_t> member;
  if (reach <= enumeration_budget()) member = a.indicator(reach);
  auto in_a = [&](std::uint64_t v) {
    return v < member.size() ? member[v] != 0 : a.contains(from_u64(v));
  };
  auto pts = small_points(seq);
  std::vector<Integer> out;
  out.reserve(pts.size());
  std::uint64_t running = 0;
  std::size_t next = 0;
  for (std::uint64_t m = 1; m <= horizon; ++m) {
    if (in_a(inv[m])) ++running;
    while (next < pts.size() && pts[next] == m) {
      out.push_back(from_u64(running));
      ++next;
    }
  }
  return out;
}

SymbolicSet image_set(const PermutationRule& p, const SymbolicSet& a, const Integer& cap) {
  auto rule = [p, a](const Integer& m) { return a.contains(p.invert(m)); };
  return SymbolicSet::predicate(rule, cap, "image " + p.to_string() + " of " + a.to_string());
}

std::vector<DisplacementEntry> displacement_profile(const PermutationRule& p, const SymbolicSet& a,
                                                    const IndexSequence& seq) {
  auto images = image_counts(p, a, seq);
  auto own = counts_along(a, seq);
  std::vector<DisplacementEntry> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    Integer n = seq.point(i);
    Rational v = make_rational(own[i] - images[i], n);
    out.push_back({std::move(n), std::move(own[i]), images[i], std::move(v)});
  }
  return out;
}

RatioStatReport ratio_stat_report(const PermutationRule& p, const std::vector<Rational>& eps_grid,
                                  const IndexSequence& checkpoints,
                                  const ClassificationThresholds& thresholds) {
  auto x = [&p](const Integer& n) { return make_rational(p.apply(n), n); };
  RatioStatReport r;
  r.table = statistical_limit(x, Rational(1), eps_grid, checkpoints,
                              thresholds.levy_max * thresholds.slack_factor);
  // The most demanding row decides: any recurrent row flags non-Lévy, and
  // Lévy-likeness needs every row to vanish.
  TailClassification worst;
  worst.hint = LevyHint::LevyLikely;
  for (const auto& row : r.table.rows) {
    auto c = classify_tail(row.densities, r.table.checkpoints.back(), thresholds,
                           r.table.tail_window);
    if (c.hint == LevyHint::NonLevyLikely ||
        (c.hint == LevyHint::Inconclusive && worst.hint == LevyHint::LevyLikely)) {
      worst.hint = c.hint;
    }
    if (c.tail_max > worst.tail_max) worst.tail_max = c.tail_max;
    worst.tail_points_above = std::max(worst.tail_points_above, c.tail_points_above);
    worst.tail_window = c.tail_window;
  }
  r.classification = worst;
  return r;
}

ExceptionalSets exceptional_sets(const PermutationRule& p, const Rational& eps,
                                 const Integer& horizon, const IndexSequence& checkpoints) {
  if (eps <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const Integer budget = from_u64(enumeration_budget());
  if (horizon > budget) throw BudgetError(ErrorCode::EnumerationBudgetExceeded, horizon, budget);
  const std::uint64_t h = require_u64(horizon, "horizon");
  std::vector<Integer> above, below;
  std::vector<std::uint8_t> in_c(h + 1, 0);
  for (std::uint64_t k = 1; k <= h; ++k) {
    const Integer kk = from_u64(k);
    const Integer image = p.apply(kk);
    const Rational margin = eps * kk;
    if (image > kk && Rational(image - kk) > margin) {
      above.push_back(kk);
      in_c[k] = 1;
    } else if (image < kk && Rational(kk - image) > margin) {
      below.push_back(kk);
      in_c[k] = 1;
    }
  }
  ExceptionalSets out;
  out.eps = eps;
  out.horizon = horizon;
  out.above = SymbolicSet::finite(std::move(above));
  out.below = SymbolicSet::finite(std::move(below));
  auto prefix = kernels::prefix_counts(in_c);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    Integer n = checkpoints.point(i);
    if (n > horizon) break;
    out.union_ratios.push_back({n, make_rational(from_u64(prefix[require_u64(n, "point")]), n)});
  }
  return out;
}

VanDouwenReport van_douwen_ratio_report(const PermutationRule& p, const Integer& horizon,
                                        const Integer& tail_start, const Rational& tol) {
  if (tail_start < 1 || tail_start > horizon) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= tail start <= horizon");
  }
  const Integer budget = from_u64(enumeration_budget());
  if (horizon > budget) throw BudgetError(ErrorCode::EnumerationBudgetExceeded, horizon, budget);
  VanDouwenReport r;
  r.tail_start = tail_start;
  r.horizon = horizon;
  r.tol = tol;
  r.sup_deviation = 0;
  r.argmax = tail_start;
  for (Integer n = tail_start; n <= horizon; ++n) {
    Rational dev = abs(Rational(make_rational(p.apply(n), n) - 1));
    if (dev > r.sup_deviation) {
      r.sup_deviation = dev;
      r.argmax = n;
    }
  }
  r.holds = r.sup_deviation <= tol;
  return r;
}

SymbolicSet levy_witness_set(const PermutationRule& p, const Integer& cap) {
  auto rule = [p](const Integer& k) { return p.apply(k) > k; };
  return SymbolicSet::predicate(rule, cap, "witness " + p.to_string());
}

}  // namespace densitylab
