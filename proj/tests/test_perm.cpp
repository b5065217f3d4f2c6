#include <doctest.h>

#include <random>
#include <set>

#include "densitylab/error.hpp"
#include "densitylab/perm.hpp"
#include "oracles.hpp"

using namespace densitylab;
using oracle::u64;

namespace {

const SymbolicSet odds = SymbolicSet::periodic(2, {1});
const SymbolicSet evens = SymbolicSet::periodic(2, {0});

struct Case {
  PermutationRule rule;
  std::vector<u64> table;  // oracle values for n <= kN
};

constexpr u64 kN = 3000;

std::vector<u64> tabulate(const oracle::Map& f) {
  std::vector<u64> t(kN + 1, 0);
  for (u64 n = 1; n <= kN; ++n) t[n] = f(n);
  return t;
}

std::vector<Case> corpus() {
  auto odd_even = oracle::pairing(kN, [](u64 n) { return n % 2 == 1; }, [](u64 n) { return n % 2 == 0; });
  auto quarter = oracle::pairing(kN, [](u64 n) { return n % 4 == 1; }, [](u64 n) { return n % 4 == 3; });
  auto table = [](u64 n) -> u64 {
    switch (n) {
      case 1: return 5;
      case 5: return 1;
      case 2: return 3;
      case 3: return 2;
      default: return n;
    }
  };
  std::vector<Case> out;
  out.push_back({PermutationRule::identity(), tabulate([](u64 n) { return n; })});
  out.push_back({pairing_permutation(odds, evens), odd_even});
  out.push_back({pairing_permutation(SymbolicSet::periodic(4, {1}), SymbolicSet::periodic(4, {3})), quarter});
  out.push_back({PermutationRule::quarter_block_swap(), tabulate(oracle::qswap)});
  out.push_back({PermutationRule::from_cycles({{1, 5}, {2, 3}}), tabulate(table)});
  out.push_back({PermutationRule::compose(PermutationRule::quarter_block_swap(), pairing_permutation(odds, evens)),
                 tabulate([&](u64 n) { return oracle::qswap(odd_even[n]); })});
  return out;
}

}  // namespace

TEST_SUITE("perm") {
  TEST_CASE("apply examples") {
    CHECK(PermutationRule::identity().apply(7) == 7);
    auto phi = pairing_permutation(odds, evens);
    CHECK(phi.apply(5) == 6);
    CHECK(phi.apply(6) == 5);
    auto q = PermutationRule::quarter_block_swap();
    CHECK(q.apply(5) == 9);
    CHECK(q.apply(9) == 5);
    CHECK(q.apply(12) == 12);
    auto t = PermutationRule::from_cycles({{1, 2, 3}});
    CHECK(t.apply(1) == 2);
    CHECK(t.apply(3) == 1);
    CHECK(t.invert(1) == 3);
    CHECK_THROWS_AS(PermutationRule::from_cycles({{1, 2}, {2, 3}}), Error);
  }

  TEST_CASE("corpus matches oracle tables and is bijective") {
    for (const auto& c : corpus()) {
      CAPTURE(c.rule.to_string());
      std::set<Integer> seen;
      for (u64 n = 1; n <= kN; ++n) {
        Integer v = c.rule.apply(from_u64(n));
        if (v != from_u64(c.table[n])) FAIL("apply differs at " << n);
        if (c.rule.invert(v) != from_u64(n)) FAIL("invert fails at " << n);
        seen.insert(v);
      }
      CHECK(seen.size() == kN);
      auto inv = PermutationRule::inverse(c.rule);
      for (u64 n = 1; n <= 200; ++n) CHECK(inv.apply(from_u64(n)) == c.rule.invert(from_u64(n)));
      auto fwd = forward_table(c.rule, kN);
      auto back = inverse_table(c.rule, kN);
      for (u64 n = 1; n <= kN; ++n) {
        CHECK(fwd[n] == c.table[n]);
        if (back[n] <= kN) CHECK(c.table[back[n]] == n);
      }
    }
  }

  TEST_CASE("pairing against the oracle on random periodic pairs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      u64 m = 3 + rng() % 8;
      std::vector<std::uint64_t> ra, rb;
      for (u64 r = 0; r < m; ++r) {
        if (rng() % 3 == 0) ra.push_back(r);
        if (rng() % 3 == 0) rb.push_back(r);
      }
      auto in = [](const std::vector<std::uint64_t>& rs, u64 m) {
        return [rs, m](u64 n) { return std::find(rs.begin(), rs.end(), n % m) != rs.end(); };
      };
      auto a = SymbolicSet::periodic(m, ra), b = SymbolicSet::periodic(m, rb);
      std::size_t only_a = 0, only_b = 0;
      for (auto r : ra) only_a += std::find(rb.begin(), rb.end(), r) == rb.end();
      for (auto r : rb) only_b += std::find(ra.begin(), ra.end(), r) == ra.end();
      if ((only_a == 0) != (only_b == 0)) {
        CHECK_THROWS_AS(pairing_permutation(a, b), Error);
        continue;
      }
      auto phi = pairing_permutation(a, b);
      auto t = oracle::pairing(1000, in(ra, m), in(rb, m));
      for (u64 n = 1; n <= 1000; ++n) CHECK(phi.apply(from_u64(n)) == from_u64(t[n]));
    }
  }

  TEST_CASE("pairing errors and degenerate cases") {
    auto err = [](auto f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::ParseError;
    };
    CHECK(err([] { pairing_permutation(SymbolicSet::finite({1, 2}), SymbolicSet::finite({5})); }) ==
          ErrorCode::CardinalityMismatch);
    CHECK(err([] { pairing_permutation(SymbolicSet::finite({1}), evens); }) == ErrorCode::CardinalityMismatch);
    auto pred = SymbolicSet::predicate([](const Integer&) { return true; }, 100, "all");
    CHECK(err([&] { pairing_permutation(pred, evens); }) == ErrorCode::UnknownInfinitude);
    auto same = pairing_permutation(evens, evens);
    for (Integer n = 1; n <= 50; ++n) CHECK(same.apply(n) == n);
    auto fin = pairing_permutation(SymbolicSet::finite({2, 7}), SymbolicSet::finite({3, 4}));
    CHECK(fin.apply(2) == 3);
    CHECK(fin.apply(7) == 4);
    CHECK(fin.apply(4) == 7);
    CHECK(fin.apply(5) == 5);
    CHECK(infinite_and_coinfinite(odds, evens));
    CHECK_FALSE(infinite_and_coinfinite(SymbolicSet::full(), evens));
  }

  TEST_CASE("restricted pairing") {
    auto phi = pairing_permutation(odds, evens);
    auto psi = restrict_pairing(phi, SymbolicSet::finite({1}));
    CHECK(psi.apply(1) == 1);
    CHECK(psi.apply(2) == 2);
    CHECK(psi.apply(3) == 4);
    CHECK(psi.apply(4) == 3);
    for (Integer n = 5; n <= 500; ++n) CHECK(psi.invert(psi.apply(n)) == n);
    auto same = restrict_pairing(phi, SymbolicSet::empty());
    for (Integer n = 1; n <= 500; ++n) CHECK(same.apply(n) == phi.apply(n));
    auto vd = van_douwen_ratio_report(psi, 10000, 1000, Rational(1, 1000));
    CHECK(vd.holds);
  }

  TEST_CASE("defect profiles") {
    auto phi = pairing_permutation(odds, evens);
    auto d = levy_defect_profile(phi, IndexSequence::all(20000));
    for (std::size_t i = 0; i < 100; ++i) CHECK(d.crossings[i] == ((i + 1) % 2 == 1 ? 1 : 0));
    CHECK(d.classification.hint == LevyHint::LevyLikely);

    auto q = PermutationRule::quarter_block_swap();
    auto dq = levy_defect_profile(q, IndexSequence::explicit_points({7, 127}));
    CHECK(dq.defects[0] == Rational(4, 7));
    CHECK(dq.defects[1] == Rational(64, 127));
    CHECK(levy_defect_profile(q, IndexSequence::all(20000)).classification.hint == LevyHint::NonLevyLikely);

    auto id = levy_defect_profile(PermutationRule::identity(), IndexSequence::all(20000));
    CHECK(id.classification.hint == LevyHint::LevyLikely);
    CHECK(id.classification.tail_max == 0);

    auto short_run = levy_defect_profile(phi, IndexSequence::all(100));
    CHECK(short_run.classification.hint == LevyHint::Inconclusive);
  }

  TEST_CASE("defect modes and routes agree with brute force") {
    for (const auto& c : corpus()) {
      CAPTURE(c.rule.to_string());
      auto brute = oracle::crossings(600, [&](u64 k) { return c.table[k]; });
      auto seq = IndexSequence::all(600);
      auto up = levy_defect_profile(c.rule, seq, DefectMode::Upward, {}, std::nullopt, ScanRoute::Sweep);
      auto up_pp = levy_defect_profile(c.rule, seq, DefectMode::Upward, {}, std::nullopt, ScanRoute::PerPoint);
      auto direct = levy_defect_profile(c.rule, seq, DefectMode::UpwardDirect);
      auto down = levy_defect_profile(c.rule, seq, DefectMode::DownwardInclusive);
      for (u64 n = 1; n <= 600; ++n) {
        CHECK(up.crossings[n - 1] == from_u64(brute[n]));
        CHECK(up_pp.crossings[n - 1] == from_u64(brute[n]));
        CHECK(direct.crossings[n - 1] == from_u64(brute[n]));
        // |{k : pi(k) <= n <= k}|, brute force over k <= 2n + 2 (qswap moves by at most k/2).
        u64 expect = 0;
        for (u64 k = n; k <= std::min<u64>(kN, 3 * n + 4); ++k) expect += c.table[k] <= n ? 1 : 0;
        CHECK(down.crossings[n - 1] == from_u64(expect));
      }
    }
  }

  TEST_CASE("composition with the inverse has zero defect") {
    for (const auto& c : corpus()) {
      auto e = PermutationRule::compose(c.rule, PermutationRule::inverse(c.rule));
      auto d = levy_defect_profile(e, IndexSequence::all(2000));
      for (const auto& v : d.defects) CHECK(v == 0);
    }
  }

  TEST_CASE("pairing defect identity") {
    auto phi = pairing_permutation(SymbolicSet::periodic(5, {0, 1}), SymbolicSet::periodic(5, {3}));
    auto d = levy_defect_profile(phi, IndexSequence::all(3000));
    auto a = SymbolicSet::periodic(5, {0, 1}), b = SymbolicSet::periodic(5, {3});
    for (Integer n = 1; n <= 3000; ++n) {
      Integer gap = a.count(n) - b.count(n);
      CHECK(d.crossings[n.get_ui() - 1] == abs(gap));
    }
  }

  TEST_CASE("witness identity over the corpus") {
    for (const auto& c : corpus()) {
      CAPTURE(c.rule.to_string());
      auto w = levy_witness_set(c.rule, 4 * kN);
      auto seq = IndexSequence::all(2000);
      auto disp = displacement_profile(c.rule, w, seq);
      auto brute = oracle::crossings(2000, [&](u64 k) { return c.table[k]; });
      for (u64 n = 1; n <= 2000; ++n) CHECK(disp[n - 1].count - disp[n - 1].image_count == from_u64(brute[n]));
    }
  }

  TEST_CASE("displacement examples") {
    auto q = PermutationRule::quarter_block_swap();
    auto lower = SymbolicSet::predicate([](const Integer& n) { return oracle::in_lower_quarter(n.get_ui()); },
                                        100000, "lowerquarter");
    auto d = displacement_profile(q, lower, IndexSequence::explicit_points({7}));
    CHECK(d[0].value == Rational(4, 7));
    auto phi = pairing_permutation(odds, evens);
    CHECK(displacement_profile(phi, odds, IndexSequence::explicit_points({10}))[0].value == 0);
    for (const auto& e : displacement_profile(q, SymbolicSet::full(), IndexSequence::all(300))) CHECK(e.value == 0);
    auto w = levy_witness_set(q, 5000);
    for (Integer n = 1; n <= 5000; ++n) CHECK(w.contains(n) == oracle::in_lower_quarter(n.get_ui()));
    auto wphi = levy_witness_set(phi, 5000);
    CHECK(wphi.count(5000) == odds.count(5000));
  }

  TEST_CASE("image counts") {
    auto q = PermutationRule::quarter_block_swap();
    auto a = SymbolicSet::periodic(3, {1});
    auto seq = IndexSequence::geometric(5, 3, 6);
    auto counts = image_counts(q, a, seq);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      u64 n = seq.point(i).get_ui(), brute = 0;
      for (u64 m = 1; m <= n; ++m) {
        // qswap is an involution.
        brute += oracle::qswap(m) % 3 == 1 ? 1 : 0;
      }
      CHECK(counts[i] == from_u64(brute));
    }
  }

  TEST_CASE("ratio statistics") {
    auto q = PermutationRule::quarter_block_swap();
    auto r = ratio_stat_report(q, {Rational(1, 5)}, IndexSequence::explicit_points({127}));
    auto x = [](u64 k) { return oracle::Frac{static_cast<std::int64_t>(oracle::qswap(k)), static_cast<std::int64_t>(k)}; };
    CHECK(r.table.rows[0].exceptions[0] == oracle::exceptions(127, x, {1, 1}, {1, 5}));
    CHECK(r.table.rows[0].exceptions[0] == 104);

    auto id = ratio_stat_report(PermutationRule::identity(), {Rational(1, 10)}, IndexSequence::all(20000));
    CHECK(id.table.rows[0].tail_max == 0);
    CHECK(id.classification.hint == LevyHint::LevyLikely);

    auto phi = pairing_permutation(odds, evens);
    auto rp = ratio_stat_report(phi, {Rational(1, 10)}, IndexSequence::explicit_points({1000}));
    CHECK(rp.table.rows[0].densities[0] <= Rational(20, 1000));
  }

  TEST_CASE("exceptional sets") {
    auto q = PermutationRule::quarter_block_swap();
    auto ex = exceptional_sets(q, Rational(1, 2), 100, IndexSequence::explicit_points({100}));
    std::vector<Integer> above, below;
    for (u64 k = 1; k <= 100; ++k) {
      u64 v = oracle::qswap(k);
      if (2 * v > 3 * k) above.push_back(from_u64(k));
      if (2 * k > 2 * v + k) below.push_back(from_u64(k));
    }
    CHECK(ex.above.elements() == above);
    CHECK(ex.below.elements() == below);
    for (Integer k = 4; k <= 7; ++k) CHECK(ex.above.contains(k));
    CHECK(ex.below.count(100) == 0);  // k - pi(k) = 4^j <= k/2 on every upper block

    auto phi = pairing_permutation(odds, evens);
    auto ep = exceptional_sets(phi, Rational(1, 2), 100, IndexSequence::explicit_points({100}));
    CHECK(ep.above.elements() == std::vector<Integer>{1});
    CHECK(ep.below.count(100) == 0);
  }

  TEST_CASE("van Douwen ratio check") {
    CHECK(van_douwen_ratio_report(PermutationRule::identity(), 10000, 1000, Rational(1, 1000)).sup_deviation == 0);
    auto phi = van_douwen_ratio_report(pairing_permutation(odds, evens), 10000, 1000, Rational(1, 1000));
    CHECK(phi.sup_deviation <= Rational(1, 1000));
    auto q = van_douwen_ratio_report(PermutationRule::quarter_block_swap(), 10000, 1000, Rational(1, 1000));
    CHECK(q.sup_deviation >= Rational(1, 2));
    CHECK_FALSE(q.holds);
  }
}
