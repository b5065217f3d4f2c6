#include <doctest.h>

#include <random>

#include "densitylab/error.hpp"
#include "densitylab/measure.hpp"
#include "oracles.hpp"

using namespace densitylab;
using oracle::u64;

namespace {

SymbolicSet dexp_blocks() { return SymbolicSet::blocks(BlockSource::double_exponential()); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("combo partials for the block set") {
    auto r = evaluate(MeasureRule::blumlinger_combo(IndexSequence::double_exponential(4)), dexp_blocks(),
                      Rational(1, 1000));
    // 2·A(2n)/(2n) − A(n)/n from the oracle prefix counts.
    auto p = oracle::prefix(131072, oracle::in_dexp);
    REQUIRE(r.partials.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      u64 n = r.points[i].get_ui();
      Rational expect = 2 * make_rational(from_u64(p[2 * n]), from_u64(2 * n)) - make_rational(from_u64(p[n]), from_u64(n));
      CHECK(r.partials[i] == expect);
      CHECK(r.partials[i] == make_rational(from_u64(n - 1), from_u64(n)));
    }
    CHECK(r.constituents.size() == 2);
    // 65535/65536 − 255/256 > 1/1000, so four terms only bracket the value.
    CHECK_FALSE(r.has_value());
    CHECK(r.lo == Rational(255, 256));
    CHECK(r.hi == Rational(65535, 65536));
    CHECK(evaluate(MeasureRule::blumlinger_combo(IndexSequence::double_exponential(6)), dexp_blocks(),
                   Rational(1, 1000))
              .has_value());
  }

  TEST_CASE("combo partials for the doubled block set") {
    auto r = evaluate(MeasureRule::blumlinger_combo(IndexSequence::double_exponential(4)), scale(dexp_blocks(), 2),
                      Rational(1, 1000));
    CHECK(r.partials == std::vector<Rational>{Rational(1, 4), Rational(1, 16), Rational(1, 256), Rational(1, 65536)});
  }

  TEST_CASE("combo partials stay in [0, 1]") {
    std::mt19937_64 rng(3);
    auto seq = IndexSequence::geometric(3, 3, 12);
    for (int t = 0; t < 20; ++t) {
      u64 m = 2 + rng() % 9;
      std::vector<std::uint64_t> rs;
      for (u64 r = 0; r < m; ++r)
        if (rng() % 2) rs.push_back(r);
      auto s = SymbolicSet::union_of(SymbolicSet::periodic(m, rs), dexp_blocks());
      auto r = evaluate(MeasureRule::blumlinger_combo(seq), s, Rational(1, 1000));
      for (const auto& v : r.partials) {
        CHECK(v >= 0);
        CHECK(v <= 1);
      }
    }
  }

  TEST_CASE("subsequence limits and intervals") {
    auto thirds = SymbolicSet::periodic(3, {1});
    auto r = evaluate(MeasureRule::subsequence_limit(IndexSequence::geometric(3, 3, 10)), thirds, Rational(1, 1000));
    CHECK(r.has_value());
    CHECK(r.value == Rational(1, 3));
    auto osc = evaluate(MeasureRule::subsequence_limit(IndexSequence::double_exponential(4)), dexp_blocks(),
                        Rational(1, 1000));
    CHECK_FALSE(osc.has_value());
    CHECK(osc.lo == Rational(277, 65536));
    CHECK(osc.hi == Rational(21, 256));
  }

  TEST_CASE("mixtures") {
    auto seq = IndexSequence::geometric(4, 2, 12);
    auto a = MeasureRule::subsequence_limit(seq);
    auto b = MeasureRule::blumlinger_combo(seq);
    CHECK(code_of([&] { MeasureRule::mixture({{Rational(1, 2), a}, {Rational(1, 3), b}}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { MeasureRule::mixture({{Rational(1), MeasureRule::mixture({{Rational(1), a}})}}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { MeasureRule::mixture({{Rational(0), a}, {Rational(1), b}}); }) ==
          ErrorCode::InvalidArgument);
    auto mix = MeasureRule::mixture({{Rational(1, 4), a}, {Rational(3, 4), b}});
    auto r = evaluate(mix, SymbolicSet::periodic(4, {1, 2, 3}), Rational(1, 1000));
    CHECK(r.has_value());
    CHECK(r.value == Rational(3, 4));
    CHECK(r.terms.size() == 2);
    CHECK(mix.to_string() == "mix(1/4:sublim(geom(4,2,12)),3/4:combo(geom(4,2,12)))");

    auto osc = MeasureRule::mixture({{Rational(1, 2), MeasureRule::subsequence_limit(IndexSequence::double_exponential(4))},
                                     {Rational(1, 2), a}});
    CHECK_FALSE(evaluate(osc, dexp_blocks(), Rational(1, 1000)).has_value());
  }

  TEST_CASE("axioms on a small corpus") {
    auto mu = MeasureRule::blumlinger_combo(IndexSequence::geometric(8, 2, 12));
    std::vector<DensitySet> corpus{{SymbolicSet::periodic(4, {1}), Rational(1, 4)},
                                   {SymbolicSet::finite({3, 9}), Rational(0)},
                                   {SymbolicSet::complement_of(SymbolicSet::periodic(8, {0})), Rational(7, 8)}};
    std::vector<std::pair<SymbolicSet, SymbolicSet>> pairs{
        {SymbolicSet::periodic(4, {1}), SymbolicSet::periodic(4, {2, 3})}};
    auto r = check_axioms(mu, corpus, pairs, Rational(1, 1000));
    CHECK(r.passed);
    CHECK(r.normalization.deviation == 0);
    CHECK(r.max_additivity_deviation == 0);

    std::vector<std::pair<SymbolicSet, SymbolicSet>> overlapping{
        {SymbolicSet::periodic(4, {1}), SymbolicSet::periodic(2, {1})}};
    CHECK(code_of([&] { check_axioms(mu, corpus, overlapping, Rational(1, 1000)); }) == ErrorCode::InvalidArgument);

    std::vector<DensitySet> wrong{{SymbolicSet::periodic(4, {1}), Rational(1, 2)}};
    CHECK_FALSE(check_axioms(mu, wrong, {}, Rational(1, 1000)).passed);
  }

  TEST_CASE("invariance") {
    auto odds = SymbolicSet::periodic(2, {1}), evens = SymbolicSet::periodic(2, {0});
    auto phi = pairing_permutation(odds, evens);
    auto mu = MeasureRule::subsequence_limit(IndexSequence::geometric(10, 2, 12));
    auto r = check_invariance(mu, phi, {odds, SymbolicSet::periodic(3, {0}), SymbolicSet::periodic(6, {1, 4})},
                              Rational(1, 100));
    CHECK(r.passed);

    auto q = PermutationRule::quarter_block_swap();
    auto w = levy_witness_set(q, 1'000'000);
    auto along = MeasureRule::subsequence_limit(IndexSequence::explicit_points({127, 511, 2047, 8191, 32767}));
    auto rq = check_invariance(along, q, {w}, Rational(1, 100));
    CHECK_FALSE(rq.passed);
    CHECK(rq.max_deviation >= Rational(1, 2));
  }

  TEST_CASE("violation certificate for the quarter-block swap") {
    auto q = PermutationRule::quarter_block_swap();
    ViolationOptions o;
    o.tail_start = Integer(100);
    auto c = find_invariance_violation(q, 4096, o);
    CHECK(c.subsequence.points() == std::vector<Integer>{127, 511, 2047});
    CHECK(c.gap == Rational(1024, 2047));
    CHECK(recompute_gap(c, q) == c.gap);
    for (const auto& e : c.profile) {
      u64 n = e.n.get_ui();
      u64 j4 = (n + 1) / 2;  // n = 2·4^j − 1
      CHECK(e.value == make_rational(from_u64(j4), e.n));
    }
    auto phi = pairing_permutation(SymbolicSet::periodic(2, {1}), SymbolicSet::periodic(2, {0}));
    CHECK(code_of([&] { find_invariance_violation(phi, 20000); }) == ErrorCode::NoViolationFound);
  }

  TEST_CASE("equal-measure test") {
    auto evens = SymbolicSet::periodic(2, {0});
    std::vector<IndexSequence> seqs{IndexSequence::double_exponential(6), IndexSequence::all(20000)};
    auto same = equal_measure_test(evens, SymbolicSet::difference_of(evens, SymbolicSet::finite({2, 4, 6})), seqs,
                                   Rational(1, 1000), 20000, 5000);
    CHECK(same.equivalent_likely);
    CHECK(same.dense_tail_sup == Rational(3, 5000));
    auto other = equal_measure_test(evens, SymbolicSet::periodic(3, {0}), seqs, Rational(1, 1000), 20000, 2000);
    CHECK_FALSE(other.equivalent_likely);
    CHECK(other.dense_tail_sup >= Rational(1, 6));
  }

  TEST_CASE("counterexample suite") {
    auto r = counterexample_suite();
    REQUIRE(r.combo_a.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
      Integer n = double_exp(i + 1);
      CHECK(r.combo_a[i] == make_rational(n - 1, n));
      CHECK(r.combo_2a[i] == make_rational(1, n));
    }
    CHECK(r.mu_exceeds_ud);
    CHECK(r.ud_a.upper == Rational(65812, 131071));
    CHECK(r.ratio_identically_one);
    CHECK(r.scaling_violated);
    CHECK_FALSE(r.dominance_failure.has_value());
    CHECK(r.tail_bound_holds);
    CHECK(r.density_b == Rational(3, 4));
    CHECK(r.mu_b.value == Rational(3, 4));
    CHECK(r.monotonicity_violated);
    for (const auto& s : r.sandwich) CHECK(s.holds);
    // Combo fails (a) and (b); the mixture passes both; the doubled-sequence probe fails (b) on A.
    REQUIRE(r.mixture_rows.size() == 9);
    std::vector<CheckStatus> expect{CheckStatus::Fail, CheckStatus::Fail, CheckStatus::Pass,
                                    CheckStatus::Pass, CheckStatus::Pass, CheckStatus::Pass,
                                    CheckStatus::Pass, CheckStatus::Fail, CheckStatus::Pass};
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(r.mixture_rows[i].status == expect[i]);
  }
}
