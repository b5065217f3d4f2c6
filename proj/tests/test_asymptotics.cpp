#include <doctest.h>

#include "densitylab/asymptotics.hpp"
#include "densitylab/error.hpp"
#include "oracles.hpp"

using namespace densitylab;
using oracle::u64;

namespace {

SymbolicSet dexp_blocks() { return SymbolicSet::blocks(BlockSource::double_exponential()); }

Rational spike(const Integer& n) {
  auto [num, den] = oracle::squares_spike(n.get_ui());
  return make_rational(num, den);
}

// Exact inf/sup of P[n]/n over [lo, hi].
std::pair<Rational, Rational> brute_extrema(const std::vector<u64>& p, u64 lo, u64 hi) {
  Rational inf = make_rational(from_u64(p[lo]), from_u64(lo)), sup = inf;
  for (u64 n = lo; n <= hi; ++n) {
    Rational r = make_rational(from_u64(p[n]), from_u64(n));
    inf = std::min(inf, r);
    sup = std::max(sup, r);
  }
  return {inf, sup};
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("sequences") {
    CHECK(IndexSequence::double_exponential(4).points() == std::vector<Integer>{4, 16, 256, 65536});
    CHECK(IndexSequence::doubled(IndexSequence::double_exponential(2)).points() == std::vector<Integer>{8, 32});
    CHECK(IndexSequence::geometric(3, 2, 4).points() == std::vector<Integer>{3, 6, 12, 24});
    CHECK(IndexSequence::all(5).points() == std::vector<Integer>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(IndexSequence::explicit_points({3, 3}), Error);
    CHECK_THROWS_AS(IndexSequence::explicit_points({0, 3}), Error);
    CHECK_THROWS_AS(IndexSequence::geometric(1, 1, 3), Error);
    CHECK(IndexSequence::double_exponential(3).to_string() == "dexp(3)");
  }

  TEST_CASE("ratio profile along the double-exponential points") {
    auto p = oracle::prefix(65536, oracle::in_dexp);
    auto prof = ratio_profile(dexp_blocks(), IndexSequence::double_exponential(4));
    REQUIRE(prof.size() == 4);
    for (const auto& e : prof) CHECK(e.value == make_rational(from_u64(p[e.n.get_ui()]), e.n));
    CHECK(prof[3].value == Rational(277, 65536));
  }

  TEST_CASE("closed-form and materialized routes agree") {
    auto s = SymbolicSet::union_of(dexp_blocks(), SymbolicSet::periodic(9, {2, 4}));
    auto seq = IndexSequence::geometric(5, 3, 10);
    CHECK(counts_along(s, seq, ProfileRoute::ClosedForm) == counts_along(s, seq, ProfileRoute::Materialized));
    auto all = IndexSequence::all(3000);
    CHECK(counts_along(s, all, ProfileRoute::ClosedForm) == counts_along(s, all, ProfileRoute::Materialized));
  }

  TEST_CASE("limit along dexp(4) oscillates at tol 1/100") {
    // The last two values 21/256 and 277/65536 differ by more than 1/100.
    auto r = limit_along(dexp_blocks(), IndexSequence::double_exponential(4), Rational(1, 100));
    CHECK_FALSE(r.converged());
    CHECK(r.tail_window == 2);
    CHECK(r.tail_inf == Rational(277, 65536));
    CHECK(r.tail_sup == Rational(21, 256));
    auto r6 = limit_along(dexp_blocks(), IndexSequence::double_exponential(6), Rational(1, 100));
    CHECK(r6.converged());
  }

  TEST_CASE("density window of the block set") {
    const u64 lo = 1024, hi = 1048576;
    auto p = oracle::prefix(hi, oracle::in_dexp);
    auto [inf, sup] = brute_extrema(p, lo, hi);
    auto d = density(dexp_blocks(), from_u64(hi), from_u64(lo), Rational(1, 1000));
    CHECK(d.upper == sup);
    CHECK(d.lower == inf);
    CHECK(d.upper == Rational(65812, 131071));
    CHECK(d.lower == Rational(92, 21845));
    CHECK(d.argmax == 131071);
    CHECK(d.argmin == 65535);
    CHECK(d.route == "runs");
    CHECK_FALSE(d.density_likely());
    auto dense = ratio_extrema_dense(dexp_blocks(), from_u64(lo), from_u64(hi));
    CHECK(dense.inf == inf);
    CHECK(dense.sup == sup);
  }

  TEST_CASE("runs and dense extrema agree on explicit blocks") {
    auto s = SymbolicSet::blocks(BlockSource::explicit_blocks({{3, 10}, {40, 41}, {100, 400}, {1000, 1500}}));
    for (u64 lo : {u64{1}, u64{5}, u64{50}, u64{399}}) {
      auto runs = ratio_extrema_runs(s, from_u64(lo), 3000);
      REQUIRE(runs.has_value());
      auto dense = ratio_extrema_dense(s, from_u64(lo), 3000);
      CHECK(runs->inf == dense.inf);
      CHECK(runs->sup == dense.sup);
    }
  }

  TEST_CASE("density of a periodic set") {
    auto d = density(SymbolicSet::periodic(4, {1, 2, 3}), 100000, 10000, Rational(1, 1000));
    CHECK(*d.exact == Rational(3, 4));
    CHECK(d.density_likely());
    CHECK(d.route == "dense");
  }

  TEST_CASE("statistical limit of the squares-spike sequence") {
    auto r = statistical_limit(spike, 1, {Rational(1, 10), Rational(1, 100)}, IndexSequence::explicit_points({127, 10000}));
    for (std::size_t row = 0; row < 2; ++row) {
      oracle::Frac eps{1, row == 0 ? 10 : 100};
      CHECK(r.rows[row].exceptions[0] == oracle::exceptions(127, oracle::squares_spike, {1, 1}, eps));
      CHECK(r.rows[row].exceptions[1] == oracle::exceptions(10000, oracle::squares_spike, {1, 1}, eps));
    }
    // 100 squares plus the prefix where 1/n >= 1/10.
    CHECK(r.rows[0].exceptions[1] <= 110);
    CHECK(r.rows[0].exceptions[1] == 107);
  }

  TEST_CASE("statistical limit of the identity ratio") {
    auto r = statistical_limit([](const Integer&) { return Rational(1); }, 1, {Rational(1, 10)},
                               IndexSequence::all(1000));
    CHECK(r.convergent_likely);
    CHECK(r.rows[0].tail_max == 0);
  }

  TEST_CASE("full-density witness") {
    auto w = full_density_witness(spike, 1, 10000, {Rational(1, 10), Rational(1, 100)});
    CHECK(w.ratio >= Rational(98, 100));
    CHECK(w.stage_bounds.back() == 10000);
    for (std::size_t j = 0; j < w.stage_bounds.size(); ++j) CHECK(w.stage_max_deviation[j] < w.stage_eps[j]);
    // Beyond the last stage start, every witness point is within 1/100 of 1.
    const Integer last_start = w.stage_bounds[w.stage_bounds.size() - 2];
    for (const auto& n : w.witness.elements()) {
      if (n > last_start) CHECK(abs(Rational(spike(n) - 1)) < Rational(1, 100));
    }
    CHECK(w.size == Integer(w.witness.elements().size()));

    auto constant = full_density_witness([](const Integer&) { return Rational(1); }, 1, 500, {Rational(1, 10)});
    CHECK(constant.ratio == 1);
    CHECK(constant.size == 500);

    auto alternating = [](const Integer& n) { return Rational(n % 2 == 0 ? 1 : -1); };
    CHECK_THROWS_AS(full_density_witness(alternating, 1, 1000, {Rational(1, 10)}), Error);
  }

  TEST_CASE("doubling sandwich holds at every profile point") {
    for (const auto& s : {dexp_blocks(), scale(dexp_blocks(), 2), SymbolicSet::periodic(5, {0, 3})}) {
      auto seq = IndexSequence::double_exponential(6);
      auto base = ratio_profile(s, seq);
      auto twice = ratio_profile(s, IndexSequence::doubled(seq));
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].value / 2 <= twice[i].value);
        CHECK(twice[i].value <= Rational(1, 2) + base[i].value / 2);
      }
    }
  }
}
