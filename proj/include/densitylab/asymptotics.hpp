#pragma once

// Density functionals, limits along index sequences and statistical
// convergence. Every number reported here is an exact rational; verdicts are
// finite-horizon evidence and carry the window they were computed on.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/nset.hpp"
#include "densitylab/numeric.hpp"
#include "densitylab/sequence.hpp"

namespace densitylab {

struct ProfileEntry {
  Integer n;
  Rational value;
};

using Profile = std::vector<ProfileEntry>;

enum class ProfileRoute {
  Auto,
  ClosedForm,    // one count() call per point
  Materialized,  // one indicator sweep up to the last point
};

/// A(n) at every point of `seq`.
std::vector<Integer> counts_along(const SymbolicSet& s, const IndexSequence& seq,
                                  ProfileRoute route = ProfileRoute::Auto);

/// (n, A(n)/n) at every point of `seq`.
Profile ratio_profile(const SymbolicSet& s, const IndexSequence& seq,
                      ProfileRoute route = ProfileRoute::Auto);

/// Default tail window: the last ⌈size/2⌉ points.
std::size_t default_tail_window(std::size_t size);

struct LimitReport {
  enum class Verdict { Converged, Oscillating };

  std::string sequence;  // the IndexSequence the report is stamped with
  std::vector<Integer> points;
  std::vector<Rational> values;
  Verdict verdict = Verdict::Oscillating;
  Rational value;         // last value; meaningful when Converged
  Rational achieved_tol;  // tail_sup - tail_inf
  Rational tail_inf;
  Rational tail_sup;
  std::size_t tail_window = 0;

  bool converged() const { return verdict == Verdict::Converged; }
};

/// Tail analysis of an already evaluated value list.
LimitReport limit_of_values(std::string sequence, std::vector<Integer> points,
                            std::vector<Rational> values, const Rational& tol,
                            std::optional<std::size_t> tail_window = std::nullopt);

/// A(n)/n along `seq`: Converged(last value) when the tail oscillation is at
/// most `tol`, Oscillating(tail inf, tail sup) otherwise.
LimitReport limit_along(const SymbolicSet& s, const IndexSequence& seq, const Rational& tol,
                        std::optional<std::size_t> tail_window = std::nullopt);

struct WindowExtrema {
  Rational inf;
  Rational sup;
  Integer argmin;
  Integer argmax;
};

/// Exact inf/sup of A(n)/n over every integer n in [lo, hi] by enumeration;
/// requires hi <= enumeration_budget().
WindowExtrema ratio_extrema_dense(const SymbolicSet& s, const Integer& lo, const Integer& hi);

/// The same extrema from run boundaries only (A(n)/n rises inside a run and
/// falls in a gap). Available for sets with interval structure.
std::optional<WindowExtrema> ratio_extrema_runs(const SymbolicSet& s, const Integer& lo,
                                                const Integer& hi);

struct DensityReport {
  Rational lower;
  Rational upper;
  Integer argmin;
  Integer argmax;
  std::optional<Rational> exact;
  Integer horizon;
  Integer tail_start;
  Rational tol;
  std::string route;  // "runs" or "dense"

  /// upper - lower <= tol over the window.
  bool density_likely() const { return upper - lower <= tol; }
};

DensityReport density(const SymbolicSet& s, const Integer& horizon, const Integer& tail_start,
                      const Rational& tol);

/// A rational-valued sequence x_n, n >= 1.
using IndexRule = std::function<Rational(const Integer&)>;

struct StatRow {
  Rational eps;
  std::vector<Integer> exceptions;  // |A_eps ∩ [1, n]| per checkpoint
  std::vector<Rational> densities;  // exceptions / n
  Rational tail_max;
};

struct StatLimitReport {
  Rational limit;
  std::string checkpoints_spec;
  std::vector<Integer> checkpoints;
  std::vector<StatRow> rows;
  Rational slack;
  std::size_t tail_window = 0;
  bool convergent_likely = false;  // every row's tail_max <= slack
};

inline const Rational kDefaultStatSlack{1, 100};

/// Exception-set densities |{k <= n : |x_k - L| >= eps}| / n for every eps and
/// checkpoint, evaluated in one sweep up to the last checkpoint.
StatLimitReport statistical_limit(const IndexRule& x, const Rational& limit,
                                  const std::vector<Rational>& eps_grid,
                                  const IndexSequence& checkpoints,
                                  const Rational& slack = kDefaultStatSlack,
                                  std::optional<std::size_t> tail_window = std::nullopt);

struct WitnessOptions {
  Integer stage_ratio = 10;       // geometric stage boundaries
  Rational floor{3, 4};           // minimal witness ratio at the horizon
};

struct FridyWitness {
  SymbolicSet witness;                  // FiniteList within [1, horizon]
  Integer size;
  Rational ratio;                       // size / horizon
  std::vector<Integer> stage_bounds;    // n_1 < ... < n_J = horizon
  std::vector<Rational> stage_eps;
  std::vector<Rational> stage_max_deviation;  // max |x_n - L| over witness points per stage
};

/// Builds a density-one index set along which x tends to L: [1, horizon]
/// minus the eps_j-exception points of each stage (n_{j-1}, n_j].
/// Throws WitnessTooSparse when the witness ratio falls below the floor.
FridyWitness full_density_witness(const IndexRule& x, const Rational& limit,
                                  const Integer& horizon, const std::vector<Rational>& eps_schedule,
                                  const WitnessOptions& options = {});

}  // namespace densitylab
