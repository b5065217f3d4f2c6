#include "densitylab/cli.hpp"

#include <algorithm>
#include <set>

#include <CLI11.hpp>

#include "densitylab/error.hpp"
#include "densitylab/parse.hpp"
#include "densitylab/report.hpp"

namespace densitylab {

namespace {

struct RawOptions {
  std::string horizon = "100000";
  std::string tail;
  std::string tol = "1/1000";
  std::string budget = "10000000";
  std::string dexp;
  std::string format = "json";
  std::string seed = "0";
  std::vector<std::string> seq;
  std::string eps = "1/10,1/100";
};

struct Config {
  Integer horizon;
  Integer tail;
  Rational tol;
  std::uint64_t budget = 0;
  unsigned long dexp = 4;
  bool csv = false;
  std::uint64_t seed = 0;
  std::vector<std::string> seq;
  std::vector<Rational> eps;
};

Error input_error(const std::string& msg) { return Error(ErrorCode::InvalidArgument, msg); }

Integer positive_integer(const std::string& text, const char* flag) {
  auto v = parse_integer(text);
  if (!v || *v < 1) throw input_error(std::string(flag) + " expects a positive integer, got '" + text + "'");
  return *v;
}

Config resolve(const RawOptions& raw, const std::string& command) {
  Config c;
  c.horizon = positive_integer(raw.horizon, "--horizon");
  c.tail = raw.tail.empty() ? std::max(Integer(1), Integer(c.horizon / 10)) : positive_integer(raw.tail, "--tail");
  if (c.tail >= c.horizon) throw input_error("--tail must be below --horizon");
  auto tol = parse_rational(raw.tol);
  if (!tol || *tol <= 0) throw input_error("--tol expects a positive rational, got '" + raw.tol + "'");
  c.tol = *tol;
  c.budget = require_u64(positive_integer(raw.budget, "--budget"), "--budget");
  if (from_u64(c.budget) < c.horizon) throw input_error("--budget must be at least --horizon");
  const unsigned long dexp_default = command == "suite" ? 6 : 4;
  c.dexp = raw.dexp.empty() ? dexp_default
                            : static_cast<unsigned long>(require_u64(positive_integer(raw.dexp, "--dexp"), "--dexp"));
  if (raw.format != "json" && raw.format != "csv") throw input_error("--format is json or csv");
  c.csv = raw.format == "csv";
  auto seed = parse_integer(raw.seed);
  if (!seed || *seed < 0) throw input_error("--seed expects a nonnegative integer");
  c.seed = require_u64(*seed, "--seed");
  c.seq = raw.seq;
  std::size_t start = 0;
  while (start <= raw.eps.size()) {
    auto end = raw.eps.find(',', start);
    if (end == std::string::npos) end = raw.eps.size();
    auto e = parse_rational(raw.eps.substr(start, end - start));
    if (!e || *e <= 0) throw input_error("--eps expects positive rationals separated by commas");
    c.eps.push_back(*e);
    start = end + 1;
  }
  return c;
}

Json config_json(const Config& c) {
  Json j;
  j["horizon"] = to_json(c.horizon);
  j["tail"] = to_json(c.tail);
  j["tol"] = to_json(c.tol);
  j["budget"] = std::to_string(c.budget);
  j["dexp"] = c.dexp;
  j["format"] = c.csv ? "csv" : "json";
  j["seed"] = std::to_string(c.seed);
  j["seq"] = c.seq;
  j["eps"] = to_json(c.eps);
  return j;
}

// n = 2^j - 1 up to the horizon, then the horizon itself.
IndexSequence sample_points(const Integer& horizon) {
  std::vector<Integer> pts;
  for (Integer n = 1; n < horizon; n = 2 * n + 1) pts.push_back(n);
  pts.push_back(horizon);
  return IndexSequence::explicit_points(std::move(pts));
}

IndexSequence single_sequence(const Config& c) {
  if (c.seq.size() > 1) throw input_error("this command takes at most one --seq");
  return c.seq.empty() ? sample_points(c.horizon) : parse_sequence(c.seq.front());
}

std::size_t tail_window(const Config& c) {
  return require_u64(Integer(c.horizon - c.tail + 1), "tail window");
}

struct Output {
  Json result;
  CsvTable csv;
};

Output run_density(const Config& c, const std::string& set_text) {
  auto s = parse_set(set_text);
  auto seq = single_sequence(c);
  Output o{Json::object(), csv_table()};
  o.result["set"] = s.to_string();
  o.result["density"] = to_json(density(s, c.horizon, c.tail, c.tol));
  auto profile = ratio_profile(s, seq);
  Json rows = Json::array();
  for (const auto& e : profile) {
    rows.push_back({{"n", to_json(e.n)}, {"value", to_json(e.value)}});
    o.csv.add({}, e.n, e.value);
  }
  o.result["profile_sequence"] = seq.to_string();
  o.result["profile"] = std::move(rows);
  return o;
}

Json defect_section(const PermutationRule& p, const Config& c, CsvTable& csv) {
  Json j;
  auto dense = levy_defect_profile(p, IndexSequence::all(c.horizon), DefectMode::Upward, {}, tail_window(c));
  auto table = levy_defect_profile(p, single_sequence(c));
  j["classification"] = to_json(dense.classification);
  j["table_sequence"] = table.sequence;
  Json rows = Json::array();
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    rows.push_back({{"n", to_json(table.points[i])},
                    {"crossings", to_json(table.crossings[i])},
                    {"defect", to_json(table.defects[i])}});
    csv.add({}, table.points[i], table.defects[i]);
  }
  j["table"] = std::move(rows);
  return j;
}

Output run_levy(const Config& c, const std::string& perm_text) {
  auto p = parse_permutation(perm_text);
  Output o{Json::object(), csv_table()};
  o.result["permutation"] = p.to_string();
  o.result["defect"] = defect_section(p, c, o.csv);
  o.result["ratio_check"] = to_json(van_douwen_ratio_report(p, c.horizon, c.tail, c.tol));
  return o;
}

Output run_statlim(const Config& c, const std::string& perm_text) {
  auto p = parse_permutation(perm_text);
  Output o{Json::object(), csv_table({"eps"})};
  o.result["permutation"] = p.to_string();
  auto checkpoints = c.seq.empty() ? IndexSequence::all(c.horizon) : single_sequence(c);
  auto report = ratio_stat_report(p, c.eps, checkpoints);
  o.result["ratio_statistics"] = to_json(report);

  auto shown = sample_points(checkpoints.last()).points();
  std::set<Integer> wanted(shown.begin(), shown.end());
  const auto& pts = report.table.checkpoints;
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (c.seq.empty() && !wanted.count(pts[i])) continue;
      o.csv.add({decimal_shadow(row.eps)}, pts[i], row.densities[i]);
    }
  }

  auto schedule = c.eps;
  std::sort(schedule.begin(), schedule.end(), std::greater<>());
  IndexRule ratio = [p](const Integer& n) { return make_rational(p.apply(n), n); };
  try {
    o.result["full_density_witness"] = to_json(full_density_witness(ratio, 1, c.horizon, schedule));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::WitnessTooSparse) throw;
    o.result["full_density_witness"] = {{"error", e.what()}};
  }
  return o;
}

Output run_displacement(const Config& c, const std::string& perm_text, const std::string& set_text) {
  auto p = parse_permutation(perm_text);
  auto s = parse_set(set_text);
  auto seq = single_sequence(c);
  Output o{Json::object(), csv_table()};
  auto profile = displacement_profile(p, s, seq);
  o.result["permutation"] = p.to_string();
  o.result["set"] = s.to_string();
  o.result["sequence"] = seq.to_string();
  o.result["profile"] = to_json(profile);
  for (const auto& e : profile) o.csv.add({}, e.n, e.value);
  return o;
}

void measure_rows(const MeasureReport& r, const std::string& term, CsvTable& csv) {
  for (std::size_t i = 0; i < r.points.size(); ++i) csv.add({term}, r.points[i], r.partials[i]);
  for (std::size_t t = 0; t < r.terms.size(); ++t) measure_rows(r.terms[t].second, std::to_string(t + 1), csv);
}

Output run_measure(const Config& c, const std::string& measure_text, const std::string& set_text) {
  auto mu = parse_measure(measure_text);
  auto s = parse_set(set_text);
  Output o{Json::object(), csv_table({"term"})};
  auto r = evaluate(mu, s, c.tol);
  o.result["set"] = s.to_string();
  o.result["measure"] = to_json(r);
  measure_rows(r, "0", o.csv);
  return o;
}

Output run_pair(const Config& c, const std::string& a_text, const std::string& b_text) {
  auto a = parse_set(a_text);
  auto b = parse_set(b_text);
  auto p = pairing_permutation(a, b);
  Output o{Json::object(), csv_table()};
  o.result["permutation"] = p.to_string();
  o.result["disjoint_a"] = p.disjoint_a().to_string();
  o.result["disjoint_b"] = p.disjoint_b().to_string();
  Json head = Json::array();
  for (Integer n = 1; n <= 16; ++n) head.push_back(to_json(p.apply(n)));
  o.result["first_values"] = std::move(head);
  o.result["defect"] = defect_section(p, c, o.csv);
  return o;
}

Output run_witness(const Config& c, const std::string& perm_text) {
  auto p = parse_permutation(perm_text);
  Output o{Json::object(), csv_table()};
  o.result["permutation"] = p.to_string();
  ViolationOptions options;
  options.tail_start = c.tail;
  try {
    auto cert = find_invariance_violation(p, c.horizon, options);
    o.result["found"] = true;
    o.result["certificate"] = to_json(cert);
    o.result["recomputed_gap"] = to_json(recompute_gap(cert, p));
    for (const auto& e : cert.profile) o.csv.add({}, e.n, e.value);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoViolationFound) throw;
    o.result["found"] = false;
    o.result["reason"] = e.what();
  }
  return o;
}

Output run_equal(const Config& c, const std::string& a_text, const std::string& b_text) {
  auto a = parse_set(a_text);
  auto b = parse_set(b_text);
  std::vector<IndexSequence> corpus;
  if (c.seq.empty()) {
    // Shorter double-exponential tails still contain n = 256.
    auto d = IndexSequence::double_exponential(std::max(c.dexp, 6UL));
    corpus = {d, IndexSequence::doubled(d), IndexSequence::all(c.horizon)};
  } else {
    for (const auto& text : c.seq) corpus.push_back(parse_sequence(text));
  }
  auto r = equal_measure_test(a, b, corpus, c.tol, c.horizon, c.tail);
  Output o{Json::object(), csv_table({"sequence"})};
  o.result["a"] = a.to_string();
  o.result["b"] = b.to_string();
  o.result["equal_measure"] = to_json(r);
  o.csv.add({"dense"}, r.dense_argmax, r.dense_tail_sup);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    o.csv.add({r.per_sequence[i].first}, corpus[i].last(), r.per_sequence[i].second);
  }
  return o;
}

Output run_suite(const Config& c) {
  SuiteConfig sc;
  sc.dexp_terms = c.dexp;
  sc.tol = c.tol;
  auto r = counterexample_suite(sc);
  return {to_json(r), to_csv(r)};
}

class BudgetGuard {
 public:
  explicit BudgetGuard(std::uint64_t budget) : saved_(enumeration_budget()) { set_enumeration_budget(budget); }
  ~BudgetGuard() { set_enumeration_budget(saved_); }
  BudgetGuard(const BudgetGuard&) = delete;
  BudgetGuard& operator=(const BudgetGuard&) = delete;

 private:
  std::uint64_t saved_;
};

bool is_budget(ErrorCode code) {
  return code == ErrorCode::EnumerationBudgetExceeded || code == ErrorCode::PredicateCapExceeded;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact asymptotic-density, Levy-group and density-measure experiments.", "densitylab"};
  app.require_subcommand(1);
  RawOptions raw;
  app.add_option("--horizon", raw.horizon, "Largest n examined (default 100000)");
  app.add_option("--tail", raw.tail, "First n of the tail window (default horizon/10)");
  app.add_option("--tol", raw.tol, "Tolerance as p/q or decimal (default 1/1000)");
  app.add_option("--budget", raw.budget, "Enumeration budget (default 10000000)");
  app.add_option("--dexp", raw.dexp, "Double-exponential terms (default 4, suite 6)");
  app.add_option("--format", raw.format, "json or csv (default json)");
  app.add_option("--seed", raw.seed, "Seed recorded in the config echo (default 0)");
  app.add_option("--seq", raw.seq, "Index sequence, e.g. dexp(4) or geom(2,2,10)");
  app.add_option("--eps", raw.eps, "Comma-separated epsilons for statistical limits (default 1/10,1/100)");

  std::string x, y;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* density_cmd = sub("density",
                          "Lower and upper asymptotic density: inf and sup of A(n)/n over tail <= n <= horizon, "
                          "the exact density d(A) when known, and A(n)/n along a sequence.");
  density_cmd->add_option("SET", x, "Set expression")->required();
  auto* levy_cmd = sub("levy",
                       "Levy group membership: the defect |{k <= n < pi(k)}|/n over the tail window, "
                       "and the ratio check pi(n)/n -> 1.");
  levy_cmd->add_option("PERM", x, "Permutation expression")->required();
  auto* statlim_cmd = sub("statlim",
                          "Statistical convergence of pi(n)/n to 1: exception densities per epsilon, and a "
                          "density-one index set along which the ratio converges.");
  statlim_cmd->add_option("PERM", x, "Permutation expression")->required();
  auto* displacement_cmd = sub("displacement",
                               "Displacement (A(n) - (pi A)(n))/n of a set under a permutation along a sequence.");
  displacement_cmd->add_option("PERM", x, "Permutation expression")->required();
  displacement_cmd->add_option("SET", y, "Set expression")->required();
  auto* measure_cmd = sub("measure",
                          "Density measure of a set: limit of A(n)/n along a sequence, the combination "
                          "2 lim A(2n)/(2n) - lim A(n)/n, or a finite mixture of these.");
  measure_cmd->add_option("MEASURE", x, "Measure expression")->required();
  measure_cmd->add_option("SET", y, "Set expression")->required();
  auto* pair_cmd = sub("pair",
                       "Interlaced pairing permutation swapping the i-th elements of A and B, with its Levy defect.");
  pair_cmd->add_option("SETA", x, "Set expression")->required();
  pair_cmd->add_option("SETB", y, "Set expression")->required();
  auto* witness_cmd = sub("witness",
                          "Invariance violation for a permutation outside the Levy group: the set "
                          "{k : pi(k) > k} and points where its displacement stays large.");
  witness_cmd->add_option("PERM", x, "Permutation expression")->required();
  auto* equal_cmd = sub("equal",
                        "Equal-measure criterion: sup |A(n) - B(n)|/n over the tail, and the limit of |A(n) - B(n)|/n along "
                        "each sequence (default dexp(max(dexp,6)), its doubling, and all(horizon)).");
  equal_cmd->add_option("SETA", x, "Set expression")->required();
  equal_cmd->add_option("SETB", y, "Set expression")->required();
  sub("suite",
      "Counterexamples around the block set A = union of [2^(2^i), 2*2^(2^i)): combo measure versus upper "
      "density, failure of scaling and monotonicity, the doubling sandwich, and mixtures.");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Config config = resolve(raw, command);
    BudgetGuard guard(config.budget);
    Output o;
    if (command == "density") o = run_density(config, x);
    else if (command == "levy") o = run_levy(config, x);
    else if (command == "statlim") o = run_statlim(config, x);
    else if (command == "displacement") o = run_displacement(config, x, y);
    else if (command == "measure") o = run_measure(config, x, y);
    else if (command == "pair") o = run_pair(config, x, y);
    else if (command == "witness") o = run_witness(config, x);
    else if (command == "equal") o = run_equal(config, x, y);
    else o = run_suite(config);

    if (config.csv) {
      o.csv.write(out);
    } else {
      Json doc;
      doc["schema"] = kSchema;
      doc["command"] = command;
      Json inputs = Json::array();
      if (!x.empty()) inputs.push_back(x);
      if (!y.empty()) inputs.push_back(y);
      doc["inputs"] = std::move(inputs);
      doc["config"] = config_json(config);
      doc["result"] = std::move(o.result);
      out << doc.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << " (offending horizon " << e.horizon().get_str() << ")\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_budget(e.code()) ? kExitBudget : kExitInput;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace densitylab
