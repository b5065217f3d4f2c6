#include "densitylab/report.hpp"

namespace densitylab {

Json to_json(const Integer& v) { return v.get_str(); }

Json to_json(const Rational& q) {
  Json j;
  j["num"] = q.get_num().get_str();
  j["den"] = q.get_den().get_str();
  j["decimal"] = decimal_value(q);
  return j;
}

Json to_json(const std::vector<Integer>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(to_json(x));
  return j;
}

Json to_json(const std::vector<Rational>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(to_json(x));
  return j;
}

namespace {

Json optional_json(const std::optional<Rational>& q) { return q ? to_json(*q) : Json(nullptr); }

Json status_json(CheckStatus s) { return to_string(s); }

Json point_table(const std::vector<Integer>& points, const std::vector<Rational>& values) {
  Json j = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    j.push_back({{"n", to_json(points[i])}, {"value", to_json(values[i])}});
  }
  return j;
}

}  // namespace

Json to_json(const LimitReport& r) {
  Json j;
  j["sequence"] = r.sequence;
  j["verdict"] = r.converged() ? "Converged" : "Oscillating";
  if (r.converged()) j["value"] = to_json(r.value);
  j["achieved_tol"] = to_json(r.achieved_tol);
  j["tail_inf"] = to_json(r.tail_inf);
  j["tail_sup"] = to_json(r.tail_sup);
  j["tail_window"] = r.tail_window;
  j["profile"] = point_table(r.points, r.values);
  return j;
}

Json to_json(const DensityReport& r) {
  Json j;
  j["horizon"] = to_json(r.horizon);
  j["tail_start"] = to_json(r.tail_start);
  j["route"] = r.route;
  j["lower"] = to_json(r.lower);
  j["argmin"] = to_json(r.argmin);
  j["upper"] = to_json(r.upper);
  j["argmax"] = to_json(r.argmax);
  j["exact_density"] = optional_json(r.exact);
  j["tol"] = to_json(r.tol);
  j["density_likely"] = r.density_likely();
  return j;
}

Json to_json(const StatLimitReport& r) {
  Json j;
  j["limit"] = to_json(r.limit);
  j["checkpoints"] = r.checkpoints_spec;
  j["slack"] = to_json(r.slack);
  j["tail_window"] = r.tail_window;
  j["convergent_likely"] = r.convergent_likely;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["eps"] = to_json(row.eps);
    x["tail_max"] = to_json(row.tail_max);
    x["last_exceptions"] = row.exceptions.empty() ? Json(nullptr) : to_json(row.exceptions.back());
    x["last_density"] = row.densities.empty() ? Json(nullptr) : to_json(row.densities.back());
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const FridyWitness& w) {
  Json j;
  j["size"] = to_json(w.size);
  j["ratio"] = to_json(w.ratio);
  Json stages = Json::array();
  for (std::size_t i = 0; i < w.stage_bounds.size(); ++i) {
    stages.push_back({{"bound", to_json(w.stage_bounds[i])},
                      {"eps", to_json(w.stage_eps[i])},
                      {"max_deviation", to_json(w.stage_max_deviation[i])}});
  }
  j["stages"] = std::move(stages);
  return j;
}

Json to_json(const TailClassification& c) {
  Json j;
  j["hint"] = to_string(c.hint);
  j["tail_max"] = to_json(c.tail_max);
  j["tail_points_above"] = c.tail_points_above;
  j["tail_window"] = c.tail_window;
  return j;
}

Json to_json(const DefectProfile& d) {
  Json j;
  j["permutation"] = d.permutation;
  j["sequence"] = d.sequence;
  j["classification"] = to_json(d.classification);
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    rows.push_back({{"n", to_json(d.points[i])},
                    {"crossings", to_json(d.crossings[i])},
                    {"defect", to_json(d.defects[i])}});
  }
  j["table"] = std::move(rows);
  return j;
}

Json to_json(const std::vector<DisplacementEntry>& profile) {
  Json j = Json::array();
  for (const auto& e : profile) {
    j.push_back({{"n", to_json(e.n)},
                 {"count", to_json(e.count)},
                 {"image_count", to_json(e.image_count)},
                 {"value", to_json(e.value)}});
  }
  return j;
}

Json to_json(const RatioStatReport& r) {
  Json j;
  j["statistics"] = to_json(r.table);
  j["classification"] = to_json(r.classification);
  return j;
}

Json to_json(const VanDouwenReport& r) {
  Json j;
  j["tail_start"] = to_json(r.tail_start);
  j["horizon"] = to_json(r.horizon);
  j["sup_deviation"] = to_json(r.sup_deviation);
  j["argmax"] = to_json(r.argmax);
  j["tol"] = to_json(r.tol);
  j["holds"] = r.holds;
  return j;
}

Json to_json(const MeasureReport& r) {
  Json j;
  j["rule"] = r.rule;
  j["verdict"] = r.has_value() ? "Value" : "Interval";
  if (r.has_value()) {
    j["value"] = to_json(r.value);
  } else {
    j["lo"] = to_json(r.lo);
    j["hi"] = to_json(r.hi);
  }
  j["achieved_tol"] = to_json(r.achieved_tol);
  if (!r.points.empty()) j["partials"] = point_table(r.points, r.partials);
  if (!r.constituents.empty()) {
    Json c = Json::array();
    for (const auto& l : r.constituents) {
      Json x = to_json(l);
      x.erase("profile");
      c.push_back(std::move(x));
    }
    j["constituents"] = std::move(c);
  }
  if (!r.terms.empty()) {
    Json t = Json::array();
    for (const auto& [w, sub] : r.terms) t.push_back({{"weight", to_json(w)}, {"report", to_json(sub)}});
    j["terms"] = std::move(t);
  }
  return j;
}

namespace {

Json axiom_row(const AxiomRow& row) {
  return {{"label", row.label}, {"status", status_json(row.status)}, {"deviation", to_json(row.deviation)}};
}

}  // namespace

Json to_json(const AxiomReport& r) {
  Json j;
  j["rule"] = r.rule;
  j["tol"] = to_json(r.tol);
  j["normalization"] = axiom_row(r.normalization);
  j["additivity_status"] = status_json(r.additivity_status);
  j["max_additivity_deviation"] = to_json(r.max_additivity_deviation);
  j["extension_status"] = status_json(r.extension_status);
  j["max_extension_deviation"] = to_json(r.max_extension_deviation);
  Json add = Json::array(), ext = Json::array();
  for (const auto& row : r.additivity) add.push_back(axiom_row(row));
  for (const auto& row : r.extension) ext.push_back(axiom_row(row));
  j["additivity"] = std::move(add);
  j["extension"] = std::move(ext);
  j["passed"] = r.passed;
  return j;
}

Json to_json(const InvarianceReport& r) {
  Json j;
  j["rule"] = r.rule;
  j["permutation"] = r.permutation;
  j["tol"] = to_json(r.tol);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"set", row.set},
                    {"status", status_json(row.status)},
                    {"deviation", to_json(row.deviation)},
                    {"measure", to_json(row.measure)},
                    {"image_measure", to_json(row.image_measure)}});
  }
  j["rows"] = std::move(rows);
  j["max_deviation"] = to_json(r.max_deviation);
  j["passed"] = r.passed;
  return j;
}

Json to_json(const ViolationCertificate& c) {
  Json j;
  j["permutation"] = c.permutation;
  j["witness"] = c.witness.to_string();
  j["subsequence"] = c.subsequence.to_string();
  j["gap"] = to_json(c.gap);
  j["profile"] = to_json(c.profile);
  j["classification"] = to_json(c.defects.classification);
  return j;
}

Json to_json(const EqualMeasureReport& r) {
  Json j;
  j["horizon"] = to_json(r.horizon);
  j["tail_start"] = to_json(r.tail_start);
  j["tol"] = to_json(r.tol);
  j["dense_tail_sup"] = to_json(r.dense_tail_sup);
  j["dense_argmax"] = to_json(r.dense_argmax);
  Json seqs = Json::array();
  for (const auto& [name, gap] : r.per_sequence) seqs.push_back({{"sequence", name}, {"tail_sup", to_json(gap)}});
  j["sequences"] = std::move(seqs);
  j["max_sequence_gap"] = to_json(r.max_sequence_gap);
  j["equivalent_likely"] = r.equivalent_likely;
  return j;
}

Json to_json(const SuiteReport& r) {
  Json j;
  j["sets"] = {{"A", r.set_a}, {"2A", r.set_2a}, {"B", r.set_b}};

  Json one;
  one["points"] = to_json(r.points);
  one["combo_partials"] = to_json(r.combo_a);
  one["combo_measure"] = to_json(r.mu_a);
  one["upper_density_window"] = to_json(r.ud_a);
  one["measure_exceeds_upper_density"] = r.mu_exceeds_ud;
  j["item1"] = std::move(one);

  Json two;
  two["combo_partials"] = to_json(r.combo_2a);
  two["combo_measure"] = to_json(r.mu_2a);
  two["half_measure_of_A"] = to_json(r.half_mu_a);
  two["ratio_grid_points"] = r.ratio_grid_points;
  two["ratio_identically_one"] = r.ratio_identically_one;
  two["scaling_violated"] = r.scaling_violated;
  j["item2"] = std::move(two);

  Json three;
  three["dominance_checked"] = r.dominance_checked;
  three["dominance_failure"] = r.dominance_failure ? Json(*r.dominance_failure) : Json(nullptr);
  Json bounds = Json::array();
  for (const auto& [e, ok] : r.boundary_checks) bounds.push_back({{"e", to_json(e)}, {"holds", ok}});
  three["boundary_checks"] = std::move(bounds);
  three["tail_bound_holds"] = r.tail_bound_holds;
  three["density_B"] = to_json(r.density_b);
  three["combo_measure_B"] = to_json(r.mu_b);
  three["sample"] = {{"n", to_json(r.sample_n)}, {"B", to_json(r.sample_b)}, {"A", to_json(r.sample_a)}};
  three["monotonicity_violated"] = r.monotonicity_violated;
  j["item3"] = std::move(three);

  Json four = Json::array();
  for (const auto& s : r.sandwich) {
    four.push_back({{"set", s.set},
                    {"points_checked", s.points_checked},
                    {"holds", s.holds},
                    {"first_failure", s.first_failure ? to_json(*s.first_failure) : Json(nullptr)}});
  }
  j["item4"] = std::move(four);

  Json five = Json::array();
  for (const auto& row : r.mixture_rows) {
    five.push_back({{"rule", row.rule},
                    {"pair", row.pair},
                    {"property", row.property},
                    {"status", status_json(row.status)},
                    {"lhs", to_json(row.lhs)},
                    {"rhs", to_json(row.rhs)}});
  }
  j["item5"] = std::move(five);
  return j;
}

CsvTable csv_table(std::vector<std::string> prefix) {
  CsvTable t;
  t.header = std::move(prefix);
  for (const char* c : {"n", "numerator", "denominator", "decimal"}) t.header.emplace_back(c);
  return t;
}

void CsvTable::add(std::vector<std::string> prefix, const Integer& n, const Rational& value) {
  prefix.push_back(n.get_str());
  prefix.push_back(value.get_num().get_str());
  prefix.push_back(value.get_den().get_str());
  prefix.push_back(decimal_shadow(value));
  rows.push_back(std::move(prefix));
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

CsvTable to_csv(const SuiteReport& r) {
  auto t = csv_table({"item", "i"});
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    t.add({"1", std::to_string(i + 1)}, r.points[i], r.combo_a[i]);
  }
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    t.add({"2", std::to_string(i + 1)}, r.points[i], r.combo_2a[i]);
  }
  for (std::size_t i = 0; i < r.mu_b.partials.size(); ++i) {
    t.add({"3", std::to_string(i + 1)}, r.mu_b.points[i], r.mu_b.partials[i]);
  }
  return t;
}

}  // namespace densitylab
