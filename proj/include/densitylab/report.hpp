#pragma once

// JSON and CSV views of the library's reports. Rationals serialize as
// {"num", "den", "decimal"}; num and den are decimal strings so no precision
// is lost, decimal is the 12-significant-digit shadow.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "densitylab/asymptotics.hpp"
#include "densitylab/measure.hpp"
#include "densitylab/perm.hpp"

namespace densitylab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "densitylab/1";

Json to_json(const Integer& v);
Json to_json(const Rational& q);
Json to_json(const std::vector<Integer>& xs);
Json to_json(const std::vector<Rational>& xs);

Json to_json(const LimitReport& r);
Json to_json(const DensityReport& r);
Json to_json(const StatLimitReport& r);
Json to_json(const FridyWitness& w);
Json to_json(const TailClassification& c);
Json to_json(const DefectProfile& d);
Json to_json(const std::vector<DisplacementEntry>& profile);
Json to_json(const RatioStatReport& r);
Json to_json(const VanDouwenReport& r);
Json to_json(const MeasureReport& r);
Json to_json(const AxiomReport& r);
Json to_json(const InvarianceReport& r);
Json to_json(const ViolationCertificate& c);
Json to_json(const EqualMeasureReport& r);
Json to_json(const SuiteReport& r);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Appends the (n, numerator, denominator, decimal) cells after `prefix`.
  void add(std::vector<std::string> prefix, const Integer& n, const Rational& value);
  void write(std::ostream& out) const;
};

/// Header "n,numerator,denominator,decimal" preceded by `prefix` columns.
CsvTable csv_table(std::vector<std::string> prefix = {});

CsvTable to_csv(const SuiteReport& r);

}  // namespace densitylab
