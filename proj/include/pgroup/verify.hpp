#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pgroup/series.hpp"

namespace pgroup {

struct CheckResult {
  std::string anchor;  // e.g. "Prop4.2"
  std::string name;
  bool pass = false;
  std::string detail;  // expected vs computed on failure
  bool known = false;  // failure of a statement outside its valid range, logged as a deviation
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool ok() const;
  void add(const std::string& anchor, const std::string& name, bool pass, const std::string& detail = "",
           bool known = false);
  std::string to_human() const;
  std::string to_json() const;
};

VerifyReport verify_paper(int p, int k_max, const SeriesOptions& opt = {});
VerifyReport verify_oracle(const std::vector<std::pair<int, int>>& instances);

// expected-vs-computed table for a layer table with predictions
std::string layer_mismatches(const LayerTable& t);

}  // namespace pgroup
