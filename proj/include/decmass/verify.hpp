#pragma once

#include "decmass/datasets.hpp"

namespace decmass {
namespace verify {

struct Row {
  std::string identity;
  std::string sample;
  double residual = 0.0;
  double tolerance = 0.0;
  double order = 0.0;      // observed convergence order, when measured
  bool has_order = false;
  double order_floor = 0.0;
  bool pass = false;
};

struct Suite {
  std::string name;
  std::vector<Row> rows;
  bool pass = true;
};

std::vector<std::string> suite_names();

/// Run a named verification suite. `step` is the FD base step where the
/// suite measures convergence (halved once for the order column).
Suite run_suite(const std::string& name, uint64_t seed = 1, double step = 1e-3);

data::json to_json(const Suite& s);

}  // namespace verify
}  // namespace decmass
