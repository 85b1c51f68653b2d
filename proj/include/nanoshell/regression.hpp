#pragma once

#include <string>
#include <vector>

#include "nanoshell/spectro.hpp"
#include "nanoshell/sweep.hpp"

namespace nanoshell {

enum class Quantity { shift, wt, wrad, wohm, yield };

std::string_view to_string(Quantity q);

/// One reference value at 595 nm. `lower_bound` entries pass when the
/// computed value exceeds `expected`; the others compare relatively.
struct RegressionEntry {
  int criterion = 0;
  std::string preset;
  double r_over_rs = 0.0;
  OrientationChoice orientation = OrientationChoice::radial;
  Quantity quantity = Quantity::wt;
  double expected = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
};

struct RegressionOutcome {
  RegressionEntry entry;
  double computed = 0.0;
  double rel_error = 0.0;
  bool pass = false;
  std::string label() const;
};

const std::vector<RegressionEntry>& regression_table();

/// Evaluates every table entry; r/r_s = 0 is the exact center.
std::vector<RegressionOutcome> run_regressions(const SpectroOptions& opts = {});

}  // namespace nanoshell
