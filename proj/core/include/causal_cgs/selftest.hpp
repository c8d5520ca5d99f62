#pragma once

// Property checks of the CGS construction and the cause/strategy bridge over
// seeded random models.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs {

struct SelftestOptions {
  std::size_t models = 100;
  std::uint64_t seed = 0;
};

struct CheckTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> examples;  // first few failures

  void record(bool ok, const std::string& what);
};

struct SelftestReport {
  std::size_t models = 0;
  std::uint64_t seed = 0;
  std::size_t settings = 0;   // (model, context) pairs
  std::size_t cgs_built = 0;  // including the CGS of each witness intervention
  std::vector<CheckTally> checks;

  bool ok() const;
  CheckTally& tally(const std::string& name);
};

// Every check against one causal setting; results are added to `report`.
// `tag` prefixes failure messages.
void check_causal_setting(const CausalModel& model, const Context& context,
                          const std::string& tag, SelftestReport& report);

SelftestReport run_selftest(const SelftestOptions& options);

std::string format_report(const SelftestReport& report, bool color);
std::string report_json(const SelftestReport& report);

}  // namespace causal_cgs
