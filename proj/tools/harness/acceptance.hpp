#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpass::harness {

struct HarnessOptions {
  std::uint64_t seed = 0;
  bool quick = false;  // smaller sample counts and budgets
  int workers = 1;
};

struct InstanceRow {
  std::string name;
  double c = 0.0;
  std::string verdict;
  double oracle = 0.0;
  double gap = 0.0;
  double seconds = 0.0;  // not written to the scoreboard
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;       // not written to the scoreboard
  double time_limit = 0.0;    // 0: none
};

struct AcceptanceReport {
  std::vector<InstanceRow> instances;
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

AcceptanceReport run_acceptance(const HarnessOptions& options);

/// Per-instance rows at reduced budgets; used by the determinism check.
std::vector<InstanceRow> probe_instances(const HarnessOptions& options);

std::string scoreboard_csv(const AcceptanceReport& report);
std::string scoreboard_markdown(const AcceptanceReport& report);
std::string instances_csv(const std::vector<InstanceRow>& rows);

}  // namespace mpass::harness
