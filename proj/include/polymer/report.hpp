#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace polymer::report {

struct TestRecord {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;  // optional; e.g. "retried", "skipped: ..."
};

struct Report {
  std::string experiment;
  std::string paper_ref;
  nlohmann::json params;
  std::vector<std::uint64_t> seeds;
  std::vector<TestRecord> results;
  double wallclock_s = 0.0;

  bool all_pass() const;
  // The payload without wallclock is byte-stable across reruns.
  nlohmann::json to_json(bool with_wallclock = true) const;
};

void write_json(std::ostream& os, const Report& r);
// test,statistic,threshold,pass
void write_results_csv(std::ostream& os, const Report& r);
// one human-readable line per test
void print_summary(std::ostream& os, const Report& r);

}  // namespace polymer::report
