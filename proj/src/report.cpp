#include "polymer/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace polymer::report {

bool Report::all_pass() const {
  for (const auto& t : results)
    if (!t.pass) return false;
  return !results.empty();
}

namespace {
// 17 significant digits round-trip doubles; JSON has no inf/nan.
nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

nlohmann::json Report::to_json(bool with_wallclock) const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["paper_ref"] = paper_ref;
  j["params"] = params;
  j["seeds"] = seeds;
  auto arr = nlohmann::json::array();
  for (const auto& t : results) {
    nlohmann::json e{{"test", t.test}, {"statistic", num(t.statistic)},
                     {"threshold", num(t.threshold)}, {"pass", t.pass}};
    if (!t.note.empty()) e["note"] = t.note;
    arr.push_back(std::move(e));
  }
  j["results"] = std::move(arr);
  j["pass"] = all_pass();
  if (with_wallclock) j["wallclock_s"] = wallclock_s;
  return j;
}

void write_json(std::ostream& os, const Report& r) { os << r.to_json().dump(2) << "\n"; }

void write_results_csv(std::ostream& os, const Report& r) {
  os << "test,statistic,threshold,pass\n";
  for (const auto& t : r.results)
    os << '"' << t.test << "\"," << fmt(t.statistic) << ',' << fmt(t.threshold) << ','
       << (t.pass ? 1 : 0) << "\n";
}

void print_summary(std::ostream& os, const Report& r) {
  for (const auto& t : r.results) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g <= %.4g", t.statistic, t.threshold);
    os << (t.pass ? "  PASS " : "  FAIL ") << t.test << "  (" << buf << ")";
    if (!t.note.empty()) os << "  [" << t.note << "]";
    os << "\n";
  }
}

}  // namespace polymer::report
