#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mwcli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  int instances = 0;
  double metric = 0.0;  // worst observed value of the checked quantity
  double bound = 0.0;   // limit the metric is compared against
  std::string detail;   // first failing instance, empty on success
  double seconds = 0.0; // wall time, never written to CSV
};

struct Measurement {
  int criterion = 0;
  int instance = 0;
  std::string quantity;
  double value = 0.0;
};

struct SuiteOptions {
  std::string name = "acceptance";  // acceptance | smoke
  std::uint64_t seed = 7;
  int jobs = 1;
  /// Run criteria 1-10 a second time and compare the CSV bytes (criterion 11).
  bool determinism = true;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  std::vector<Measurement> measurements;
  bool passed() const;
};

using ProgressFn = std::function<void(const CriterionResult&)>;

SuiteResult run_suite(const SuiteOptions& opt, const ProgressFn& progress = {});

/// criterion,name,passed,instances,metric,bound,detail
void write_suite_csv(std::ostream& out, const SuiteResult& r);
/// criterion,instance,quantity,value
void write_measurements_csv(std::ostream& out, const SuiteResult& r);

}  // namespace mwcli
