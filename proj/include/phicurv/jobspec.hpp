#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phicurv/invariants.hpp"

namespace phicurv {

// One computation job: ring + module + endomorphism descriptors, a command,
// and its parameters. Text form is line-oriented `key = value`.
struct JobSpec {
  uint32_t p = 2;
  std::vector<std::string> vars;
  std::vector<long> weights;  // canonicalized to one weight per variable
  std::vector<std::string> ideal;
  std::string module = "R";
  std::string module2;  // optional second module (check-composition)
  std::string endo;     // frobenius(e) | images [g1, ...] | projection
  std::string endo2;    // optional second endomorphism
  std::vector<std::string> extra;  // extra generators (poincare-id)
  std::string cmd;
  int nmax = kDefaultNmax;
  int e = 1;
  int window = kDefaultWindow;
  double tolerance = kDefaultTolerance;
  int nupto = 3;
  uint64_t seed = 0;

  bool operator==(const JobSpec& o) const;
};

JobSpec parse_job_text(const std::string& text);
std::string render_job(const JobSpec& job);

struct RunResult {
  int exit_code = 0;
  std::string human;
  std::string json;  // serialized report
};

// Executes the job; engine errors are rendered with stable codes and
// exit code 1, violated checks exit 2, consistent results exit 0.
RunResult run_job(const JobSpec& job);

// Helpers shared with tests.
RingPtr ring_from_job(const JobSpec& job);
FinModule module_from_descriptor(const RingPtr& ring,
                                 const std::string& descriptor);
EndoMap endo_from_descriptor(const RingPtr& ring,
                             const std::string& descriptor);

extern const char* kEngineVersion;
extern const char* kReportSchema;

}  // namespace phicurv
