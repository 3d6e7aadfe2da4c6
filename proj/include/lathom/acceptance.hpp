#pragma once

#include <string>
#include <vector>

namespace lathom {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  uint64_t master_seed = 20240801ULL;
  int threads = 1;
  std::string out_dir;  // optional artifact directory
  bool verbose = false;
};

// Runs the full acceptance suite; one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

}  // namespace lathom
