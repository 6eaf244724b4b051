#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "microcosm/dim2.hpp"
#include "microcosm/planewave.hpp"

namespace microcosm::cli {

enum class Command { riccati, sachs, orbit, conjugate, series, verify };

struct JobSpec {
  MicrocosmSpec spec;
  std::optional<Dim2Params> dim2;  // set for n = 2
  std::optional<CMatrix> s0;       // initial Sachs value (Brinkmann form)
  Command command = Command::riccati;
  double u_lo = 0.0;
  double u_hi = 1.0;
  int samples = 11;
  double tol = 1e-6;
  int order = 10;
  bool csv = false;
  std::string output_path;

  void validate() const;
};

// Parses the JSON microcosm document; throws InvalidInput naming the line or field.
void load_spec_document(const std::string& text, JobSpec& job);

// Runs a validated job, writing the artifact to `out`. Returns the exit status.
int run(const JobSpec& job, std::ostream& out);

// Full command-line entry: exit 0 success, 2 validation, 3 numerical.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace microcosm::cli
