#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fcs/su2.hpp"

namespace fcs::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kIo = 3 };

struct RunConfig {
  std::string command;  // sweep, spectrum, check, correlate, export
  std::string model;    // zoo name; empty when an input file is used
  double lambda = 0.0;
  std::optional<Spin> s;
  std::optional<Spin> t;
  Spin t_max{9};
  int k_max = 20;
  std::string import_system;       // --import: system JSON
  std::string import_hamiltonian;  // --hamiltonian: Hamiltonian JSON
  std::string observables = "x,y,z";
  std::string output;  // empty: stdout
  std::string format = "json";
};

/// Runs the tool with argv-style arguments (without the program name).
/// Results go to the configured output file or to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcs::cli
