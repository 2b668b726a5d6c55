#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zvem/study.hpp"

namespace zvem {

enum ExitCode : int { kSuccess = 0, kAcceptanceFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::string case_name = "poly-t2";
  MeshFamily family = MeshFamily::Cartesian;
  std::vector<int> sizes{6, 7, 8, 9, 10, 11, 12};
  int k = 1;
  MaterialParams params;
  /// Final time; unset means the command's default (1 for convergence, 100 for marker).
  std::optional<double> T;
  /// Coarsest time step; <= 0 selects h0 / 4^(k-1).
  double tau0 = 0.0;
  std::string out = ".";
  unsigned seed = 20240607;
  int threads = 0;
  bool all_dirichlet = false;

  /// Throws InvalidArgument on k outside 1..3, empty sizes or bad parameters.
  void validate() const;
};

/// Named parameter sets: "standard" or "nearly-incompressible".
MaterialParams material_preset(const std::string& name);

/// Reads the JSON keys case, mesh_kind, sizes, k, preset, params{mu0,...}, T,
/// tau0, out, seed, threads, boundary into `config`. Missing keys keep their value.
void apply_config_json(RunConfig& config, std::istream& in);
void apply_config_file(RunConfig& config, const std::string& path);

/// Writes <out>/<kind>_<sizes>.vemmesh and prints counts and quality figures.
int cmd_mesh(const std::string& kind, const std::vector<int>& sizes, const RunConfig& config, std::ostream& report);

/// Exit 0 iff every fitted rate is >= k + 1 - 0.15.
int cmd_convergence(const RunConfig& config, std::ostream& report);

/// Constant-stress patch test on cartesian 3x3 and hexagonal 4.
int cmd_patch(const RunConfig& config, std::ostream& report);

/// 200 CN steps from random weakly symmetric data on cartesian 8x8, tau in {0.1, 1}.
int cmd_energy(const RunConfig& config, std::ostream& report);

/// Marker series for the standard and low-viscosity dashpots.
int cmd_marker(const RunConfig& config, std::ostream& report);

}  // namespace zvem
