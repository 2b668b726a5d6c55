#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zvem/mms.hpp"
#include "zvem/timeloop.hpp"

namespace zvem {

enum class MeshFamily { Cartesian, Hexagonal, Partitioned };

/// "cartesian", "hexagonal" or "partitioned"; throws InvalidArgument otherwise.
MeshFamily parse_family(const std::string& name);
std::string family_name(MeshFamily family);

/// Partitioned size m is the pair (2m, 3m).
PolygonalMesh family_mesh(MeshFamily family, int size, const TaggingRule& rule);

/// 1/n for cartesian meshes, the largest cell diameter otherwise.
double reported_h(MeshFamily family, int size, const PolygonalMesh& mesh);

struct ConvergenceConfig {
  std::string case_name = "poly-t2";
  MeshFamily family = MeshFamily::Cartesian;
  std::vector<int> sizes{6, 7, 8, 9, 10, 11, 12};
  int k = 1;
  MaterialParams params;
  double T = 1.0;
  /// Time step on the coarsest mesh; <= 0 means tau0 = tau0_ratio * h0.
  double tau0 = 0.0;
  /// Unset means 4^(1-k).
  std::optional<double> tau0_ratio;
  bool all_dirichlet = false;
  Execution exec = Execution::Parallel;
};

/// tau = tau0 (h / h0)^((k+1)/2), rounded down so that T is a whole number of steps.
int steps_for(double T, double tau0, double h0, double h, int k);

std::vector<ConvergenceRow> convergence_study(const ConvergenceConfig& config);

/// Header h,dofs,e_sig0,rate_sig0,...,e_div,rate_div; "nan" rates on the first row.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Runs a manufactured case from its exact initial data to T in N steps.
SystemState simulate_case(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double T, int steps,
                          Execution exec = Execution::Parallel, const StepCallback& on_step = {});

struct PatchResult {
  FieldErrors errors;
  double max_error = 0.0;
};

/// Constant-stress steady state advanced `steps` CN steps.
PatchResult patch_test(const PolygonalMesh& mesh, int k, int steps = 5, double tau = 0.1);

struct EnergyResult {
  std::vector<EnergySample> samples;
  /// Index of the first step with E^n > E^{n-1} + 1e-12 E^0, or -1.
  int first_violation = -1;
  int nonincreasing_steps = 0;
  /// max_n |H(sigma0^n + sigma1^n) - H(sigma0^0 + sigma1^0)| relative to |H| |sigma^0|.
  double symmetry_drift = 0.0;
};

/// f = 0, homogeneous data, random weakly symmetric initial state.
EnergyResult energy_test(const PolygonalMesh& mesh, int k, const MaterialParams& params, double tau, int steps,
                         unsigned seed);

struct MarkerSeries {
  std::vector<double> t;
  std::vector<double> vx;
  /// max |vx| over [80, 100] divided by max |vx| over the whole run.
  double late_ratio = 0.0;
};

MaterialParams marker_standard();
MaterialParams marker_low_viscosity();

/// All-Dirichlet unit square, f = (1, 1), zero initial data; v_x at (1/2, 1/2).
MarkerSeries marker_experiment(const MaterialParams& params, int n = 9, int k = 1, double T = 100.0,
                               double tau = 0.1);

void write_marker_csv(std::ostream& out, const MarkerSeries& series);

struct RichardsonResult {
  double coarse_diff = 0.0;
  double fine_diff = 0.0;
  double order = 0.0;
};

/// Final states with N, 2N and 4N steps; order = log2 of the ratio of differences.
RichardsonResult time_self_convergence(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double T,
                                       int n_coarse);

}  // namespace zvem
