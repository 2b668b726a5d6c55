#pragma once

#include <array>
#include <string>
#include <vector>

#include "zvem/assemble.hpp"

namespace zvem {

/// Scalar time profile theta(t) of a separable displacement term.
struct TimeProfile {
  enum class Kind { Square, Cube, Cosine, Exp };
  Kind kind = Kind::Square;

  double value(double t) const;
  double rate(double t) const;
  double accel(double t) const;
  /// int_0^t exp(-a (t - s)) theta'(s) ds, a > 0.
  double memory(double a, double t) const;
};

/// Spatial profile U(x) with the derivatives the exact fields need.
struct SpatialProfile {
  std::function<Eigen::Vector2d(const Point&)> value;
  /// grad(i, j) = d U_i / d x_j
  std::function<Eigen::Matrix2d(const Point&)> grad;
  std::function<Eigen::Vector2d(const Point&)> laplacian;
  std::function<Eigen::Vector2d(const Point&)> grad_div;
};

using TimeScalarField = std::function<double(const Point&, double)>;

/// Exact fields of u = sum_m theta_m(t) U_m(x) for the Zener model with
/// sigma1 = C1 eps(u) and sigma0(0) = 0.
struct ManufacturedCase {
  std::string name;
  MaterialParams params;
  std::vector<std::pair<TimeProfile, SpatialProfile>> terms;

  TimeVectorField u, v, f;
  TimeTensorField sigma0, sigma1, strain_rate;
  /// Rotation scalar s with skew(grad u) = s J.
  TimeScalarField rotation;
  /// div(sigma0 + sigma1)
  TimeVectorField div_stress;
  /// False for steady data where f and the boundary velocity vanish.
  bool has_load = true;
};

/// poly-t2, poly-t3 or exp-trig. Throws InvalidArgument for other names.
ManufacturedCase build_case(const std::string& name, const MaterialParams& params);
const std::vector<std::string>& case_names();

/// Steady state: sigma1 = [[1, 0.3], [0.3, 2]], everything else zero.
ManufacturedCase patch_case(const MaterialParams& params);

struct FieldErrors {
  double sigma0 = 0.0, sigma1 = 0.0, v = 0.0, r = 0.0, div = 0.0;

  std::array<double, 5> as_array() const { return {sigma0, sigma1, v, r, div}; }
  double max() const;
};

/// Global L2 errors of a state against the exact fields at time t.
FieldErrors error_norms(const PolygonalMesh& mesh, int k, const Eigen::VectorXd& x,
                        const ManufacturedCase& mc, double t, Execution exec = Execution::Parallel);

/// L2 norms of the exact fields (errors of the zero state).
FieldErrors exact_norms(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double t);

/// log(e / e_prev) / log(h / h_prev).
double convergence_rate(double e_prev, double e, double h_prev, double h);

/// Least-squares slope of log e against log h.
double fitted_rate(const std::vector<double>& h, const std::vector<double>& e);

struct ConvergenceRow {
  double h = 0.0;
  long dofs = 0;
  long dofs_formula = 0;
  int steps = 0;
  FieldErrors errors;
  /// NaN for the first row.
  std::array<double, 5> rates{};
};

void fill_rates(std::vector<ConvergenceRow>& rows);

/// Per-field least-squares rates over all rows.
std::array<double, 5> fitted_rates(const std::vector<ConvergenceRow>& rows);

extern const std::array<const char*, 5> kFieldNames;

}  // namespace zvem
