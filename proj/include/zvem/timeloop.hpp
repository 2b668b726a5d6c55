#pragma once

#include <functional>

#include "zvem/assemble.hpp"
#include "zvem/linsolve.hpp"

namespace zvem {

struct SystemState {
  int step = 0;
  double t = 0.0;
  /// [sigma0 | sigma1 | v | r]
  Eigen::VectorXd x;
};

struct EnergySample {
  double t = 0.0;
  /// |sigma0|^2_{A0} + |sigma1|^2_{A1} + |v|^2_M, plus 2 r.H(sigma0 + sigma1) when not weakly symmetric.
  double energy = 0.0;
  /// |sigma0|^2_{A0'}
  double dissipation = 0.0;
  double symmetry_residual = 0.0;
  bool weakly_symmetric = true;
};

struct StateBlocks {
  Eigen::VectorXd sigma0, sigma1, v, r;
};
StateBlocks split_state(const DofLayout& layout, const Eigen::VectorXd& x);

/// |H(sigma0 + sigma1)| in the max norm.
double symmetry_residual(const BlockOperators& ops, const Eigen::VectorXd& x);

/// `symmetric_tol` decides when the cross term is considered zero.
EnergySample energy(const BlockOperators& ops, const SystemState& state, double symmetric_tol = 1e-10);

/// Fields at t = 0; empty functions are zero. s is the rotation scalar.
struct InitialFields {
  TensorField sigma0, sigma1;
  VectorField v;
  ScalarField s;
};
SystemState initial_state(const PolygonalMesh& mesh, int k, const InitialFields& fields);

/// Forcing and prescribed traction DoFs; empty functions are zero.
struct TimeDependentData {
  std::function<Eigen::VectorXd(double)> load;
  std::function<Eigen::VectorXd(double)> constraints;
};

/// (A/tau - B/2) X^n = (A/tau + B/2) X^{n-1} + C(t_{n-1/2}), constrained DoFs set at t_n.
/// The step matrix is factorized once.
class CrankNicolson {
public:
  /// Throws SingularSystem if the step matrix cannot be factorized.
  CrankNicolson(const BlockOperators& ops, double tau);

  double tau() const noexcept { return tau_; }
  SystemState step(const SystemState& state, const TimeDependentData& data) const;

private:
  double tau_;
  EssentialConstraints constraints_;
  SparseMatrix explicit_part_;
  SparseMatrix coupling_;
  LinearSolveHandle solver_;
};

using StepCallback = std::function<void(const SystemState&)>;

/// Advances `steps` uniform steps. t is stored as n * tau.
SystemState run(const CrankNicolson& cn, SystemState state, int steps, const TimeDependentData& data,
                const StepCallback& on_step = {});

}  // namespace zvem
