#include "zvem/timeloop.hpp"

#include "zvem/errors.hpp"

namespace zvem {

StateBlocks split_state(const DofLayout& layout, const Eigen::VectorXd& x) {
  auto part = [&](FieldKind kind) { return Eigen::VectorXd(x.segment(layout.offset(kind), layout.size(kind))); };
  return {part(FieldKind::Stress0), part(FieldKind::Stress1), part(FieldKind::Velocity), part(FieldKind::Rotation)};
}

double symmetry_residual(const BlockOperators& ops, const Eigen::VectorXd& x) {
  const StateBlocks b = split_state(ops.layout, x);
  if (b.r.size() == 0) return 0.0;
  return (ops.H * (b.sigma0 + b.sigma1)).lpNorm<Eigen::Infinity>();
}

EnergySample energy(const BlockOperators& ops, const SystemState& state, double symmetric_tol) {
  const StateBlocks b = split_state(ops.layout, state.x);
  EnergySample e;
  e.t = state.t;
  e.energy = b.sigma0.dot(ops.A0 * b.sigma0) + b.sigma1.dot(ops.A1 * b.sigma1) + b.v.dot(ops.M * b.v);
  e.dissipation = b.sigma0.dot(ops.A0p * b.sigma0);
  const Eigen::VectorXd hs = ops.H * (b.sigma0 + b.sigma1);
  e.symmetry_residual = hs.size() > 0 ? hs.lpNorm<Eigen::Infinity>() : 0.0;
  const double scale = std::max(1.0, (b.sigma0 + b.sigma1).lpNorm<Eigen::Infinity>());
  e.weakly_symmetric = e.symmetry_residual <= symmetric_tol * scale;
  if (!e.weakly_symmetric) e.energy += 2.0 * b.r.dot(hs);
  return e;
}

SystemState initial_state(const PolygonalMesh& mesh, int k, const InitialFields& fields) {
  const DofLayout layout(mesh, k);
  SystemState s;
  s.x = Eigen::VectorXd::Zero(layout.total());
  if (fields.sigma0) s.x.segment(layout.offset(FieldKind::Stress0), layout.stress_size()) = interpolate_stress(fields.sigma0, mesh, k);
  if (fields.sigma1) s.x.segment(layout.offset(FieldKind::Stress1), layout.stress_size()) = interpolate_stress(fields.sigma1, mesh, k);
  if (fields.v) s.x.segment(layout.offset(FieldKind::Velocity), layout.size(FieldKind::Velocity)) = project_velocity(fields.v, mesh, k);
  if (fields.s) s.x.segment(layout.offset(FieldKind::Rotation), layout.size(FieldKind::Rotation)) = project_rotation(fields.s, mesh, k);
  return s;
}

namespace {

SparseMatrix step_matrix(const BlockOperators& ops, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  return ops.A / tau - 0.5 * ops.B;
}

}  // namespace

CrankNicolson::CrankNicolson(const BlockOperators& ops, double tau)
    : tau_(tau),
      constraints_(ops.layout.total(), ops.constrained),
      explicit_part_(step_matrix(ops, tau) + ops.B),
      coupling_(constraints_.coupling_block(step_matrix(ops, tau))),
      solver_(constraints_.free_block(step_matrix(ops, tau))) {}

SystemState CrankNicolson::step(const SystemState& state, const TimeDependentData& data) const {
  SystemState next;
  next.step = state.step + 1;
  next.t = next.step * tau_;
  Eigen::VectorXd rhs = explicit_part_ * state.x;
  if (data.load) rhs += data.load(state.t + 0.5 * tau_);
  const std::size_t nc = constraints_.constrained().size();
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nc));
  if (data.constraints && nc > 0) values = data.constraints(next.t);
  Eigen::VectorXd rf = constraints_.restrict_free(rhs);
  if (nc > 0) rf -= coupling_ * values;
  next.x = constraints_.expand(solver_.solve(rf), values);
  return next;
}

SystemState run(const CrankNicolson& cn, SystemState state, int steps, const TimeDependentData& data,
                const StepCallback& on_step) {
  if (steps < 1) throw InvalidArgument("need at least one time step");
  for (int n = 0; n < steps; ++n) {
    state = cn.step(state, data);
    if (on_step) on_step(state);
  }
  return state;
}

}  // namespace zvem
