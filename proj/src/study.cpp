#include "zvem/study.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <Eigen/SparseCholesky>

#include "zvem/errors.hpp"

namespace zvem {

MeshFamily parse_family(const std::string& name) {
  if (name == "cartesian") return MeshFamily::Cartesian;
  if (name == "hexagonal") return MeshFamily::Hexagonal;
  if (name == "partitioned") return MeshFamily::Partitioned;
  throw InvalidArgument("unknown mesh kind '" + name + "'");
}

std::string family_name(MeshFamily family) {
  switch (family) {
    case MeshFamily::Cartesian: return "cartesian";
    case MeshFamily::Hexagonal: return "hexagonal";
    case MeshFamily::Partitioned: return "partitioned";
  }
  return "";
}

PolygonalMesh family_mesh(MeshFamily family, int size, const TaggingRule& rule) {
  switch (family) {
    case MeshFamily::Cartesian: return generate_cartesian(size, rule);
    case MeshFamily::Hexagonal: return generate_hexagonal(size, rule);
    case MeshFamily::Partitioned: return generate_partitioned(2 * size, 3 * size, rule);
  }
  throw InvalidArgument("unknown mesh family");
}

double reported_h(MeshFamily family, int size, const PolygonalMesh& mesh) {
  return family == MeshFamily::Cartesian ? 1.0 / size : max_cell_diameter(mesh);
}

int steps_for(double T, double tau0, double h0, double h, int k) {
  const double tau = tau0 * std::pow(h / h0, 0.5 * (k + 1));
  return std::max(1, static_cast<int>(std::ceil(T / tau - 1e-9)));
}

SystemState simulate_case(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double T, int steps,
                          Execution exec, const StepCallback& on_step) {
  const BlockOperators ops = assemble_global(mesh, k, mc.params, exec);
  const LoadAssembler load(mesh, k, mc.params.rho);
  const ConstraintEvaluator traction(mesh, ops);

  InitialFields init;
  init.sigma0 = [&](const Point& x) { return mc.sigma0(x, 0.0); };
  init.sigma1 = [&](const Point& x) { return mc.sigma1(x, 0.0); };
  init.v = [&](const Point& x) { return mc.v(x, 0.0); };
  init.s = [&](const Point& x) { return mc.rotation(x, 0.0); };
  const SystemState x0 = initial_state(mesh, k, init);

  TimeDependentData data;
  if (mc.has_load) data.load = [&](double t) { return load(mc.f, mc.v, t); };
  data.constraints = [&](double t) { return traction(mc.sigma0, mc.sigma1, t); };

  const CrankNicolson cn(ops, T / steps);
  return run(cn, x0, steps, data, on_step);
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceConfig& config) {
  if (config.sizes.size() < 2) throw InvalidArgument("a convergence study needs at least two meshes");
  const ManufacturedCase mc = build_case(config.case_name, config.params);
  const TaggingRule rule = config.all_dirichlet ? all_dirichlet_tagging() : default_tagging();

  std::vector<ConvergenceRow> rows;
  double h0 = 0.0;
  double tau0 = config.tau0;
  for (int size : config.sizes) {
    const PolygonalMesh mesh = family_mesh(config.family, size, rule);
    ConvergenceRow row;
    row.h = reported_h(config.family, size, mesh);
    if (rows.empty()) {
      h0 = row.h;
      if (tau0 <= 0.0) tau0 = h0 * config.tau0_ratio.value_or(std::pow(4.0, 1 - config.k));
    }
    const DofLayout layout(mesh, config.k);
    row.dofs = layout.total();
    row.dofs_formula = DofLayout::per_polygon_formula_total(config.k, static_cast<long>(mesh.num_edges()),
                                                           static_cast<long>(mesh.num_cells()));
    row.steps = steps_for(config.T, tau0, h0, row.h, config.k);
    const SystemState final_state = simulate_case(mesh, config.k, mc, config.T, row.steps, config.exec);
    row.errors = error_norms(mesh, config.k, final_state.x, mc, final_state.t, config.exec);
    rows.push_back(row);
  }
  fill_rates(rows);
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "h,dofs,e_sig0,rate_sig0,e_sig1,rate_sig1,e_v,rate_v,e_r,rate_r,e_div,rate_div\n";
  out.precision(10);
  for (const auto& row : rows) {
    out << row.h << ',' << row.dofs;
    const auto e = row.errors.as_array();
    for (std::size_t f = 0; f < 5; ++f) {
      out << ',' << e[f] << ',';
      if (std::isnan(row.rates[f])) {
        out << "nan";
      } else {
        out << row.rates[f];
      }
    }
    out << '\n';
  }
}

PatchResult patch_test(const PolygonalMesh& mesh, int k, int steps, double tau) {
  const ManufacturedCase mc = patch_case(MaterialParams::standard());
  const SystemState s = simulate_case(mesh, k, mc, steps * tau, steps);
  PatchResult r;
  r.errors = error_norms(mesh, k, s.x, mc, s.t);
  r.max_error = r.errors.max();
  return r;
}

EnergyResult energy_test(const PolygonalMesh& mesh, int k, const MaterialParams& params, double tau, int steps,
                         unsigned seed) {
  const BlockOperators ops = assemble_global(mesh, k, params);
  const DofLayout& layout = ops.layout;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SystemState s;
  s.x = Eigen::VectorXd::NullaryExpr(layout.total(), [&] { return u(rng); });
  for (int i : ops.constrained) s.x[i] = 0.0;

  // Remove the skew part: sigma1_f -= H_f^T (H_f H_f^T)^{-1} H (sigma0 + sigma1).
  const int ns = layout.stress_size();
  std::vector<int> constrained_rel;
  for (int i : ops.constrained) {
    if (i >= layout.offset(FieldKind::Stress1) && i < layout.offset(FieldKind::Stress1) + ns) {
      constrained_rel.push_back(i - layout.offset(FieldKind::Stress1));
    }
  }
  Eigen::VectorXd keep = Eigen::VectorXd::Ones(ns);
  for (int i : constrained_rel) keep[i] = 0.0;
  const SparseMatrix hf = ops.H * keep.asDiagonal();
  Eigen::SimplicialLDLT<SparseMatrix> hh(SparseMatrix(hf * hf.transpose()));
  if (hh.info() != Eigen::Success) throw SingularSystem("rotation coupling has dependent rows");
  StateBlocks b = split_state(layout, s.x);
  b.sigma1 -= hf.transpose() * hh.solve(ops.H * (b.sigma0 + b.sigma1));
  s.x.segment(layout.offset(FieldKind::Stress1), ns) = b.sigma1;

  const Eigen::VectorXd h0 = ops.H * (b.sigma0 + b.sigma1);
  double h_norm = 0.0;
  for (int r = 0; r < ops.H.rows(); ++r) h_norm = std::max(h_norm, ops.H.row(r).cwiseAbs().sum());
  const double sym_scale = std::max(h_norm * (b.sigma0 + b.sigma1).lpNorm<Eigen::Infinity>(), 1e-300);

  EnergyResult result;
  result.samples.push_back(energy(ops, s));
  const double e0 = result.samples.front().energy;
  const CrankNicolson cn(ops, tau);
  run(cn, s, steps, TimeDependentData{}, [&](const SystemState& st) {
    const EnergySample sample = energy(ops, st);
    const double prev = result.samples.back().energy;
    if (sample.energy <= prev + 1e-12 * e0) {
      ++result.nonincreasing_steps;
    } else if (result.first_violation < 0) {
      result.first_violation = st.step;
    }
    const StateBlocks sb = split_state(layout, st.x);
    const double drift = (ops.H * (sb.sigma0 + sb.sigma1) - h0).lpNorm<Eigen::Infinity>() / sym_scale;
    result.symmetry_drift = std::max(result.symmetry_drift, drift);
    result.samples.push_back(sample);
  });
  return result;
}

MaterialParams marker_standard() {
  MaterialParams p;
  p.rho = 1000.0;
  return p;
}

MaterialParams marker_low_viscosity() {
  MaterialParams p = marker_standard();
  p.mu0p = 1e-5;
  p.lambda0p = 1e-6;
  return p;
}

MarkerSeries marker_experiment(const MaterialParams& params, int n, int k, double T, double tau) {
  const PolygonalMesh mesh = generate_cartesian(n, all_dirichlet_tagging());
  const BlockOperators ops = assemble_global(mesh, k, params);
  const LoadAssembler load(mesh, k, params.rho);
  const Point marker(0.5, 0.5);
  const int cell = locate_cell(mesh, marker);
  if (cell < 0) throw InvalidArgument("marker lies outside the mesh");
  const CellGeometry g = cell_geometry(mesh, cell);
  const ScaledMonomials2D basis(g.centroid, g.diameter, k);
  const int vel = ops.layout.offset(FieldKind::Velocity) + ops.layout.velocity_dof(cell, 0, 0);
  const int nv = ops.layout.velocity_block();

  const Eigen::VectorXd forcing = load([](const Point&, double) { return Eigen::Vector2d(1.0, 1.0); }, {}, 0.0);
  TimeDependentData data;
  data.load = [&](double) { return forcing; };

  MarkerSeries series;
  SystemState s;
  s.x = Eigen::VectorXd::Zero(ops.layout.total());
  series.t.push_back(0.0);
  series.vx.push_back(0.0);
  const int steps = static_cast<int>(std::lround(T / tau));
  const CrankNicolson cn(ops, T / steps);
  run(cn, s, steps, data, [&](const SystemState& st) {
    series.t.push_back(st.t);
    series.vx.push_back(eval_vector(basis, st.x.segment(vel, nv), marker).x());
  });

  double all = 0.0, late = 0.0;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const double a = std::abs(series.vx[i]);
    all = std::max(all, a);
    if (series.t[i] >= 0.8 * T - 1e-9) late = std::max(late, a);
  }
  series.late_ratio = all > 0.0 ? late / all : 0.0;
  return series;
}

void write_marker_csv(std::ostream& out, const MarkerSeries& series) {
  out << "t,vx\n";
  out.precision(12);
  for (std::size_t i = 0; i < series.t.size(); ++i) out << series.t[i] << ',' << series.vx[i] << '\n';
}

RichardsonResult time_self_convergence(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double T,
                                       int n_coarse) {
  const Eigen::VectorXd x1 = simulate_case(mesh, k, mc, T, n_coarse).x;
  const Eigen::VectorXd x2 = simulate_case(mesh, k, mc, T, 2 * n_coarse).x;
  const Eigen::VectorXd x4 = simulate_case(mesh, k, mc, T, 4 * n_coarse).x;
  RichardsonResult r;
  r.coarse_diff = (x1 - x2).norm();
  r.fine_diff = (x2 - x4).norm();
  r.order = std::log2(r.coarse_diff / r.fine_diff);
  return r;
}

}  // namespace zvem
