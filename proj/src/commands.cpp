#include "zvem/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zvem/errors.hpp"

namespace zvem {

namespace {

std::filesystem::path output_path(const RunConfig& config, const std::string& name) {
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory '" + config.out + "'");
  return dir / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  return out;
}

TaggingRule tagging(const RunConfig& config) {
  return config.all_dirichlet ? all_dirichlet_tagging() : default_tagging();
}

void read_params(MaterialParams& p, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("'params' must be an object");
  for (const auto& [key, value] : j.items()) {
    const double v = value.get<double>();
    if (key == "mu0") p.mu0 = v;
    else if (key == "lambda0") p.lambda0 = v;
    else if (key == "mu0p") p.mu0p = v;
    else if (key == "lambda0p") p.lambda0p = v;
    else if (key == "mu1") p.mu1 = v;
    else if (key == "lambda1") p.lambda1 = v;
    else if (key == "rho") p.rho = v;
    else throw InvalidArgument("unknown material parameter '" + key + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (k < 1 || k > 3) throw InvalidArgument("k must be 1, 2 or 3");
  if (sizes.empty()) throw InvalidArgument("no mesh sizes given");
  for (int s : sizes) {
    if (s < 1) throw InvalidArgument("mesh sizes must be positive");
  }
  if (T && !(*T > 0.0)) throw InvalidArgument("T must be positive");
  if (threads < 0) throw InvalidArgument("threads must be non-negative");
  params.validate();
}

MaterialParams material_preset(const std::string& name) {
  if (name == "standard") return MaterialParams::standard();
  if (name == "nearly-incompressible") return MaterialParams::nearly_incompressible();
  throw InvalidArgument("unknown preset '" + name + "'");
}

void apply_config_json(RunConfig& config, std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    if (j.contains("case")) config.case_name = j["case"].get<std::string>();
    if (j.contains("mesh_kind")) config.family = parse_family(j["mesh_kind"].get<std::string>());
    if (j.contains("sizes")) config.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("k")) config.k = j["k"].get<int>();
    if (j.contains("preset")) config.params = material_preset(j["preset"].get<std::string>());
    if (j.contains("params")) read_params(config.params, j["params"]);
    if (j.contains("T")) config.T = j["T"].get<double>();
    if (j.contains("tau0")) config.tau0 = j["tau0"].get<double>();
    if (j.contains("out")) config.out = j["out"].get<std::string>();
    if (j.contains("seed")) config.seed = j["seed"].get<unsigned>();
    if (j.contains("threads")) config.threads = j["threads"].get<int>();
    if (j.contains("boundary")) {
      const auto b = j["boundary"].get<std::string>();
      if (b != "default" && b != "all-dirichlet") throw InvalidArgument("boundary must be default or all-dirichlet");
      config.all_dirichlet = b == "all-dirichlet";
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config: ") + e.what());
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  apply_config_json(config, in);
}

int cmd_mesh(const std::string& kind, const std::vector<int>& sizes, const RunConfig& config, std::ostream& report) {
  const MeshFamily family = parse_family(kind);
  const std::size_t expected = family == MeshFamily::Partitioned ? 2 : 1;
  if (sizes.size() != expected) {
    throw InvalidArgument(kind + " expects " + std::to_string(expected) + " size argument(s)");
  }
  for (int s : sizes) {
    if (s < 1) throw InvalidArgument("mesh sizes must be positive");
  }
  const TaggingRule rule = tagging(config);
  const PolygonalMesh mesh = family == MeshFamily::Partitioned ? generate_partitioned(sizes[0], sizes[1], rule)
                                                               : family_mesh(family, sizes[0], rule);
  std::string name = kind;
  for (int s : sizes) name += "_" + std::to_string(s);
  const auto path = output_path(config, name + ".vemmesh");
  write_mesh(path.string(), mesh);

  const MeshQualityReport q = quality_report(mesh);
  report << "mesh " << path.string() << '\n'
         << "vertices " << mesh.num_vertices() << '\n'
         << "cells " << mesh.num_cells() << '\n'
         << "edges " << mesh.num_edges() << '\n'
         << std::setprecision(12) << "total_area " << q.total_area << '\n'
         << std::setprecision(6) << "max_diameter " << q.max_diameter << '\n'
         << "max_vertices_per_cell " << q.max_vertices << '\n'
         << "min_edge_ratio " << q.min_edge_ratio << '\n'
         << "min_inradius_ratio " << q.min_inradius_ratio << '\n'
         << "hanging_nodes " << count_hanging_nodes(mesh) << '\n';
  return kSuccess;
}

int cmd_convergence(const RunConfig& config, std::ostream& report) {
  config.validate();
  if (config.sizes.size() < 3) throw InvalidArgument("a convergence study needs at least three meshes");
  ConvergenceConfig c;
  c.case_name = config.case_name;
  c.family = config.family;
  c.sizes = config.sizes;
  c.k = config.k;
  c.params = config.params;
  c.T = config.T.value_or(1.0);
  c.tau0 = config.tau0;
  c.all_dirichlet = config.all_dirichlet;
  const auto rows = convergence_study(c);

  const std::string stem = "convergence_" + c.case_name + "_" + family_name(c.family) + "_k" + std::to_string(c.k);
  const auto path = output_path(config, stem + ".csv");
  std::ofstream csv = open_output(path);
  write_convergence_csv(csv, rows);

  report << "case " << c.case_name << ", " << family_name(c.family) << " meshes, k = " << c.k << ", T = " << c.T
         << '\n';
  report << std::setw(10) << "h" << std::setw(9) << "dofs" << std::setw(7) << "steps";
  for (const char* f : kFieldNames) report << std::setw(12) << (std::string("e_") + f) << std::setw(7) << "rate";
  report << '\n';
  for (const auto& row : rows) {
    report << std::setw(10) << std::setprecision(4) << row.h << std::setw(9) << row.dofs << std::setw(7) << row.steps;
    const auto e = row.errors.as_array();
    for (std::size_t f = 0; f < e.size(); ++f) {
      report << std::setw(12) << std::scientific << std::setprecision(3) << e[f] << std::defaultfloat;
      if (std::isnan(row.rates[f])) {
        report << std::setw(7) << "-";
      } else {
        report << std::setw(7) << std::fixed << std::setprecision(2) << row.rates[f] << std::defaultfloat;
      }
    }
    report << '\n';
  }

  const auto fitted = fitted_rates(rows);
  const double bound = c.k + 1 - 0.15;
  int status = kSuccess;
  report << "fitted rates:";
  for (std::size_t f = 0; f < fitted.size(); ++f) {
    report << ' ' << kFieldNames[f] << '=' << std::fixed << std::setprecision(3) << fitted[f] << std::defaultfloat;
  }
  report << '\n';
  for (std::size_t f = 0; f < fitted.size(); ++f) {
    if (!(fitted[f] >= bound)) {
      report << "rate below " << bound << " for " << kFieldNames[f] << '\n';
      status = kAcceptanceFailure;
    }
  }
  report << "csv " << path.string() << '\n';
  return status;
}

int cmd_patch(const RunConfig& config, std::ostream& report) {
  config.validate();
  int status = kSuccess;
  const std::pair<const char*, PolygonalMesh> meshes[] = {
      {"cartesian 3", generate_cartesian(3, tagging(config))},
      {"hexagonal 4", generate_hexagonal(4, tagging(config))},
  };
  for (const auto& [name, mesh] : meshes) {
    const PatchResult r = patch_test(mesh, config.k);
    const bool ok = r.max_error <= 1e-9;
    report << "patch " << name << " k=" << config.k << " max error " << std::scientific << std::setprecision(3)
           << r.max_error << std::defaultfloat << (ok ? " ok" : " FAILED") << '\n';
    if (!ok) status = kAcceptanceFailure;
  }
  return status;
}

int cmd_energy(const RunConfig& config, std::ostream& report) {
  config.validate();
  const PolygonalMesh mesh = generate_cartesian(8, tagging(config));
  constexpr int steps = 200;
  int status = kSuccess;
  for (double tau : {0.1, 1.0}) {
    const EnergyResult r = energy_test(mesh, config.k, config.params, tau, steps, config.seed);
    std::ostringstream name;
    name << "energy_tau" << tau << ".csv";
    std::ofstream csv = open_output(output_path(config, name.str()));
    csv << "t,energy,dissipation\n" << std::setprecision(15);
    for (const auto& s : r.samples) csv << s.t << ',' << s.energy << ',' << s.dissipation << '\n';

    report << "tau " << tau << ": " << r.nonincreasing_steps << '/' << steps << " nonincreasing steps, E0 "
           << std::scientific << std::setprecision(4) << r.samples.front().energy << ", E_end "
           << r.samples.back().energy << ", symmetry drift " << r.symmetry_drift << std::defaultfloat << '\n';
    if (r.first_violation >= 0) {
      report << "energy increased at step " << r.first_violation << " (tau " << tau << ")\n";
      status = kAcceptanceFailure;
    }
    if (!(r.symmetry_drift <= 1e-10)) {
      report << "weak symmetry not conserved (tau " << tau << ")\n";
      status = kAcceptanceFailure;
    }
  }
  return status;
}

int cmd_marker(const RunConfig& config, std::ostream& report) {
  config.validate();
  const double T = config.T.value_or(100.0);
  int status = kSuccess;
  const struct {
    const char* name;
    MaterialParams params;
    bool damped;
  } runs[] = {{"standard", marker_standard(), true}, {"low_viscosity", marker_low_viscosity(), false}};
  for (const auto& run : runs) {
    const MarkerSeries s = marker_experiment(run.params, 9, config.k, T, 0.1);
    std::ofstream csv = open_output(output_path(config, std::string("marker_") + run.name + ".csv"));
    write_marker_csv(csv, s);
    const bool ok = run.damped ? s.late_ratio < 0.05 : s.late_ratio > 0.5;
    report << "marker " << run.name << ": late-window amplitude ratio " << std::setprecision(4) << s.late_ratio
           << (ok ? " ok" : " FAILED") << '\n';
    if (!ok) status = kAcceptanceFailure;
  }
  return status;
}

}  // namespace zvem
