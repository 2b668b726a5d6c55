#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "zvem/commands.hpp"
#include "zvem/errors.hpp"

namespace {

struct Flags {
  int k = 1;
  std::string case_name;
  std::string mesh_kind;
  std::vector<int> sizes;
  double T = 0.0;
  double tau0 = 0.0;
  std::string params_file;
  std::string preset;
  std::string out;
  unsigned seed = 0;
  int threads = 0;
  std::string boundary;
};

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--k", f.k, "Polynomial degree (1-3)");
  app.add_option("--case", f.case_name, "Manufactured case")->check(CLI::IsMember(zvem::case_names()));
  app.add_option("--mesh-kind", f.mesh_kind, "cartesian, hexagonal or partitioned");
  app.add_option("--sizes", f.sizes, "Mesh sizes of the study")->delimiter(',');
  app.add_option("--T", f.T, "Final time");
  app.add_option("--tau0", f.tau0, "Time step on the coarsest mesh");
  app.add_option("--params", f.params_file, "JSON config file");
  app.add_option("--preset", f.preset, "Material parameters")
      ->check(CLI::IsMember({"standard", "nearly-incompressible"}));
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--seed", f.seed, "Seed for random initial data");
  app.add_option("--threads", f.threads, "OpenMP threads (0 keeps the default)");
  app.add_option("--boundary", f.boundary, "Boundary tagging")->check(CLI::IsMember({"default", "all-dirichlet"}));
}

zvem::RunConfig build_config(const CLI::App& app, const Flags& f) {
  zvem::RunConfig c;
  if (app.count("--params")) zvem::apply_config_file(c, f.params_file);
  if (app.count("--preset")) c.params = zvem::material_preset(f.preset);
  if (app.count("--k")) c.k = f.k;
  if (app.count("--case")) c.case_name = f.case_name;
  if (app.count("--mesh-kind")) c.family = zvem::parse_family(f.mesh_kind);
  if (app.count("--sizes")) c.sizes = f.sizes;
  if (app.count("--T")) c.T = f.T;
  if (app.count("--tau0")) c.tau0 = f.tau0;
  if (app.count("--out")) c.out = f.out;
  if (app.count("--seed")) c.seed = f.seed;
  if (app.count("--threads")) c.threads = f.threads;
  if (app.count("--boundary")) c.all_dirichlet = f.boundary == "all-dirichlet";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed virtual element solver for Zener viscoelasticity"};
  app.require_subcommand(1);

  Flags flags;
  std::string mesh_kind;
  std::vector<int> mesh_sizes;
  CLI::App* mesh = app.add_subcommand("mesh", "Generate a mesh file and print its quality figures");
  mesh->add_option("kind", mesh_kind, "cartesian, hexagonal or partitioned")->required();
  mesh->add_option("size", mesh_sizes, "n, or n_left n_right for partitioned")->required();
  CLI::App* convergence = app.add_subcommand("convergence", "Spatial convergence study");
  CLI::App* patch = app.add_subcommand("patch", "Constant-stress patch test");
  CLI::App* energy = app.add_subcommand("energy", "Energy decay from random data");
  CLI::App* marker = app.add_subcommand("marker", "Damped oscillation of a marker");
  for (CLI::App* sub : {mesh, convergence, patch, energy, marker}) add_common(*sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return zvem::kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::ostringstream report;
  int status = zvem::kSuccess;
  try {
    const zvem::RunConfig config = build_config(*sub, flags);
    config.validate();
    if (config.threads > 0) omp_set_num_threads(config.threads);
    if (sub == mesh) {
      status = zvem::cmd_mesh(mesh_kind, mesh_sizes, config, report);
    } else if (sub == convergence) {
      status = zvem::cmd_convergence(config, report);
    } else if (sub == patch) {
      status = zvem::cmd_patch(config, report);
    } else if (sub == energy) {
      status = zvem::cmd_energy(config, report);
    } else {
      status = zvem::cmd_marker(config, report);
    }
    std::cout << report.str();
    std::ofstream(std::filesystem::path(config.out) / (sub->get_name() + "_report.txt")) << report.str();
  } catch (const zvem::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return zvem::kUsageError;
  } catch (const std::exception& e) {
    std::cout << report.str();
    std::cerr << "error: " << e.what() << '\n';
    return zvem::kAcceptanceFailure;
  }
  return status;
}
