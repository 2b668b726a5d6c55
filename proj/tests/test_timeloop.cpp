#include <random>

#include <doctest.h>

#include "support.hpp"
#include "zvem/errors.hpp"
#include "zvem/study.hpp"
#include "zvem/timeloop.hpp"

using namespace zvem;

namespace {

double quadratic(const SparseMatrix& a, const Eigen::VectorXd& x) { return x.dot(a * x); }

SystemState random_homogeneous_state(const BlockOperators& ops, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SystemState s;
  s.x = Eigen::VectorXd::NullaryExpr(ops.layout.total(), [&] { return u(rng); });
  for (int i : ops.constrained) s.x[i] = 0.0;
  return s;
}

}  // namespace

TEST_CASE("initial state") {
  const PolygonalMesh mesh = generate_hexagonal(3);
  const SystemState zero = initial_state(mesh, 1, InitialFields{});
  CHECK(zero.x.size() == DofLayout(mesh, 1).total());
  CHECK(zero.x.norm() == 0.0);
  CHECK(zero.step == 0);
  CHECK(zero.t == 0.0);

  const ManufacturedCase mc = build_case("poly-t2", MaterialParams::standard());
  InitialFields init;
  init.sigma0 = [&](const Point& x) { return mc.sigma0(x, 0.0); };
  init.sigma1 = [&](const Point& x) { return mc.sigma1(x, 0.0); };
  init.v = [&](const Point& x) { return mc.v(x, 0.0); };
  init.s = [&](const Point& x) { return mc.rotation(x, 0.0); };
  CHECK(initial_state(mesh, 1, init).x.norm() == 0.0);
}

TEST_CASE("symmetric stress satisfies the weak symmetry constraint") {
  const PolygonalMesh mesh = generate_partitioned(1, 2);
  for (int k = 1; k <= 2; ++k) {
    const BlockOperators ops = assemble_global(mesh, k, MaterialParams::standard());
    Tensor2 c;
    c << 1.5, -0.7, -0.7, 0.2;
    InitialFields init;
    init.sigma0 = [&](const Point&) { return c; };
    const SystemState s = initial_state(mesh, k, init);
    CHECK(symmetry_residual(ops, s.x) <= 1e-12);

    Tensor2 skew = Tensor2::Zero();
    skew(0, 1) = 1.0;
    init.sigma0 = [&](const Point&) { return skew; };
    CHECK(symmetry_residual(ops, initial_state(mesh, k, init).x) > 1e-3);
  }
}

TEST_CASE("zero data keeps the zero state") {
  const PolygonalMesh mesh = generate_cartesian(3);
  const BlockOperators ops = assemble_global(mesh, 1, MaterialParams::standard());
  const CrankNicolson cn(ops, 0.1);
  SystemState s;
  s.x = Eigen::VectorXd::Zero(ops.layout.total());
  int calls = 0;
  const SystemState end = run(cn, s, 7, TimeDependentData{}, [&](const SystemState& st) {
    ++calls;
    CHECK(st.x.norm() == 0.0);
  });
  CHECK(calls == 7);
  CHECK(end.step == 7);
}

TEST_CASE("steady patch state is a fixed point") {
  for (const PolygonalMesh& mesh : {generate_cartesian(3), generate_hexagonal(4)}) {
    for (int k = 1; k <= 2; ++k) {
      const ManufacturedCase mc = patch_case(MaterialParams::standard());
      const BlockOperators ops = assemble_global(mesh, k, mc.params);
      InitialFields init;
      init.sigma1 = [&](const Point& x) { return mc.sigma1(x, 0.0); };
      const SystemState x0 = initial_state(mesh, k, init);
      const ConstraintEvaluator traction(mesh, ops);
      TimeDependentData data;
      data.constraints = [&](double t) { return traction(mc.sigma0, mc.sigma1, t); };
      const CrankNicolson cn(ops, 0.25);
      const SystemState x1 = cn.step(x0, data);
      CHECK((x1.x - x0.x).lpNorm<Eigen::Infinity>() <= 1e-10 * std::max(1.0, x0.x.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("Crank-Nicolson energy identity") {
  const PolygonalMesh mesh = generate_hexagonal(3);
  for (int k = 1; k <= 2; ++k) {
    const BlockOperators ops = assemble_global(mesh, k, MaterialParams::standard());
    for (double tau : {0.05, 1.0}) {
      const CrankNicolson cn(ops, tau);
      SystemState prev = random_homogeneous_state(ops, 17);
      const double e0 = quadratic(ops.A, prev.x);
      for (int n = 0; n < 20; ++n) {
        const SystemState next = cn.step(prev, TimeDependentData{});
        const Eigen::VectorXd sum = next.x + prev.x;
        const StateBlocks b = split_state(ops.layout, sum);
        const double lhs = quadratic(ops.A, next.x) - quadratic(ops.A, prev.x);
        const double rhs = -0.5 * tau * quadratic(ops.A0p, b.sigma0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(e0 * 1e-10));
        CHECK(lhs <= 1e-12 * e0);
        prev = next;
      }
    }
  }
}

TEST_CASE("energy decays from weakly symmetric data") {
  const PolygonalMesh mesh = generate_cartesian(4);
  const EnergyResult r = energy_test(mesh, 1, MaterialParams::standard(), 0.1, 50, 3);
  CHECK(r.first_violation == -1);
  CHECK(r.nonincreasing_steps == 50);
  CHECK(r.samples.size() == 51);
  CHECK(r.samples.front().weakly_symmetric);
  CHECK(r.symmetry_drift <= 1e-10);
  CHECK(r.samples.back().energy < r.samples.front().energy);
  for (const auto& s : r.samples) CHECK(s.dissipation >= 0.0);
}

TEST_CASE("run semantics") {
  const PolygonalMesh mesh = generate_cartesian(3);
  const ManufacturedCase mc = build_case("poly-t3", MaterialParams::standard());
  const BlockOperators ops = assemble_global(mesh, 1, mc.params);
  const LoadAssembler load(mesh, 1, mc.params.rho);
  const ConstraintEvaluator traction(mesh, ops);
  TimeDependentData data;
  data.load = [&](double t) { return load(mc.f, mc.v, t); };
  data.constraints = [&](double t) { return traction(mc.sigma0, mc.sigma1, t); };

  const double tau = 0.1;
  const CrankNicolson cn(ops, tau);
  SystemState x0;
  x0.x = Eigen::VectorXd::Zero(ops.layout.total());
  const SystemState one = run(cn, x0, 1, data);
  const SystemState direct = cn.step(x0, data);
  CHECK((one.x - direct.x).norm() == 0.0);

  std::vector<double> times;
  run(cn, x0, 30, data, [&](const SystemState& s) { times.push_back(s.t); });
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == static_cast<double>(i + 1) * tau);

  CHECK_THROWS_AS(run(cn, x0, 0, data), InvalidArgument);
}

TEST_CASE("Richardson self-convergence ratio") {
  const PolygonalMesh mesh = generate_cartesian(4);
  const ManufacturedCase mc = build_case("exp-trig", MaterialParams::standard());
  const RichardsonResult r = time_self_convergence(mesh, 1, mc, 1.0, 10);
  const double ratio = r.coarse_diff / r.fine_diff;
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);
}
