#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "xxtherm/model.hpp"

using namespace xxtherm;
using oracles::rel_err;

TEST_CASE("spectrum is (-h, -lambda, h, lambda) in coupled order") {
  CHECK(spectrum(ModelParams{0.0, 0.0}).energies == std::array<double, 4>{0, 0, 0, 0});
  CHECK(spectrum(ModelParams{2.682, 1.0}).energies ==
        std::array<double, 4>{-1.0, -2.682, 1.0, 2.682});
  // lambda = h: twofold-degenerate two-level system
  CHECK(spectrum(ModelParams{1.0, 1.0}).energies == std::array<double, 4>{-1.0, -1.0, 1.0, 1.0});
  double sum = 0;
  for (double e : spectrum(ModelParams{2.682, 1.0}).energies) sum += e;
  CHECK(sum == 0.0);  // traceless Hamiltonian
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ThermalContext(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ThermalContext(-2.0), std::invalid_argument);
}

TEST_CASE("partition function closed form") {
  const ThermalContext t(3.7);
  CHECK(partition_function(ModelParams{0.0, 0.0}, t) == 4.0);
  CHECK(partition_function(ModelParams{1.0, 1.0}, ThermalContext{1.0}) ==
        doctest::Approx(4 * std::cosh(1.0)).epsilon(1e-15));
  const double z = partition_function(ModelParams{2.682, 1.0}, ThermalContext{2.0});
  CHECK(rel_err(z, oracles::spectrum_sum_partition(2.682, 1.0, 2.0)) < 1e-14);
  CHECK(rel_err(z, 2 * std::cosh(2.0) + 2 * std::cosh(5.364)) < 1e-14);
}

TEST_CASE("internal energy closed form and limits") {
  CHECK(internal_energy(ModelParams{0.0, 0.0}, ThermalContext{1.0}) == 0.0);
  // beta -> inf: ground-state energy dominates
  CHECK(internal_energy(ModelParams{1.0, 1.0}, ThermalContext{50.0}) ==
        doctest::Approx(-1.0).epsilon(1e-10));
  const double u = internal_energy(ModelParams{2.682, 1.0}, ThermalContext{2.0});
  CHECK(rel_err(u, oracles::boltzmann_mean_energy(2.682, 1.0, 2.0)) < 1e-14);
}

TEST_CASE("heat capacity closed form") {
  // degenerate two-level system +-h: Schottky form beta^2/cosh^2(beta)
  for (double beta : {0.5, 1.0, 2.0, 7.0}) {
    const double cv = heat_capacity(ModelParams{1.0, 1.0}, ThermalContext{beta});
    CHECK(rel_err(cv, beta * beta / (std::cosh(beta) * std::cosh(beta))) < 1e-13);
  }
  CHECK(heat_capacity(ModelParams{0.0, 0.0}, ThermalContext{3.0}) == 0.0);
  CHECK(heat_capacity(ModelParams{2.68228, 1.0}, ThermalContext{2.0}) ==
        doctest::Approx(0.4).epsilon(5e-4 / 0.4));
}

TEST_CASE("thermodynamic consistency on a random grid") {
  oracles::Uniform rnd(0x1234abcdULL);
  for (int k = 0; k < 10000; ++k) {
    const double lam = rnd(-5, 5), h = rnd(0, 5), beta = rnd(0.1, 12);
    const ModelParams p{lam, h};
    const ThermalContext t{beta};
    const double z = partition_function(p, t);
    CHECK(rel_err(z, oracles::spectrum_sum_partition(lam, h, beta)) < 1e-12);
    const double cv = heat_capacity(p, t);
    CHECK(cv >= 0.0);
    CHECK(rel_err(cv, oracles::variance_heat_capacity(lam, h, beta)) < 1e-12);
    // evenness in lambda
    const ModelParams pm{-lam, h};
    CHECK(rel_err(z, partition_function(pm, t)) < 1e-12);
    CHECK(rel_err(cv, heat_capacity(pm, t)) < 1e-12);
  }
}

TEST_CASE("heat capacity equals -beta^2 dU/dbeta (finite difference)") {
  oracles::Uniform rnd(0x9e3779b9ULL);
  for (int k = 0; k < 1000; ++k) {
    const double lam = rnd(-5, 5), h = rnd(0, 5), beta = rnd(0.1, 12);
    const double cv = heat_capacity(ModelParams{lam, h}, ThermalContext{beta});
    CHECK(rel_err(cv, oracles::finite_difference_heat_capacity(lam, h, beta)) < 1e-6);
  }
}

TEST_CASE("large-coupling freeze-out") {
  CHECK(heat_capacity(ModelParams{50.0, 1.0}, ThermalContext{1.0}) < 1e-10);
}

TEST_CASE("log partition function stays finite past double range") {
  const ModelParams p{200.0, 1.0};
  const ThermalContext t{10.0};
  const double lz = log_partition_function(p, t);
  CHECK(std::isfinite(lz));
  CHECK(rel_err(lz, 2000.0) < 1e-6);  // dominated by beta*lambda
  // agrees with ln of the direct sum where that is representable
  const ModelParams q{2.682, 1.0};
  const ThermalContext t2{2.0};
  CHECK(rel_err(log_partition_function(q, t2), std::log(partition_function(q, t2))) < 1e-14);
}

TEST_CASE("analytic dC_V/dlambda matches central differences") {
  for (double beta : {1.0, 2.0, 3.0, 6.0}) {
    for (double lam : {0.3, 0.7, 1.5, 2.5, 4.0, 40.0}) {
      const ThermalContext t{beta};
      const double d = heat_capacity_dlambda(ModelParams{lam, 1.0}, t);
      const double step = 1e-6;
      const double fd = (heat_capacity(ModelParams{lam + step, 1.0}, t) -
                         heat_capacity(ModelParams{lam - step, 1.0}, t)) /
                        (2 * step);
      if (std::abs(fd) > 1e-8)
        CHECK(rel_err(d, fd) < 1e-4);
      else
        CHECK(std::abs(d - fd) < 1e-8);
    }
  }
}

TEST_CASE("gap info sorts levels with multiplicity") {
  const auto g1 = gap_info(ModelParams{2.0, 1.0});
  CHECK(g1.ground_energy == -2.0);
  CHECK(g1.first_gap == 1.0);
  CHECK(g1.second_gap == 3.0);
  const auto g2 = gap_info(ModelParams{0.0, 1.0});
  CHECK(g2.ground_energy == -1.0);
  CHECK(g2.first_gap == 1.0);
  // level crossing at lambda = h: degenerate ground doublet
  const auto g3 = gap_info(ModelParams{1.5, 1.5});
  CHECK(g3.first_gap == 0.0);
  CHECK(g3.ground_energy == -1.5);
}

TEST_CASE("thermal state: infinite-temperature limit") {
  for (auto basis : {Basis::Coupled, Basis::Product}) {
    const auto rho = thermal_state(ModelParams{2.682, 1.0}, ThermalContext{1e-9}, basis);
    const Eigen::Matrix4cd diff = rho.entries - Eigen::Matrix4cd::Identity() * 0.25;
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("thermal state: no interaction means no coherence") {
  const auto rho = thermal_state(ModelParams{0.0, 0.7}, ThermalContext{2.0}, Basis::Product);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(rho.entries(i, j)) == 0.0);
}

TEST_CASE("thermal state: X form and basis change") {
  const ModelParams p{2.682, 1.0};
  const ThermalContext t{2.0};
  const auto prod = thermal_state(p, t, Basis::Product);
  const auto coup = thermal_state(p, t, Basis::Coupled);
  const double z = partition_function(p, t);
  CHECK(rel_err(prod.entries(1, 2).real(), std::sinh(5.364) / z) < 1e-13);
  CHECK(rel_err(prod.entries(0, 0).real(), std::exp(2.0) / z) < 1e-13);

  const Eigen::Matrix4cd u = oracles::coupled_to_product();
  const Eigen::Matrix4cd mapped = u * coup.entries * u.adjoint();
  CHECK((mapped - prod.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("thermal state invariants on a random grid") {
  oracles::Uniform rnd(0x77aa55ULL);
  for (int k = 0; k < 300; ++k) {
    const ModelParams p{rnd(-5, 5), rnd(0, 5)};
    const ThermalContext t{rnd(0.1, 12)};
    for (auto basis : {Basis::Coupled, Basis::Product}) {
      const auto rho = thermal_state(p, t, basis);
      CHECK((rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(rho.entries.trace().real() - 1.0) < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.entries);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
    const Eigen::Matrix4cd u = oracles::coupled_to_product();
    const auto prod = thermal_state(p, t, Basis::Product);
    const auto coup = thermal_state(p, t, Basis::Coupled);
    CHECK((u * coup.entries * u.adjoint() - prod.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}
