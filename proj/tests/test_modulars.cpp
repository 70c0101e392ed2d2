#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "fgl/modulars.hpp"

using fgl::build_grid;
using fgl::Grid;
using fgl::GridFunction;
using fgl::OrliczFamily;
using fgl::parse_domain;

namespace {

GridFunction random_interior(const Grid& grid, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> ud(-amp, amp);
  GridFunction u = fgl::zero_function(grid);
  for (int i : grid.interior) u.values[i] = ud(rng);
  return u;
}

// independent accumulation over all ordered pairs with an interior endpoint
double brute_modular(const OrliczFamily& fam, const GridFunction& u) {
  const Grid& grid = *u.grid;
  double acc = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    for (int j = 0; j < grid.n_nodes(); ++j) {
      if (i == j || !grid.pair_included(i, j)) continue;
      if (!grid.is_interior(i) && !grid.is_interior(j)) continue;
      acc += fam.G((u.values[i] - u.values[j]) * grid.inv_dist_s(i, j)) * grid.cell(i) *
             grid.cell(j) * grid.inv_dist_N(i, j);
    }
  for (int i : grid.interior)
    acc += grid.cell(i) * fgl::modular_tail(fam, grid, i, u.values[i]);
  return acc;
}

}  // namespace

TEST_CASE("spatial modular sums cell by cell", "[modulars]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  const OrliczFamily fam = OrliczFamily::power_law(3.0);
  GridFunction u = fgl::zero_function(grid);
  u.values[grid.interior[10]] = 2.0;
  u.values[grid.interior[20]] = -1.0;
  const double want = (8.0 / 3.0 + 1.0 / 3.0) * grid.hx();
  CHECK(fgl::modular_Phi_G(fam, u) == Catch::Approx(want).epsilon(1e-13));
}

TEST_CASE("pair modular matches a brute-force double sum", "[modulars]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(21);
  for (const OrliczFamily& fam :
       {OrliczFamily::power_law(4.0), OrliczFamily::sum_of_powers(2.0, 4.0)}) {
    for (int trial = 0; trial < 3; ++trial) {
      const GridFunction u = random_interior(grid, rng);
      CHECK(fgl::modular_Phi_sG(fam, u) ==
            Catch::Approx(brute_modular(fam, u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pair modular in 2d matches the brute force too", "[modulars][2d]") {
  const Grid grid = build_grid(parse_domain("box:-1,1,-1,1"), 10, 0.5, 6.0);
  std::mt19937_64 rng(22);
  const OrliczFamily fam = OrliczFamily::power_law(4.0);
  const GridFunction u = random_interior(grid, rng);
  CHECK(fgl::modular_Phi_sG(fam, u) == Catch::Approx(brute_modular(fam, u)).epsilon(1e-12));
}

TEST_CASE("pure powers scale the modular exactly", "[modulars]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  const OrliczFamily fam = OrliczFamily::power_law(5.0);
  std::mt19937_64 rng(23);
  const GridFunction u = random_interior(grid, rng);
  GridFunction w = u;
  for (double& v : w.values) v *= 2.0;
  CHECK(fgl::modular_Phi_sG(fam, w) ==
        Catch::Approx(32.0 * fgl::modular_Phi_sG(fam, u)).epsilon(1e-12));
  CHECK(fgl::modular_Phi_G(fam, w) ==
        Catch::Approx(32.0 * fgl::modular_Phi_G(fam, u)).epsilon(1e-12));
}

TEST_CASE("luxemburg seminorm has a closed form for pure powers", "[modulars][luxemburg]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(24);
  for (double p : {2.0, 4.0, 8.0}) {
    const OrliczFamily fam = OrliczFamily::power_law(p);
    const GridFunction u = random_interior(grid, rng);
    const double mod = fgl::modular_Phi_sG(fam, u);
    const auto res = fgl::luxemburg_seminorm_sG(fam, u);
    CHECK(res.value == Catch::Approx(std::pow(mod, 1.0 / p)).epsilon(1e-8));
    CHECK(res.modular_at_value == Catch::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("luxemburg values are positively homogeneous", "[modulars][luxemburg]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(25);
  for (const OrliczFamily& fam :
       {OrliczFamily::sum_of_powers(2.0, 4.0), OrliczFamily::power_log(5.0)}) {
    const GridFunction u = random_interior(grid, rng);
    GridFunction w = u;
    for (double& v : w.values) v *= 3.5;
    CHECK(fgl::luxemburg_seminorm_sG(fam, w).value ==
          Catch::Approx(3.5 * fgl::luxemburg_seminorm_sG(fam, u).value).epsilon(1e-8));
    CHECK(fgl::luxemburg_norm_G(fam, w).value ==
          Catch::Approx(3.5 * fgl::luxemburg_norm_G(fam, u).value).epsilon(1e-8));
  }
}

TEST_CASE("luxemburg of zero is zero", "[modulars][luxemburg]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  const OrliczFamily fam = OrliczFamily::power_law(4.0);
  const GridFunction z = fgl::zero_function(grid);
  CHECK(fgl::luxemburg_norm_G(fam, z).value == 0.0);
  CHECK(fgl::luxemburg_seminorm_sG(fam, z).value == 0.0);
  CHECK(fgl::luxemburg_norm_G_star(fam, z).value == 0.0);
}

TEST_CASE("unit modular at the luxemburg value", "[modulars][luxemburg]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(26);
  for (const OrliczFamily& fam :
       {OrliczFamily::power_law(6.0), OrliczFamily::sum_of_powers(3.0, 7.0),
        OrliczFamily::power_log(4.0)}) {
    const GridFunction u = random_interior(grid, rng);
    const auto semi = fgl::luxemburg_seminorm_sG(fam, u);
    CHECK(semi.modular_at_value == Catch::Approx(1.0).epsilon(1e-8));
    const auto norm = fgl::luxemburg_norm_G(fam, u);
    CHECK(norm.modular_at_value == Catch::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("plain seminorm matches its direct definition", "[modulars][seminorm]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(27);
  const GridFunction u = random_interior(grid, rng);
  const double t = 0.4, q = 3.0;
  double acc = 0.0;
  for (int i : grid.interior)
    for (int j : grid.interior) {
      if (i == j) continue;
      const double d = grid.dist(i, j);
      acc += std::pow(std::fabs(u.values[i] - u.values[j]), q) * std::pow(d, -t * q) *
             grid.cell(i) * grid.cell(j) / d;
    }
  CHECK(fgl::seminorm_tq(u, t, q) == Catch::Approx(std::pow(acc, 1.0 / q)).epsilon(1e-12));
  CHECK_THROWS_AS(fgl::seminorm_tq(u, 0.6, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(fgl::seminorm_tq(u, 0.4, 0.5), std::invalid_argument);
}

TEST_CASE("embedding constant formula and finiteness", "[modulars][seminorm]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 201, 0.5, 4.0);
  const double q = 16.0, t = 0.45;
  const double want =
      std::pow(2.0 * 2.0 / (q * (0.5 - t)) + 1.0, 1.0 / q) * std::pow(2.0, 0.5 - t);
  CHECK(fgl::embedding_constant(grid, q, t) == Catch::Approx(want).epsilon(1e-13));
  // large q pushes the constant toward diam^{s-t}
  CHECK(fgl::embedding_constant(grid, 4096.0, t) ==
        Catch::Approx(std::pow(2.0, 0.05)).epsilon(0.01));
}

TEST_CASE("lower order seminorms are controlled along the scale", "[modulars][seminorm]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 4; ++trial) {
    const GridFunction u = random_interior(grid, rng);
    for (double q : {2.0, 4.0, 8.0, 16.0}) {
      const OrliczFamily fam = OrliczFamily::power_law(q);
      const double norm_sG = fgl::luxemburg_seminorm_sG(fam, u).value;
      for (double t : {0.4, 0.45}) {
        const double lhs = fgl::seminorm_tq(u, t, q);
        const double rhs = fgl::embedding_constant(grid, q, t) *
                           std::max(1.0, std::pow(q, 1.0 / q)) * norm_sG;
        INFO("q=" << q << " t=" << t);
        CHECK(lhs <= rhs * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("poincare inequality holds on random data", "[modulars][poincare]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> amp(0.1, 4.0);
  for (const OrliczFamily& fam :
       {OrliczFamily::power_law(4.0), OrliczFamily::sum_of_powers(2.0, 4.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction u = random_interior(grid, rng, amp(rng));
      const auto res = fgl::poincare_check(fam, u);
      INFO("lhs " << res.lhs << " rhs " << res.rhs);
      CHECK(res.pass);
    }
  }
}

TEST_CASE("orlicz holder inequality holds on random data", "[modulars][holder]") {
  const Grid grid = build_grid(parse_domain("interval:-1,1"), 101, 0.5, 4.0);
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> amp(0.1, 4.0);
  for (const OrliczFamily& fam :
       {OrliczFamily::power_law(4.0), OrliczFamily::power_log(3.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction u = random_interior(grid, rng, amp(rng));
      const GridFunction v = random_interior(grid, rng, amp(rng));
      const auto res = fgl::holder_inequality_check(fam, u, v);
      INFO("lhs " << res.lhs << " rhs " << res.rhs);
      CHECK(res.pass);
    }
  }
}
