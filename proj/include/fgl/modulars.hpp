#pragma once

// Modulars, Luxemburg norms by log-bisection, the (t,q)-seminorm restricted
// to Omega x Omega, and the explicit embedding / Poincare constants.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "frac_operator.hpp"
#include "grid.hpp"
#include "orlicz.hpp"

namespace fgl {

inline double modular_Phi_G(const OrliczFamily& fam, const GridFunction& u) {
  const Grid& grid = *u.grid;
  double acc = 0.0;
  for (int i : grid.interior) acc += fam.G(u.values[i]) * grid.cell(i);
  return acc;
}

// Scaled variant used by the Luxemburg bisection: modular of u / lambda.
inline double modular_Phi_G_scaled(const OrliczFamily& fam, const GridFunction& u, double lambda) {
  const Grid& grid = *u.grid;
  double acc = 0.0;
  for (int i : grid.interior) acc += fam.G(u.values[i] / lambda) * grid.cell(i);
  return acc;
}

inline double modular_Phi_sG_scaled(const OrliczFamily& fam, const GridFunction& u, double lambda) {
  const Grid& grid = *u.grid;
  double acc = 0.0;
  for (int i : grid.interior) {
    const double u_i = u.values[i], c_i = grid.cell(i);
    double row = 0.0;
    for (int j = 0; j < grid.n_nodes(); ++j) {
      if (j == i || !grid.pair_included(i, j)) continue;
      const double d = (u_i - u.values[j]) * grid.inv_dist_s(i, j) / lambda;
      const double fac = grid.is_interior(j) ? 1.0 : 2.0;
      row += fac * fam.G(d) * grid.cell(j) * grid.inv_dist_N(i, j);
    }
    acc += c_i * row + c_i * modular_tail(fam, grid, i, u_i / lambda);
  }
  return acc;
}

inline double modular_Phi_sG(const OrliczFamily& fam, const GridFunction& u) {
  return modular_Phi_sG_scaled(fam, u, 1.0);
}

struct LuxemburgResult {
  double value = 0.0;
  double modular_at_value = 0.0;
  int iterations = 0;
};

// inf { lambda > 0 : phi(lambda) <= 1 } for a map that decreases strictly in
// lambda; bracket grows geometrically from 1, then log-bisection.
inline LuxemburgResult luxemburg_solve(const std::function<double(double)>& phi_scaled,
                                       double rel_tol = 1e-10) {
  LuxemburgResult res;
  double lo = 1.0, hi = 1.0;
  double v = phi_scaled(1.0);
  int it = 0;
  if (v > 1.0) {
    while (v > 1.0) {
      lo = hi;
      hi *= 4.0;
      v = phi_scaled(hi);
      if (++it > 600) throw numeric_error("luxemburg: bracket expansion failed upward");
    }
  } else {
    while (v <= 1.0) {
      hi = lo;
      lo *= 0.25;
      v = phi_scaled(lo);
      if (++it > 600) throw numeric_error("luxemburg: bracket expansion failed downward");
    }
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = std::sqrt(lo * hi);
    (phi_scaled(mid) > 1.0 ? lo : hi) = mid;
    if (++it > 900) break;
  }
  res.value = std::sqrt(lo * hi);
  res.modular_at_value = phi_scaled(res.value);
  res.iterations = it;
  return res;
}

inline LuxemburgResult luxemburg_norm_G(const OrliczFamily& fam, const GridFunction& u,
                                        double rel_tol = 1e-10) {
  if (modular_Phi_G(fam, u) == 0.0) return {};
  return luxemburg_solve([&](double lam) { return modular_Phi_G_scaled(fam, u, lam); }, rel_tol);
}

inline LuxemburgResult luxemburg_seminorm_sG(const OrliczFamily& fam, const GridFunction& u,
                                             double rel_tol = 1e-10) {
  bool all_zero = true;
  for (double v : u.values) all_zero &= (v == 0.0);
  if (all_zero) return {};
  return luxemburg_solve([&](double lam) { return modular_Phi_sG_scaled(fam, u, lam); }, rel_tol);
}

inline LuxemburgResult luxemburg_norm_G_star(const OrliczFamily& fam, const GridFunction& u,
                                             double rel_tol = 1e-10) {
  const Grid& grid = *u.grid;
  bool all_zero = true;
  for (int i : grid.interior) all_zero &= (u.values[i] == 0.0);
  if (all_zero) return {};
  return luxemburg_solve(
      [&](double lam) {
        double acc = 0.0;
        for (int i : grid.interior)
          acc += fam.G_star(std::fabs(u.values[i]) / lam) * grid.cell(i);
        return acc;
      },
      rel_tol);
}

// [u]_{t,q} over interior pairs only
inline double seminorm_tq(const GridFunction& u, double t, double q) {
  const Grid& grid = *u.grid;
  if (!(t > 0.0 && t < grid.s)) throw std::invalid_argument("seminorm_tq: need 0 < t < s");
  if (!(q >= 1.0)) throw std::invalid_argument("seminorm_tq: need q >= 1");
  double acc = 0.0;
  const int n = grid.n_interior();
  for (int a = 0; a < n; ++a) {
    const int i = grid.interior[a];
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const int j = grid.interior[b];
      const double d = grid.dist(i, j);
      acc += std::pow(std::fabs(u.values[i] - u.values[j]), q) * std::pow(d, -t * q) *
             mu_weight(grid, i, j);
    }
  }
  return std::pow(acc, 1.0 / q);
}

// (|Omega| N omega_N / (q (s-t)) + 1)^{1/q} diam^{s-t}
inline double embedding_constant(const Grid& grid, double q, double t) {
  if (!(t > 0.0 && t < grid.s)) throw std::invalid_argument("embedding_constant: need 0 < t < s");
  if (!(q >= 1.0)) throw std::invalid_argument("embedding_constant: need q >= 1");
  const int N = grid.dimension;
  const double vol = grid.omega.measure();
  const double d = grid.omega.diameter();
  return std::pow(vol * N * unit_ball_measure(N) / (q * (grid.s - t)) + 1.0, 1.0 / q) *
         std::pow(d, grid.s - t);
}

struct PoincareResult {
  double lhs = 0.0, rhs = 0.0;
  bool pass = true;
};

// ||u||_G <= (s p+ / (N omega_N))^{1/p-} diam^s [u]_{s,G}
inline PoincareResult poincare_check(const OrliczFamily& fam, const GridFunction& u) {
  const Grid& grid = *u.grid;
  PoincareResult r;
  r.lhs = luxemburg_norm_G(fam, u).value;
  const double semi = luxemburg_seminorm_sG(fam, u).value;
  const double C = std::pow(grid.s * fam.p_plus() / (grid.dimension * unit_ball_measure(grid.dimension)),
                            1.0 / fam.p_minus());
  r.rhs = C * std::pow(grid.omega.diameter(), grid.s) * semi;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-9) + 1e-300;
  return r;
}

struct HolderIneqResult {
  double lhs = 0.0, rhs = 0.0;
  bool pass = true;
};

// int |u v| <= 2 ||u||_G ||v||_{G*}
inline HolderIneqResult holder_inequality_check(const OrliczFamily& fam, const GridFunction& u,
                                                const GridFunction& v) {
  const Grid& grid = *u.grid;
  HolderIneqResult r;
  for (int i : grid.interior) r.lhs += std::fabs(u.values[i] * v.values[i]) * grid.cell(i);
  r.rhs = 2.0 * luxemburg_norm_G(fam, u).value * luxemburg_norm_G_star(fam, v).value;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-9) + 1e-300;
  return r;
}

}  // namespace fgl
