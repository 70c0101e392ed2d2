#pragma once

// Uniform cell-centered lattices for an interval, axis-aligned box, or disk,
// together with a collar of exterior cells out to a truncation radius R.
// Functions on a grid are zero-extended: exterior nodes always hold 0. All
// nodes (interior and collar) live on one lattice, so pair distances reduce
// to integer offsets and the d^{-s}, d^{-(N+s)} powers are read from tables
// built once per grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz.hpp"

namespace fgl {

struct Domain {
  enum class Kind { Interval, Box, Disk };
  Kind kind = Kind::Interval;
  double x_lo = -1.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 0.0;
  double radius = 0.0;

  int dimension() const { return kind == Kind::Interval ? 1 : 2; }

  double diameter() const {
    switch (kind) {
      case Kind::Interval: return x_hi - x_lo;
      case Kind::Box: return std::hypot(x_hi - x_lo, y_hi - y_lo);
      case Kind::Disk: return 2.0 * radius;
    }
    return 0.0;
  }

  double measure() const {
    switch (kind) {
      case Kind::Interval: return x_hi - x_lo;
      case Kind::Box: return (x_hi - x_lo) * (y_hi - y_lo);
      case Kind::Disk: return pi * radius * radius;
    }
    return 0.0;
  }

  bool contains(double x, double y) const {
    switch (kind) {
      case Kind::Interval: return x > x_lo && x < x_hi;
      case Kind::Box: return x > x_lo && x < x_hi && y > y_lo && y < y_hi;
      case Kind::Disk: return x * x + y * y < radius * radius;
    }
    return false;
  }

  // distance to the boundary for points inside; 0 on and outside
  double boundary_distance(double x, double y) const {
    switch (kind) {
      case Kind::Interval:
        return std::max(0.0, std::min(x - x_lo, x_hi - x));
      case Kind::Box:
        return std::max(0.0, std::min(std::min(x - x_lo, x_hi - x),
                                      std::min(y - y_lo, y_hi - y)));
      case Kind::Disk:
        return std::max(0.0, radius - std::hypot(x, y));
    }
    return 0.0;
  }

  // distance from an arbitrary point to the closed set Omega
  double distance_to(double x, double y) const {
    switch (kind) {
      case Kind::Interval:
        return std::max({0.0, x_lo - x, x - x_hi});
      case Kind::Box: {
        const double dx = std::max({0.0, x_lo - x, x - x_hi});
        const double dy = std::max({0.0, y_lo - y, y - y_hi});
        return std::hypot(dx, dy);
      }
      case Kind::Disk:
        return std::max(0.0, std::hypot(x, y) - radius);
    }
    return 0.0;
  }
};

// "interval:-1,1", "box:-1,1,-1,1", "disk:r=1"
inline Domain parse_domain(const std::string& spec) {
  auto fail = [&]() -> Domain {
    throw std::invalid_argument("parse_domain: cannot parse '" + spec + "'");
  };
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return fail();
  const std::string head = spec.substr(0, colon);
  std::string args = spec.substr(colon + 1);
  // the disk form carries an "r=" tag, so read it before the numeric scan
  if (head == "disk") {
    if (args.rfind("r=", 0) != 0) return fail();
    Domain d;
    d.kind = Domain::Kind::Disk;
    size_t used = 0;
    try {
      d.radius = std::stod(args.substr(2), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != args.size() - 2) return fail();
    if (!(d.radius > 0.0)) throw std::invalid_argument("parse_domain: empty disk");
    return d;
  }
  std::vector<double> nums;
  size_t pos = 0;
  while (pos < args.size()) {
    size_t used = 0;
    try {
      nums.push_back(std::stod(args.substr(pos), &used));
    } catch (const std::exception&) {
      return fail();
    }
    pos += used;
    if (pos < args.size()) {
      if (args[pos] != ',') return fail();
      ++pos;
    }
  }
  Domain d;
  if (head == "interval" && nums.size() == 2) {
    d.kind = Domain::Kind::Interval;
    d.x_lo = nums[0];
    d.x_hi = nums[1];
    if (!(d.x_hi > d.x_lo)) throw std::invalid_argument("parse_domain: empty interval");
    return d;
  }
  if (head == "box" && nums.size() == 4) {
    d.kind = Domain::Kind::Box;
    d.x_lo = nums[0];
    d.x_hi = nums[1];
    d.y_lo = nums[2];
    d.y_hi = nums[3];
    if (!(d.x_hi > d.x_lo) || !(d.y_hi > d.y_lo))
      throw std::invalid_argument("parse_domain: empty box");
    return d;
  }
  return fail();
}

class Grid {
 public:
  Domain omega;
  int dimension = 1;
  double s = 0.5;
  double R = 0.0;

  std::vector<std::array<double, 2>> nodes;
  std::vector<std::uint8_t> interior_mask;
  std::vector<double> cell_measures;
  std::vector<int> interior;                       // node indices inside Omega
  std::vector<std::array<double, 2>> boundary_samples;

  // 1D: exact per-node distances to the two coverage edges; the analytic tail
  // for each direction starts exactly where the lattice ends.
  std::vector<double> tail_lo, tail_hi;
  // 2D: pairs beyond distance R are dropped from sums (both endpoints are then
  // zero) and a single radial tail from R covers everything outside.
  double pair_cutoff = 0.0;  // 0 means no cutoff (1D)

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_interior() const { return static_cast<int>(interior.size()); }
  bool is_interior(int i) const { return interior_mask[i] != 0; }
  double cell(int i) const { return cell_measures[i]; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  // largest spacing over the active dimensions (hy_ is a dummy 1 in 1D)
  double max_spacing() const { return dimension == 1 ? hx_ : std::max(hx_, hy_); }
  double h_min() const { return dimension == 1 ? hx_ : std::min(hx_, hy_); }
  double mean_cell() const { return dimension == 1 ? hx_ : hx_ * hy_; }

  double dist(int i, int j) const {
    if (dimension == 1) return std::abs(ix_[i] - ix_[j]) * hx_;
    return dist_tab_[offset(i, j)];
  }
  // d^{-s}
  double inv_dist_s(int i, int j) const {
    return dimension == 1 ? pow_s_tab_[std::abs(ix_[i] - ix_[j])]
                          : pow_s_tab_[offset(i, j)];
  }
  // d^{-(N+s)}
  double inv_dist_Ns(int i, int j) const {
    return dimension == 1 ? pow_Ns_tab_[std::abs(ix_[i] - ix_[j])]
                          : pow_Ns_tab_[offset(i, j)];
  }
  // d^{-N}
  double inv_dist_N(int i, int j) const {
    return dimension == 1 ? pow_N_tab_[std::abs(ix_[i] - ix_[j])]
                          : pow_N_tab_[offset(i, j)];
  }

  bool pair_included(int i, int j) const {
    return pair_cutoff == 0.0 || dist(i, j) <= pair_cutoff;
  }

  // radius where the analytic tail starts for interior node i (2D); 1D uses
  // the directional tail_lo/tail_hi instead
  double tail_radius(int) const { return R; }

  friend Grid build_grid(const Domain& omega, int n_interior, double s, double R);

 private:
  double hx_ = 0.0, hy_ = 0.0;
  std::vector<int> ix_, iy_;
  std::vector<double> pow_s_tab_, pow_Ns_tab_, pow_N_tab_, dist_tab_;
  int tab_stride_ = 0;

  size_t offset(int i, int j) const {
    return static_cast<size_t>(std::abs(ix_[i] - ix_[j])) * tab_stride_ +
           std::abs(iy_[i] - iy_[j]);
  }
};

inline Grid build_grid(const Domain& omega, int n_interior, double s, double R) {
  if (n_interior < 8) throw std::invalid_argument("build_grid: need at least 8 interior nodes");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("build_grid: need 0 < s < 1");
  if (!(R >= 2.0 * omega.diameter() * (1.0 - 1e-12)))
    throw std::invalid_argument("build_grid: need R >= 2 diam(Omega)");
  if (!(omega.measure() > 0.0)) throw std::invalid_argument("build_grid: degenerate domain");

  Grid grid;
  grid.omega = omega;
  grid.dimension = omega.dimension();
  grid.s = s;
  grid.R = R;

  if (grid.dimension == 1) {
    const double lo = omega.x_lo, hi = omega.x_hi;
    const double h = (hi - lo) / n_interior;
    const int ncol = static_cast<int>(std::ceil(R / h - 1e-12));
    const int total = n_interior + 2 * ncol;
    grid.hx_ = h;
    grid.hy_ = 1.0;
    grid.nodes.resize(total);
    grid.ix_.resize(total);
    grid.iy_.assign(total, 0);
    grid.interior_mask.assign(total, 0);
    grid.cell_measures.assign(total, h);
    for (int i = 0; i < total; ++i) {
      grid.nodes[i] = {lo + (i - ncol + 0.5) * h, 0.0};
      grid.ix_[i] = i;
      if (i >= ncol && i < ncol + n_interior) {
        grid.interior_mask[i] = 1;
        grid.interior.push_back(i);
      }
    }
    grid.boundary_samples = {{lo, 0.0}, {hi, 0.0}};
    const double left_edge = lo - ncol * h, right_edge = hi + ncol * h;
    grid.tail_lo.assign(total, 0.0);
    grid.tail_hi.assign(total, 0.0);
    for (int i : grid.interior) {
      grid.tail_lo[i] = grid.nodes[i][0] - left_edge;
      grid.tail_hi[i] = right_edge - grid.nodes[i][0];
    }
    grid.pow_s_tab_.resize(total);
    grid.pow_Ns_tab_.resize(total);
    grid.pow_N_tab_.resize(total);
    grid.pow_s_tab_[0] = grid.pow_Ns_tab_[0] = grid.pow_N_tab_[0] = 0.0;  // diagonal, never read
    for (int k = 1; k < total; ++k) {
      const double d = k * h;
      grid.pow_s_tab_[k] = std::pow(d, -s);
      grid.pow_Ns_tab_[k] = std::pow(d, -(1.0 + s));
      grid.pow_N_tab_[k] = 1.0 / d;
    }
    return grid;
  }

  // 2D: n_interior counts cells along x; y resolution keeps cells near square
  double lx_lo, lx_hi, ly_lo, ly_hi;
  if (omega.kind == Domain::Kind::Disk) {
    lx_lo = ly_lo = -omega.radius;
    lx_hi = ly_hi = omega.radius;
  } else {
    lx_lo = omega.x_lo;
    lx_hi = omega.x_hi;
    ly_lo = omega.y_lo;
    ly_hi = omega.y_hi;
  }
  const int nx = n_interior;
  const double hx = (lx_hi - lx_lo) / nx;
  const int ny = std::max(1, static_cast<int>(std::lround((ly_hi - ly_lo) / hx)));
  const double hy = (ly_hi - ly_lo) / ny;
  const int ncx = static_cast<int>(std::ceil(R / hx - 1e-12));
  const int ncy = static_cast<int>(std::ceil(R / hy - 1e-12));
  grid.hx_ = hx;
  grid.hy_ = hy;
  grid.pair_cutoff = R;

  const int mx = nx + 2 * ncx, my = ny + 2 * ncy;
  for (int jx = 0; jx < mx; ++jx) {
    const double x = lx_lo + (jx - ncx + 0.5) * hx;
    for (int jy = 0; jy < my; ++jy) {
      const double y = ly_lo + (jy - ncy + 0.5) * hy;
      if (omega.distance_to(x, y) > R) continue;
      const int id = grid.n_nodes();
      grid.nodes.push_back({x, y});
      grid.ix_.push_back(jx);
      grid.iy_.push_back(jy);
      const bool in = omega.contains(x, y);
      grid.interior_mask.push_back(in ? 1 : 0);
      grid.cell_measures.push_back(hx * hy);
      if (in) grid.interior.push_back(id);
    }
  }
  if (grid.interior.empty()) throw std::invalid_argument("build_grid: no interior nodes");

  if (omega.kind == Domain::Kind::Box) {
    for (int k = 0; k <= nx; ++k) {
      const double x = omega.x_lo + k * hx;
      grid.boundary_samples.push_back({x, omega.y_lo});
      grid.boundary_samples.push_back({x, omega.y_hi});
    }
    for (int k = 1; k < ny; ++k) {
      const double y = omega.y_lo + k * hy;
      grid.boundary_samples.push_back({omega.x_lo, y});
      grid.boundary_samples.push_back({omega.x_hi, y});
    }
  } else {
    const int m = std::max<int>(64, static_cast<int>(std::ceil(2.0 * pi * omega.radius / grid.h_min())));
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * pi * k / m;
      grid.boundary_samples.push_back({omega.radius * std::cos(th), omega.radius * std::sin(th)});
    }
  }

  grid.tab_stride_ = my;
  grid.pow_s_tab_.assign(static_cast<size_t>(mx) * my, 0.0);
  grid.pow_Ns_tab_.assign(static_cast<size_t>(mx) * my, 0.0);
  grid.pow_N_tab_.assign(static_cast<size_t>(mx) * my, 0.0);
  grid.dist_tab_.assign(static_cast<size_t>(mx) * my, 0.0);
  for (int kx = 0; kx < mx; ++kx)
    for (int ky = 0; ky < my; ++ky) {
      if (kx == 0 && ky == 0) continue;
      const double d = std::hypot(kx * hx, ky * hy);
      const size_t at = static_cast<size_t>(kx) * my + ky;
      grid.dist_tab_[at] = d;
      grid.pow_s_tab_[at] = std::pow(d, -s);
      grid.pow_Ns_tab_[at] = std::pow(d, -(2.0 + s));
      grid.pow_N_tab_[at] = 1.0 / (d * d);
    }
  return grid;
}

struct GridFunction {
  const Grid* grid = nullptr;
  std::vector<double> values;
};

inline GridFunction zero_function(const Grid& grid) {
  return {&grid, std::vector<double>(grid.n_nodes(), 0.0)};
}

inline GridFunction make_zero_extended(const Grid& grid, const std::vector<double>& interior_values) {
  if (interior_values.size() != static_cast<size_t>(grid.n_interior()))
    throw std::invalid_argument("make_zero_extended: interior size mismatch");
  GridFunction u = zero_function(grid);
  for (int k = 0; k < grid.n_interior(); ++k) u.values[grid.interior[k]] = interior_values[k];
  return u;
}

inline std::vector<double> interior_values(const GridFunction& u) {
  std::vector<double> out(u.grid->n_interior());
  for (int k = 0; k < u.grid->n_interior(); ++k) out[k] = u.values[u.grid->interior[k]];
  return out;
}

inline bool is_zero_extended(const GridFunction& u) {
  for (int i = 0; i < u.grid->n_nodes(); ++i)
    if (!u.grid->is_interior(i) && u.values[i] != 0.0) return false;
  return true;
}

inline double holder_quotient(const GridFunction& u, int i, int j) {
  if (i == j) throw std::invalid_argument("holder_quotient: diagonal pair");
  return (u.values[i] - u.values[j]) * u.grid->inv_dist_s(i, j);
}

// quotient from node i to an arbitrary point carrying a known value
inline double holder_quotient_to_point(const GridFunction& u, int i,
                                       const std::array<double, 2>& pt, double value) {
  const auto& x = u.grid->nodes[i];
  const double d = u.grid->dimension == 1 ? std::fabs(x[0] - pt[0])
                                          : std::hypot(x[0] - pt[0], x[1] - pt[1]);
  if (d == 0.0) throw std::invalid_argument("holder_quotient_to_point: zero distance");
  return (u.values[i] - value) / std::pow(d, u.grid->s);
}

inline double mu_weight(const Grid& grid, int i, int j) {
  if (i == j) throw std::invalid_argument("mu_weight: diagonal pair");
  const double d = grid.dist(i, j);
  const double dn = grid.dimension == 1 ? d : d * d;
  return grid.cell(i) * grid.cell(j) / dn;
}

inline GridFunction dist_oracle(const Grid& grid) {
  GridFunction u = zero_function(grid);
  for (int i : grid.interior) {
    const auto& x = grid.nodes[i];
    u.values[i] = std::pow(grid.omega.boundary_distance(x[0], x[1]), grid.s);
  }
  return u;
}

// Discrete Holder-s constant: max |u(x_i)-u(x_j)| / d^s over interior x all
// node pairs, optionally also against the exact boundary sample points (where
// the zero extension pins the value to 0).
inline double holder_constant(const GridFunction& u, bool include_boundary_samples = true) {
  const Grid& grid = *u.grid;
  double worst = 0.0;
  for (int i : grid.interior) {
    for (int j = 0; j < grid.n_nodes(); ++j) {
      if (j == i) continue;
      worst = std::max(worst, std::fabs(holder_quotient(u, i, j)));
    }
    if (include_boundary_samples)
      for (const auto& b : grid.boundary_samples)
        worst = std::max(worst, std::fabs(holder_quotient_to_point(u, i, b, 0.0)));
  }
  return worst;
}

// Nodes where dist(.,dOmega) is not differentiable (distance ties between
// boundary pieces), identified up to half a cell.
inline std::vector<int> ridge_nodes(const Grid& grid) {
  std::vector<int> out;
  const double tol = 0.5 * grid.h_min();
  for (int i : grid.interior) {
    const auto& p = grid.nodes[i];
    bool ridge = false;
    switch (grid.omega.kind) {
      case Domain::Kind::Interval:
        ridge = std::fabs((p[0] - grid.omega.x_lo) - (grid.omega.x_hi - p[0])) <= tol;
        break;
      case Domain::Kind::Box: {
        double d[4] = {p[0] - grid.omega.x_lo, grid.omega.x_hi - p[0],
                       p[1] - grid.omega.y_lo, grid.omega.y_hi - p[1]};
        std::sort(d, d + 4);
        ridge = (d[1] - d[0]) <= tol;
        break;
      }
      case Domain::Kind::Disk:
        // the kink sits at the center; take the nodes whose cell contains it,
        // which is one node on odd lattices and four on even ones
        ridge = std::fabs(p[0]) <= 0.5 * grid.hx() + 1e-12 * grid.h_min() &&
                std::fabs(p[1]) <= 0.5 * grid.hy() + 1e-12 * grid.h_min();
        break;
    }
    if (ridge) out.push_back(i);
  }
  return out;
}

}  // namespace fgl
