#pragma once

#include <span>
#include <vector>

#include "switchgrid/grid.hpp"
#include "switchgrid/model.hpp"

namespace sg {

/// Explicit upwind Markov-chain approximation of the diffusion generator on
/// the grid. One kernel backs the solvers, the oracle and the checks, so
/// their agreement is exact rather than approximate.
///
/// Interior stencil per axis j:
///   p(x -> x + e_j dx_j) = dt*( a_jj/(2 dx_j^2) + max(b_j,0)/dx_j )
///   p(x -> x - e_j dx_j) = dt*( a_jj/(2 dx_j^2) + max(-b_j,0)/dx_j )
///   p(x -> x) = 1 - sum of the above
/// which requires dt * sum_j ( a_jj/dx_j^2 + |b_j|/dx_j ) <= 1 at every
/// node (the CFL condition). On a face the second difference along the
/// offending axis is zero (linear extrapolation) and outward drift mass
/// stays at the face, matching the path clamping in the simulator.
///
/// Cross-derivative terms are out of scope: build rejects models whose
/// sigma sigma* is not diagonal on the grid.
class ChainApprox {
 public:
  ChainApprox() = default;

  static ChainApprox build(const SwitchingModel& model, const Grid& grid, double t);

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }
  /// Per-step discount 1/(1 + r dt) for the infinite horizon; 1 otherwise.
  double discount() const { return beta_; }

  /// E[field(X_next) | X = node] for every node; a row-stochastic
  /// matrix-vector product (no discounting).
  void expected_next(std::span<const double> field, std::span<double> out) const;
  std::vector<double> expected_next(std::span<const double> field) const;

  double prob_up(int axis, long node) const {
    return up_[static_cast<std::size_t>(axis) * static_cast<std::size_t>(grid_.num_nodes()) +
               static_cast<std::size_t>(node)];
  }
  double prob_down(int axis, long node) const {
    return dn_[static_cast<std::size_t>(axis) * static_cast<std::size_t>(grid_.num_nodes()) +
               static_cast<std::size_t>(node)];
  }
  double prob_stay(long node) const { return stay_[static_cast<std::size_t>(node)]; }

 private:
  Grid grid_;
  double dt_ = 0.0;
  double beta_ = 1.0;
  std::vector<double> up_, dn_;    // [axis][node]
  std::vector<long> up_at_, dn_at_;  // neighbor indices, -1 on faces
  std::vector<double> stay_;
};

}  // namespace sg
