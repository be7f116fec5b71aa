#pragma once

#include <span>
#include <vector>

namespace sg {

/// Uniform rectangular grid over the truncated state box plus the time
/// discretization: N steps of size T/N for a finite horizon, or a chosen
/// step dt for the infinite horizon. Immutable.
class Grid {
 public:
  Grid() = default;

  static Grid finite(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes,
                     int time_steps, double terminal_time);
  static Grid infinite(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes,
                       double dt);

  int dim() const { return static_cast<int>(nodes_.size()); }
  long num_nodes() const { return total_nodes_; }
  int nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  double lo(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  double hi(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
  double dx(int axis) const { return dx_[static_cast<std::size_t>(axis)]; }
  long stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  bool is_finite_horizon() const { return time_steps_ > 0; }
  int time_steps() const { return time_steps_; }
  double dt() const { return dt_; }
  double time_at(int level) const { return dt_ * level; }

  /// Multi-index component of a flat node index along `axis`.
  int coord(long node, int axis) const {
    return static_cast<int>((node / stride_[static_cast<std::size_t>(axis)]) %
                            nodes_[static_cast<std::size_t>(axis)]);
  }

  void node_point(long node, std::span<double> out) const;
  std::vector<double> node_point(long node) const;

  /// Nearest grid node to x; coordinates outside the box clamp to the
  /// nearest face and set *clamped.
  long nearest_node(std::span<const double> x, bool* clamped = nullptr) const;

  bool same_box(const Grid& other) const;

 private:
  std::vector<double> lo_, hi_, dx_;
  std::vector<int> nodes_;
  std::vector<long> stride_;
  long total_nodes_ = 0;
  int time_steps_ = 0;  // 0 marks infinite horizon
  double dt_ = 0.0;

  void init_axes(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes);
};

}  // namespace sg
