#include "switchgrid/grid.hpp"

#include <cmath>

#include "switchgrid/error.hpp"
#include "detail/text.hpp"

namespace sg {

void Grid::init_axes(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes) {
  if (lo.size() != hi.size() || lo.size() != nodes.size() || lo.empty())
    fail(ErrorCode::kInvalidArgument, "grid: lo/hi/nodes must have the same nonzero length");
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  nodes_ = std::move(nodes);
  dx_.resize(lo_.size());
  stride_.resize(lo_.size());
  total_nodes_ = 1;
  for (std::size_t a = 0; a < lo_.size(); ++a) {
    if (!(lo_[a] < hi_[a]))
      fail(ErrorCode::kInvalidArgument, detail::cat("grid axis ", a + 1, ": lo must be < hi"));
    if (nodes_[a] < 3)
      fail(ErrorCode::kInvalidArgument,
           detail::cat("grid axis ", a + 1, ": need at least 3 nodes, got ", nodes_[a]));
    dx_[a] = (hi_[a] - lo_[a]) / (nodes_[a] - 1);
    stride_[a] = total_nodes_;
    total_nodes_ *= nodes_[a];
  }
}

Grid Grid::finite(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes,
                  int time_steps, double terminal_time) {
  Grid g;
  g.init_axes(std::move(lo), std::move(hi), std::move(nodes));
  if (time_steps < 1) fail(ErrorCode::kInvalidArgument, "grid: time_steps must be >= 1");
  if (!(terminal_time > 0)) fail(ErrorCode::kInvalidArgument, "grid: terminal time must be > 0");
  g.time_steps_ = time_steps;
  g.dt_ = terminal_time / time_steps;
  return g;
}

Grid Grid::infinite(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes,
                    double dt) {
  Grid g;
  g.init_axes(std::move(lo), std::move(hi), std::move(nodes));
  if (!(dt > 0)) fail(ErrorCode::kInvalidArgument, "grid: dt must be > 0");
  g.time_steps_ = 0;
  g.dt_ = dt;
  return g;
}

void Grid::node_point(long node, std::span<double> out) const {
  for (int a = 0; a < dim(); ++a)
    out[static_cast<std::size_t>(a)] = lo_[static_cast<std::size_t>(a)] +
                                       coord(node, a) * dx_[static_cast<std::size_t>(a)];
}

std::vector<double> Grid::node_point(long node) const {
  std::vector<double> p(static_cast<std::size_t>(dim()));
  node_point(node, p);
  return p;
}

long Grid::nearest_node(std::span<const double> x, bool* clamped) const {
  if (static_cast<int>(x.size()) != dim())
    fail(ErrorCode::kInvalidArgument, "nearest_node: point dimension mismatch");
  bool clamp = false;
  long node = 0;
  for (int a = 0; a < dim(); ++a) {
    double v = x[static_cast<std::size_t>(a)];
    if (v < lo_[static_cast<std::size_t>(a)] || v > hi_[static_cast<std::size_t>(a)]) clamp = true;
    double u = (v - lo_[static_cast<std::size_t>(a)]) / dx_[static_cast<std::size_t>(a)];
    long i = std::lround(u);
    if (i < 0) i = 0;
    if (i >= nodes_[static_cast<std::size_t>(a)]) i = nodes_[static_cast<std::size_t>(a)] - 1;
    node += i * stride_[static_cast<std::size_t>(a)];
  }
  if (clamped != nullptr) *clamped = clamp;
  return node;
}

bool Grid::same_box(const Grid& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && nodes_ == other.nodes_;
}

}  // namespace sg
