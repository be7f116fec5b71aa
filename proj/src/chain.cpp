#include "switchgrid/chain.hpp"

#include <cmath>
#include <limits>

#include "switchgrid/error.hpp"
#include "detail/text.hpp"

namespace sg {

namespace {

std::string node_text(const Grid& grid, long node) {
  std::string s = "(";
  auto p = grid.node_point(node);
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (a) s += ", ";
    s += detail::double_to_string(p[a]);
  }
  s += ")";
  return s;
}

}  // namespace

ChainApprox ChainApprox::build(const SwitchingModel& model, const Grid& grid, double t) {
  if (model.state_dim() != grid.dim())
    fail(ErrorCode::kInvalidArgument, "chain: grid dimension does not match the model");
  if (grid.is_finite_horizon() != model.horizon().is_finite())
    fail(ErrorCode::kInvalidArgument,
         "chain: grid and model must agree on the horizon (finite vs infinite)");

  ChainApprox chain;
  chain.grid_ = grid;
  chain.dt_ = grid.dt();
  if (!model.horizon().is_finite()) {
    chain.beta_ = 1.0 / (1.0 + model.horizon().discount_rate * grid.dt());
    if (!(chain.beta_ > 0.0 && chain.beta_ < 1.0))
      fail(ErrorCode::kInternal, "chain: per-step discount outside (0,1)");
  }

  const int k = grid.dim();
  const long n = grid.num_nodes();
  const double dt = grid.dt();
  chain.up_.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), 0.0);
  chain.dn_.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), 0.0);
  chain.up_at_.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), -1);
  chain.dn_at_.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), -1);
  chain.stay_.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> x(static_cast<std::size_t>(k));
  std::vector<double> b(static_cast<std::size_t>(k));
  std::vector<double> a(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));

  double worst_sum = 0.0;
  long worst_node = 0;

  for (long node = 0; node < n; ++node) {
    grid.node_point(node, x);
    model.drift_diffusion(t, x, b, a);

    double diag_scale = 1.0;
    for (int j = 0; j < k; ++j)
      diag_scale = std::max(diag_scale, std::fabs(a[static_cast<std::size_t>(j) * k + j]));
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        if (j == l) continue;
        if (std::fabs(a[static_cast<std::size_t>(j) * k + l]) > 1e-12 * diag_scale)
          fail(ErrorCode::kInvalidArgument,
               detail::cat("chain: sigma sigma* has a cross term a[", j + 1, "][", l + 1,
                           "] = ", detail::double_to_string(a[static_cast<std::size_t>(j) * k + l]),
                           " at node ", node_text(grid, node),
                           "; only diagonal diffusion is supported"));
      }
    }

    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      const double ajj = a[static_cast<std::size_t>(j) * k + j];
      const double bj = b[static_cast<std::size_t>(j)];
      const double dx = grid.dx(j);
      const int c = grid.coord(node, j);
      const bool at_lo = (c == 0);
      const bool at_hi = (c == grid.nodes(j) - 1);
      const double diff = at_lo || at_hi ? 0.0 : ajj * dt / (2.0 * dx * dx);

      double up = 0.0, dn = 0.0;
      if (!at_hi) up = diff + dt * std::max(bj, 0.0) / dx;
      if (!at_lo) dn = diff + dt * std::max(-bj, 0.0) / dx;

      const std::size_t slot =
          static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(node);
      chain.up_[slot] = up;
      chain.dn_[slot] = dn;
      if (!at_hi) chain.up_at_[slot] = node + grid.stride(j);
      if (!at_lo) chain.dn_at_[slot] = node - grid.stride(j);
      sum += up + dn;
    }
    if (sum > worst_sum) {
      worst_sum = sum;
      worst_node = node;
    }
    chain.stay_[static_cast<std::size_t>(node)] = std::max(0.0, 1.0 - sum);
  }

  if (worst_sum > 1.0 + 1e-12)
    fail(ErrorCode::kCfl,
         detail::cat("CFL condition violated at node ", node_text(grid, worst_node),
                     ": outgoing probability mass ", detail::double_to_string(worst_sum),
                     " > 1 with dt = ", detail::double_to_string(dt),
                     "; largest admissible dt here is ",
                     detail::double_to_string(dt / worst_sum)));

  // Row audit: entries are nonnegative by construction; sums must be 1.
  for (long node = 0; node < n; ++node) {
    double sum = chain.stay_[static_cast<std::size_t>(node)];
    for (int j = 0; j < k; ++j)
      sum += chain.prob_up(j, node) + chain.prob_down(j, node);
    if (std::fabs(sum - 1.0) > 1e-12)
      fail(ErrorCode::kInternal,
           detail::cat("chain row at node ", node_text(grid, node), " sums to ",
                       detail::double_to_string(sum)));
  }

  return chain;
}

void ChainApprox::expected_next(std::span<const double> field, std::span<double> out) const {
  const long n = grid_.num_nodes();
  if (static_cast<long>(field.size()) != n || static_cast<long>(out.size()) != n)
    fail(ErrorCode::kInvalidArgument, "expected_next: field size does not match the grid");
  const int k = grid_.dim();
  for (long node = 0; node < n; ++node) {
    double acc = stay_[static_cast<std::size_t>(node)] * field[static_cast<std::size_t>(node)];
    for (int j = 0; j < k; ++j) {
      const std::size_t slot =
          static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(node);
      const long up_at = up_at_[slot];
      const long dn_at = dn_at_[slot];
      if (up_at >= 0) acc += up_[slot] * field[static_cast<std::size_t>(up_at)];
      if (dn_at >= 0) acc += dn_[slot] * field[static_cast<std::size_t>(dn_at)];
    }
    out[static_cast<std::size_t>(node)] = acc;
  }
}

std::vector<double> ChainApprox::expected_next(std::span<const double> field) const {
  std::vector<double> out(field.size());
  expected_next(field, out);
  return out;
}

}  // namespace sg
