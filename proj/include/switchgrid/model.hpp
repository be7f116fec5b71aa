#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "switchgrid/expr.hpp"

namespace sg {

enum class HorizonType { kFinite, kInfinite };

struct Horizon {
  HorizonType type = HorizonType::kFinite;
  double terminal_time = 0.0;  // T, finite horizon
  double discount_rate = 0.0;  // r, infinite horizon

  static Horizon finite(double T) { return {HorizonType::kFinite, T, 0.0}; }
  static Horizon infinite(double r) { return {HorizonType::kInfinite, 0.0, r}; }
  bool is_finite() const { return type == HorizonType::kFinite; }
};

/// Raw problem datum as read from a config or built in code. Validated and
/// frozen by the SwitchingModel constructor.
struct ModelSpec {
  int modes = 0;         // m
  int state_dim = 0;     // k
  int brownian_dim = 0;  // d
  Horizon horizon;
  std::vector<Expr> drift;                       // k entries of b
  std::vector<Expr> volatility;                  // k*d entries of sigma, row-major
  std::vector<Expr> profit;                      // m entries of psi
  std::vector<std::optional<Expr>> switch_cost;  // m*m entries of g, diagonal absent
  std::vector<Expr> default_cost;                // m entries of F
  double cost_gap = 0.0;                         // alpha
  int growth_exponent = 2;                       // mu
};

/// The switching problem: modes, horizon, dynamics, profit rates, switching
/// costs and default costs. Immutable after construction; all evaluation
/// methods are pure and safe to call concurrently. Modes are 0-based in the
/// C++ API (the file formats and C API use 1-based labels).
class SwitchingModel {
 public:
  SwitchingModel() = default;
  explicit SwitchingModel(ModelSpec spec);

  int modes() const { return spec_.modes; }
  int state_dim() const { return spec_.state_dim; }
  int brownian_dim() const { return spec_.brownian_dim; }
  const Horizon& horizon() const { return spec_.horizon; }
  double alpha() const { return spec_.cost_gap; }
  int growth_exponent() const { return spec_.growth_exponent; }

  double profit(int mode, double t, std::span<const double> x) const;
  double switch_cost(int from, int to, double t, std::span<const double> x) const;
  double default_cost(int mode, double t, std::span<const double> x) const;

  /// Drift vector b and diffusion matrix a = sigma sigma* at (t,x).
  /// b_out has k entries, a_out k*k row-major. Throws Error{kNumeric} if any
  /// coefficient evaluates to NaN.
  void drift_diffusion(double t, std::span<const double> x, std::span<double> b_out,
                       std::span<double> a_out) const;

  const Expr& drift_expr(int axis) const;
  const Expr& volatility_expr(int axis, int brownian) const;
  const Expr& profit_expr(int mode) const;
  const Expr& switch_cost_expr(int from, int to) const;
  const Expr& default_cost_expr(int mode) const;

  /// True when no coefficient references t (always true for infinite
  /// horizon, which the constructor enforces).
  bool time_homogeneous() const { return time_homogeneous_; }
  bool dynamics_time_homogeneous() const { return dynamics_time_homogeneous_; }

  /// 16 hex digits over the canonical description; identical model data
  /// yields identical hashes across runs.
  const std::string& hash() const { return hash_; }
  std::string canonical_text() const;

 private:
  ModelSpec spec_;
  bool time_homogeneous_ = true;
  bool dynamics_time_homogeneous_ = true;
  std::string hash_;
};

/// Best instantaneous alternative to continuing in mode `mode`:
/// max( max_{j != mode}(-switch_costs[j] + values[j]), -default_cost ).
/// For a single mode the switch part is an empty max and the result is
/// -default_cost. Throws Error{kNumeric} on NaN inputs.
double obstacle_value(int mode, std::span<const double> values,
                      std::span<const double> switch_costs, double default_cost);

struct Box {
  std::vector<double> lo, hi;
};

struct CheckResult {
  enum class Status { kPass, kWarn, kFail };
  std::string name;
  Status status = Status::kPass;
  std::string detail;
  bool has_witness = false;
  double witness_t = 0.0;
  std::vector<double> witness_x;
  double witness_value = 0.0;
};

const char* check_status_name(CheckResult::Status status);

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const;          // no fail entries
  int fail_count() const;
};

/// Samples the standing assumptions on a deterministic quasi-random set of
/// (t,x) points inside `box`. Sign/gap conditions (switching-cost bounds,
/// nonnegative default cost) fail hard; Lipschitz and growth constants can
/// only be estimated from samples and are reported as warnings with the
/// fitted constants.
ValidationReport validate(const SwitchingModel& model, const Box& box, int samples,
                          std::uint64_t seed);

}  // namespace sg
