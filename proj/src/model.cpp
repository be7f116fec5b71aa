#include "switchgrid/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "switchgrid/error.hpp"
#include "detail/hash.hpp"
#include "detail/text.hpp"

namespace sg {

namespace {

std::string point_text(double t, std::span<const double> x, bool with_time) {
  std::string s;
  if (with_time) s += detail::cat("t=", detail::double_to_string(t), ", ");
  s += "x=(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += detail::double_to_string(x[i]);
  }
  s += ")";
  return s;
}

double vec_norm(std::span<const double> v) {
  double s = 0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

SwitchingModel::SwitchingModel(ModelSpec spec) : spec_(std::move(spec)) {
  const int m = spec_.modes, k = spec_.state_dim, d = spec_.brownian_dim;
  if (m < 1) fail(ErrorCode::kInvalidArgument, "model needs at least one mode");
  if (k < 1) fail(ErrorCode::kInvalidArgument, "state dimension must be >= 1");
  if (d < 1) fail(ErrorCode::kInvalidArgument, "Brownian dimension must be >= 1");
  if (spec_.cost_gap <= 0) fail(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (spec_.growth_exponent < 0)
    fail(ErrorCode::kInvalidArgument, "growth exponent must be >= 0");
  if (spec_.horizon.is_finite()) {
    if (!(spec_.horizon.terminal_time > 0))
      fail(ErrorCode::kInvalidArgument, "finite horizon needs T > 0");
  } else if (!(spec_.horizon.discount_rate > 0)) {
    fail(ErrorCode::kInvalidArgument, "infinite horizon needs discount rate r > 0");
  }

  auto check_size = [](const auto& v, std::size_t n, const char* what) {
    if (v.size() != n)
      fail(ErrorCode::kInvalidArgument,
           detail::cat(what, " has ", v.size(), " entries, expected ", n));
  };
  check_size(spec_.drift, static_cast<std::size_t>(k), "drift");
  check_size(spec_.volatility, static_cast<std::size_t>(k) * d, "volatility");
  check_size(spec_.profit, static_cast<std::size_t>(m), "profit");
  check_size(spec_.switch_cost, static_cast<std::size_t>(m) * m, "switch_cost");
  check_size(spec_.default_cost, static_cast<std::size_t>(m), "default_cost");

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto& g = spec_.switch_cost[static_cast<std::size_t>(i) * m + j];
      if (i == j && g.has_value())
        fail(ErrorCode::kInvalidArgument,
             detail::cat("switch_cost[", i + 1, "][", i + 1, "] must be absent (no self-switch)"));
      if (i != j && !g.has_value())
        fail(ErrorCode::kInvalidArgument,
             detail::cat("switch_cost[", i + 1, "][", j + 1, "] is missing"));
    }
  }

  auto audit = [&](const Expr& e, const std::string& what) {
    if (e.empty()) fail(ErrorCode::kInvalidArgument, detail::cat(what, " is empty"));
    if (e.dim() != k)
      fail(ErrorCode::kInvalidArgument,
           detail::cat(what, " was parsed for dimension ", e.dim(), ", model has ", k));
    if (e.uses_time()) {
      time_homogeneous_ = false;
      if (!spec_.horizon.is_finite())
        fail(ErrorCode::kInvalidArgument,
             detail::cat("infinite-horizon model: ", what,
                         " depends on t (coefficients must be functions of x only)"));
    }
  };
  for (int a = 0; a < k; ++a) audit(spec_.drift[a], detail::cat("drift[", a + 1, "]"));
  for (int a = 0; a < k; ++a)
    for (int w = 0; w < d; ++w)
      audit(spec_.volatility[static_cast<std::size_t>(a) * d + w],
            detail::cat("volatility[", a + 1, "][", w + 1, "]"));
  dynamics_time_homogeneous_ = time_homogeneous_;
  for (int i = 0; i < m; ++i) audit(spec_.profit[i], detail::cat("profit[", i + 1, "]"));
  for (int i = 0; i < m; ++i)
    audit(spec_.default_cost[i], detail::cat("default_cost[", i + 1, "]"));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j)
        audit(*spec_.switch_cost[static_cast<std::size_t>(i) * m + j],
              detail::cat("switch_cost[", i + 1, "][", j + 1, "]"));

  hash_ = detail::fnv1a64_hex(canonical_text());
}

double SwitchingModel::profit(int mode, double t, std::span<const double> x) const {
  return spec_.profit[static_cast<std::size_t>(mode)].eval(t, x);
}

double SwitchingModel::switch_cost(int from, int to, double t,
                                   std::span<const double> x) const {
  const auto& g = spec_.switch_cost[static_cast<std::size_t>(from) * spec_.modes + to];
  if (!g.has_value())
    fail(ErrorCode::kInvalidArgument, "switch cost requested for identical modes");
  return g->eval(t, x);
}

double SwitchingModel::default_cost(int mode, double t, std::span<const double> x) const {
  return spec_.default_cost[static_cast<std::size_t>(mode)].eval(t, x);
}

void SwitchingModel::drift_diffusion(double t, std::span<const double> x,
                                     std::span<double> b_out, std::span<double> a_out) const {
  const int k = spec_.state_dim, d = spec_.brownian_dim;
  if (static_cast<int>(b_out.size()) != k || static_cast<int>(a_out.size()) != k * k)
    fail(ErrorCode::kInvalidArgument, "drift_diffusion: output spans have wrong size");

  double sig[64];
  std::vector<double> sig_heap;
  double* s = sig;
  if (k * d > 64) {
    sig_heap.resize(static_cast<std::size_t>(k) * d);
    s = sig_heap.data();
  }
  for (int a = 0; a < k; ++a) {
    b_out[static_cast<std::size_t>(a)] = spec_.drift[a].eval(t, x);
    if (std::isnan(b_out[static_cast<std::size_t>(a)]))
      fail(ErrorCode::kNumeric,
           detail::cat("drift[", a + 1, "] evaluated to NaN at ", point_text(t, x, true)));
    for (int w = 0; w < d; ++w) {
      s[a * d + w] = spec_.volatility[static_cast<std::size_t>(a) * d + w].eval(t, x);
      if (std::isnan(s[a * d + w]))
        fail(ErrorCode::kNumeric, detail::cat("volatility[", a + 1, "][", w + 1,
                                              "] evaluated to NaN at ", point_text(t, x, true)));
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int c = 0; c < k; ++c) {
      double acc = 0;
      for (int w = 0; w < d; ++w) acc += s[a * d + w] * s[c * d + w];
      a_out[static_cast<std::size_t>(a) * k + c] = acc;
    }
  }
}

const Expr& SwitchingModel::drift_expr(int axis) const {
  return spec_.drift[static_cast<std::size_t>(axis)];
}
const Expr& SwitchingModel::volatility_expr(int axis, int brownian) const {
  return spec_.volatility[static_cast<std::size_t>(axis) * spec_.brownian_dim + brownian];
}
const Expr& SwitchingModel::profit_expr(int mode) const {
  return spec_.profit[static_cast<std::size_t>(mode)];
}
const Expr& SwitchingModel::switch_cost_expr(int from, int to) const {
  return *spec_.switch_cost[static_cast<std::size_t>(from) * spec_.modes + to];
}
const Expr& SwitchingModel::default_cost_expr(int mode) const {
  return spec_.default_cost[static_cast<std::size_t>(mode)];
}

std::string SwitchingModel::canonical_text() const {
  std::string s = detail::cat("m=", spec_.modes, ";k=", spec_.state_dim, ";d=",
                              spec_.brownian_dim, ";horizon=",
                              spec_.horizon.is_finite()
                                  ? detail::cat("finite:", detail::double_to_string17(
                                                               spec_.horizon.terminal_time))
                                  : detail::cat("infinite:", detail::double_to_string17(
                                                                 spec_.horizon.discount_rate)),
                              ";alpha=", detail::double_to_string17(spec_.cost_gap),
                              ";mu=", spec_.growth_exponent);
  s += ";b=[";
  for (const auto& e : spec_.drift) s += e.str() + ";";
  s += "];sigma=[";
  for (const auto& e : spec_.volatility) s += e.str() + ";";
  s += "];psi=[";
  for (const auto& e : spec_.profit) s += e.str() + ";";
  s += "];g=[";
  for (const auto& e : spec_.switch_cost) s += (e.has_value() ? e->str() : "~") + ";";
  s += "];F=[";
  for (const auto& e : spec_.default_cost) s += e.str() + ";";
  s += "]";
  return s;
}

double obstacle_value(int mode, std::span<const double> values,
                      std::span<const double> switch_costs, double default_cost) {
  if (std::isnan(default_cost))
    fail(ErrorCode::kNumeric, "obstacle_value: default cost is NaN");
  double best = -default_cost;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (static_cast<int>(j) == mode) continue;
    if (std::isnan(values[j]))
      fail(ErrorCode::kNumeric, detail::cat("obstacle_value: value[", j + 1, "] is NaN"));
    if (std::isnan(switch_costs[j]))
      fail(ErrorCode::kNumeric, detail::cat("obstacle_value: switch cost[", j + 1, "] is NaN"));
    best = std::max(best, -switch_costs[j] + values[j]);
  }
  return best;
}

const char* check_status_name(CheckResult::Status status) {
  switch (status) {
    case CheckResult::Status::kPass:
      return "pass";
    case CheckResult::Status::kWarn:
      return "warn";
    case CheckResult::Status::kFail:
      return "fail";
  }
  return "unknown";
}

bool ValidationReport::ok() const { return fail_count() == 0; }

int ValidationReport::fail_count() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == CheckResult::Status::kFail) ++n;
  return n;
}

namespace {

// Halton low-discrepancy point in [0,1).
double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61};

struct SamplePoint {
  double t = 0;
  std::vector<double> x;
};

std::vector<SamplePoint> sample_points(const SwitchingModel& model, const Box& box,
                                       int samples, std::uint64_t seed) {
  const int k = model.state_dim();
  const bool finite = model.horizon().is_finite();
  std::uint64_t offset = seed % 1000003u + 1u;
  std::vector<SamplePoint> points(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    auto& p = points[static_cast<std::size_t>(s)];
    p.x.resize(static_cast<std::size_t>(k));
    std::uint64_t idx = offset + static_cast<std::uint64_t>(s);
    for (int a = 0; a < k; ++a) {
      double u = halton(idx, kPrimes[a % 18]);
      p.x[static_cast<std::size_t>(a)] = box.lo[static_cast<std::size_t>(a)] +
                                         u * (box.hi[static_cast<std::size_t>(a)] -
                                              box.lo[static_cast<std::size_t>(a)]);
    }
    p.t = finite ? halton(idx, kPrimes[k % 18]) * model.horizon().terminal_time : 0.0;
  }
  return points;
}

struct BoundTracker {
  double worst = std::numeric_limits<double>::infinity();
  const SamplePoint* at = nullptr;
  bool nan = false;
  const SamplePoint* nan_at = nullptr;

  void see(double v, const SamplePoint& p) {
    if (std::isnan(v)) {
      if (!nan) {
        nan = true;
        nan_at = &p;
      }
      return;
    }
    if (v < worst) {
      worst = v;
      at = &p;
    }
  }
};

CheckResult bound_check(const std::string& name, const BoundTracker& tr, double lower,
                        const std::string& what, bool with_time) {
  CheckResult r;
  r.name = name;
  if (tr.nan) {
    r.status = CheckResult::Status::kFail;
    r.detail = detail::cat(what, " evaluated to NaN at ", point_text(tr.nan_at->t, tr.nan_at->x, with_time));
    r.has_witness = true;
    r.witness_t = tr.nan_at->t;
    r.witness_x = tr.nan_at->x;
    r.witness_value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  if (tr.worst < lower) {
    r.status = CheckResult::Status::kFail;
    r.detail = detail::cat(what, " = ", detail::double_to_string(tr.worst), " < ",
                           detail::double_to_string(lower), " at ",
                           point_text(tr.at->t, tr.at->x, with_time));
    r.has_witness = true;
    r.witness_t = tr.at->t;
    r.witness_x = tr.at->x;
    r.witness_value = tr.worst;
  } else {
    r.status = CheckResult::Status::kPass;
    r.detail = detail::cat("min sampled ", what, " = ", detail::double_to_string(tr.worst),
                           " >= ", detail::double_to_string(lower));
  }
  return r;
}

}  // namespace

ValidationReport validate(const SwitchingModel& model, const Box& box, int samples,
                          std::uint64_t seed) {
  const int m = model.modes(), k = model.state_dim();
  if (static_cast<int>(box.lo.size()) != k || static_cast<int>(box.hi.size()) != k)
    fail(ErrorCode::kInvalidArgument, "validation box dimension does not match the model");
  for (int a = 0; a < k; ++a)
    if (!(box.lo[static_cast<std::size_t>(a)] < box.hi[static_cast<std::size_t>(a)]))
      fail(ErrorCode::kInvalidArgument, detail::cat("validation box axis ", a + 1, " is empty"));
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "samples must be >= 1");

  const bool finite = model.horizon().is_finite();
  const double alpha = model.alpha();
  auto points = sample_points(model, box, samples, seed);

  ValidationReport report;

  // Hard checks: switching-cost gap per horizon, nonnegative default cost.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      BoundTracker lo_tr;
      double upper_worst = -std::numeric_limits<double>::infinity();
      const SamplePoint* upper_at = nullptr;
      for (const auto& p : points) {
        double g = model.switch_cost(i, j, p.t, p.x);
        lo_tr.see(g, p);
        if (!std::isnan(g) && g > upper_worst) {
          upper_worst = g;
          upper_at = &p;
        }
      }
      if (finite) {
        report.checks.push_back(bound_check(detail::cat("switch_cost_gap[", i + 1, "->", j + 1, "]"),
                                            lo_tr, alpha,
                                            detail::cat("g[", i + 1, "->", j + 1, "]"), true));
      } else {
        report.checks.push_back(bound_check(
            detail::cat("switch_cost_lower[", i + 1, "->", j + 1, "]"), lo_tr, 1.0 / alpha,
            detail::cat("g[", i + 1, "->", j + 1, "]"), false));
        CheckResult up;
        up.name = detail::cat("switch_cost_upper[", i + 1, "->", j + 1, "]");
        if (lo_tr.nan) {
          up.status = CheckResult::Status::kFail;
          up.detail = "skipped: NaN while sampling g";
        } else if (upper_worst > alpha) {
          up.status = CheckResult::Status::kFail;
          up.detail = detail::cat("g[", i + 1, "->", j + 1, "] = ",
                                  detail::double_to_string(upper_worst), " > alpha = ",
                                  detail::double_to_string(alpha), " at ",
                                  point_text(upper_at->t, upper_at->x, false));
          up.has_witness = true;
          up.witness_t = upper_at->t;
          up.witness_x = upper_at->x;
          up.witness_value = upper_worst;
        } else {
          up.status = CheckResult::Status::kPass;
          up.detail = detail::cat("max sampled g = ", detail::double_to_string(upper_worst),
                                  " <= alpha = ", detail::double_to_string(alpha));
        }
        report.checks.push_back(std::move(up));
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    BoundTracker tr;
    for (const auto& p : points) tr.see(model.default_cost(i, p.t, p.x), p);
    report.checks.push_back(bound_check(detail::cat("default_cost_nonnegative[", i + 1, "]"), tr,
                                        0.0, detail::cat("F[", i + 1, "]"), finite));
  }

  // Warn-level fits: polynomial growth of psi/F/g, Lipschitz and linear
  // growth of b and sigma. Sampling cannot prove these, so the fitted
  // constants are reported and the entries never fail.
  {
    const int mu = model.growth_exponent();
    double fit = 0;
    bool nan = false;
    for (const auto& p : points) {
      double total = 0;
      for (int i = 0; i < m; ++i) {
        total += std::fabs(model.profit(i, p.t, p.x));
        total += std::fabs(model.default_cost(i, p.t, p.x));
        for (int j = 0; j < m; ++j)
          if (i != j) total += std::fabs(model.switch_cost(i, j, p.t, p.x));
      }
      if (std::isnan(total)) nan = true;
      double xn = vec_norm(p.x);
      fit = std::max(fit, total / (1.0 + std::pow(xn, mu)));
    }
    CheckResult r;
    r.name = "reward_growth_fit";
    r.status = nan ? CheckResult::Status::kFail : CheckResult::Status::kWarn;
    r.detail = nan ? "NaN while sampling psi/F/g"
                   : detail::cat("fitted C with |psi|+|F|+|g| <= C(1+|x|^", mu,
                                 ") on the sample: C = ", detail::double_to_string(fit));
    report.checks.push_back(std::move(r));
  }

  // Companion x points at the same t, for the x-Lipschitz ratios.
  std::vector<std::vector<double>> companions(points.size());
  {
    std::uint64_t offset = seed % 1000003u + 1u + static_cast<std::uint64_t>(samples);
    for (std::size_t s = 0; s < points.size(); ++s) {
      companions[s].resize(static_cast<std::size_t>(k));
      std::uint64_t idx = offset + static_cast<std::uint64_t>(s);
      for (int a = 0; a < k; ++a) {
        double u = halton(idx, kPrimes[a % 18]);
        companions[s][static_cast<std::size_t>(a)] =
            box.lo[static_cast<std::size_t>(a)] +
            u * (box.hi[static_cast<std::size_t>(a)] - box.lo[static_cast<std::size_t>(a)]);
      }
    }
  }

  auto dyn_fit = [&](const char* label, bool drift) {
    const int d = model.brownian_dim();
    double growth = 0, lipschitz = 0;
    bool nan = false;
    std::vector<double> cur, other;
    auto eval_all = [&](double t, std::span<const double> x, std::vector<double>& out) {
      out.clear();
      if (drift) {
        for (int a = 0; a < k; ++a) out.push_back(model.drift_expr(a).eval(t, x));
      } else {
        for (int a = 0; a < k; ++a)
          for (int w = 0; w < d; ++w) out.push_back(model.volatility_expr(a, w).eval(t, x));
      }
    };
    for (std::size_t s = 0; s < points.size(); ++s) {
      const auto& p = points[s];
      eval_all(p.t, p.x, cur);
      double n = vec_norm(cur);
      if (std::isnan(n)) nan = true;
      growth = std::max(growth, n / (1.0 + vec_norm(p.x)));
      eval_all(p.t, companions[s], other);
      double dx = 0, df = 0;
      for (int a = 0; a < k; ++a) {
        double diff = p.x[static_cast<std::size_t>(a)] - companions[s][static_cast<std::size_t>(a)];
        dx += diff * diff;
      }
      for (std::size_t c = 0; c < cur.size(); ++c) {
        double diff = cur[c] - other[c];
        df += diff * diff;
      }
      if (dx > 0) lipschitz = std::max(lipschitz, std::sqrt(df / dx));
    }
    CheckResult r;
    r.name = detail::cat(label, "_regularity_fit");
    r.status = nan ? CheckResult::Status::kFail : CheckResult::Status::kWarn;
    r.detail = nan ? detail::cat("NaN while sampling ", label)
                   : detail::cat("fitted growth C = ", detail::double_to_string(growth),
                                 ", sampled Lipschitz ratio = ",
                                 detail::double_to_string(lipschitz));
    report.checks.push_back(std::move(r));
  };
  dyn_fit("drift", true);
  dyn_fit("volatility", false);

  return report;
}

}  // namespace sg
