#include "boxsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace boxsim {

namespace {

bool set_traj_param(BoxTrajectory& traj, const std::string& name, double value) {
  return std::visit(
      [&](auto& tr) -> bool {
        bool hit = false;
        auto match = [&](const char* n, double& field) {
          if (!hit && name == n) {
            field = value;
            hit = true;
          }
        };
        if constexpr (requires(decltype(tr) t) { t.x_B; }) match("x_B", tr.x_B);
        if constexpr (requires(decltype(tr) t) { t.y_B; }) match("y_B", tr.y_B);
        if constexpr (requires(decltype(tr) t) { t.v_Bx; }) match("v_Bx", tr.v_Bx);
        if constexpr (requires(decltype(tr) t) { t.v_By; }) match("v_By", tr.v_By);
        if constexpr (requires(decltype(tr) t) { t.y_op; }) match("y_op", tr.y_op);
        if constexpr (requires(decltype(tr) t) { t.t_f; }) match("t_f", tr.t_f);
        if constexpr (requires(decltype(tr) t) { t.v; }) match("v", tr.v);
        if constexpr (requires(decltype(tr) t) { t.alpha; }) match("alpha", tr.alpha);
        if constexpr (requires(decltype(tr) t) { t.y_W0; }) match("y_W0", tr.y_W0);
        if constexpr (requires(decltype(tr) t) { t.omega_W; }) match("omega_W", tr.omega_W);
        if constexpr (requires(decltype(tr) t) { t.y_c; }) match("y_c", tr.y_c);
        if constexpr (requires(decltype(tr) t) { t.x_H; }) match("x_H", tr.x_H);
        if constexpr (requires(decltype(tr) t) { t.omega_H; }) match("omega_H", tr.omega_H);
        if constexpr (requires(decltype(tr) t) { t.w_B; }) match("w_B", tr.w_B);
        return hit;
      },
      traj);
}

bool get_traj_param(const BoxTrajectory& traj, const std::string& name,
                    double& out) {
  return std::visit(
      [&](const auto& tr) -> bool {
        bool hit = false;
        auto match = [&](const char* n, const double& field) {
          if (!hit && name == n) {
            out = field;
            hit = true;
          }
        };
        if constexpr (requires(decltype(tr) t) { t.x_B; }) match("x_B", tr.x_B);
        if constexpr (requires(decltype(tr) t) { t.y_B; }) match("y_B", tr.y_B);
        if constexpr (requires(decltype(tr) t) { t.v_Bx; }) match("v_Bx", tr.v_Bx);
        if constexpr (requires(decltype(tr) t) { t.v_By; }) match("v_By", tr.v_By);
        if constexpr (requires(decltype(tr) t) { t.y_op; }) match("y_op", tr.y_op);
        if constexpr (requires(decltype(tr) t) { t.t_f; }) match("t_f", tr.t_f);
        if constexpr (requires(decltype(tr) t) { t.v; }) match("v", tr.v);
        if constexpr (requires(decltype(tr) t) { t.alpha; }) match("alpha", tr.alpha);
        if constexpr (requires(decltype(tr) t) { t.y_W0; }) match("y_W0", tr.y_W0);
        if constexpr (requires(decltype(tr) t) { t.omega_W; }) match("omega_W", tr.omega_W);
        if constexpr (requires(decltype(tr) t) { t.y_c; }) match("y_c", tr.y_c);
        if constexpr (requires(decltype(tr) t) { t.x_H; }) match("x_H", tr.x_H);
        if constexpr (requires(decltype(tr) t) { t.omega_H; }) match("omega_H", tr.omega_H);
        if constexpr (requires(decltype(tr) t) { t.w_B; }) match("w_B", tr.w_B);
        return hit;
      },
      traj);
}

}  // namespace

void set_param(RunSpec& spec, const std::string& name, double value) {
  if (name == "E_B") {
    spec.box.threshold = value;
    return;
  }
  if (name == "w_B") {
    spec.box.half_width = value;
    set_traj_param(spec.box.trajectory, "w_B", value);
    return;
  }
  if (!set_traj_param(spec.box.trajectory, name, value))
    throw std::invalid_argument(
        std::string("set_param: parameter '") + name +
        "' does not apply to trajectory family " +
        trajectory_family(spec.box.trajectory));
}

double get_param(const RunSpec& spec, const std::string& name) {
  if (name == "E_B") return spec.box.threshold;
  if (name == "w_B") return spec.box.half_width;
  double out = 0.0;
  if (!get_traj_param(spec.box.trajectory, name, out))
    throw std::invalid_argument(
        std::string("get_param: parameter '") + name +
        "' does not apply to trajectory family " +
        trajectory_family(spec.box.trajectory));
  return out;
}

namespace {

// Grid axes over these parameters shift the box center by a constant (or vary
// only the threshold), so the points share one propagation pass.
bool is_offset_param(const std::string& name) {
  return name == "x_B" || name == "y_B" || name == "y_op" || name == "y_c" ||
         name == "E_B";
}

void validate_axes(const SweepSpec& spec) {
  if (spec.axes.empty())
    throw std::invalid_argument("scan: at least one axis is required");
  std::set<std::string> seen;
  for (const auto& ax : spec.axes) {
    if (ax.grid.empty())
      throw std::invalid_argument("scan: empty grid for axis " + ax.param);
    if (!std::is_sorted(ax.grid.begin(), ax.grid.end()))
      throw std::invalid_argument("scan: grid not ascending for axis " + ax.param);
    if (!seen.insert(ax.param).second)
      throw std::invalid_argument("scan: duplicate axis " + ax.param);
    RunSpec probe = spec.base;
    set_param(probe, ax.param, ax.grid.front());  // throws for bad names
  }
}

// Row-major point list, last axis fastest.
std::vector<std::vector<double>> cartesian(const std::vector<AxisSpec>& axes) {
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.grid.size();
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> v(axes.size());
    std::size_t rem = n;
    for (std::size_t j = axes.size(); j-- > 0;) {
      v[j] = axes[j].grid[rem % axes[j].grid.size()];
      rem /= axes[j].grid.size();
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

class Evaluator {
 public:
  Evaluator(const SweepSpec& spec, const EnsembleOptions& opts)
      : spec_(spec), opts_(opts) {}

  RunSpec make_spec(const std::vector<double>& values) const {
    RunSpec rs = spec_.base;
    for (std::size_t j = 0; j < spec_.axes.size(); ++j)
      set_param(rs, spec_.axes[j].param, values[j]);
    if (std::holds_alternative<WriggleTrajectory>(rs.box.trajectory)) {
      const double vmax = max_trajectory_speed(rs.box.trajectory, rs.t_final);
      if (vmax > spec_.wriggle_speed_limit)
        throw std::invalid_argument(
            "scan: wriggle trajectory exceeds the box speed limit (" +
            std::to_string(vmax) + " > " +
            std::to_string(spec_.wriggle_speed_limit) + " nu)");
    }
    return rs;
  }

  const FractionEstimate& result(const std::vector<double>& values) const {
    return cache_.at(values);
  }

  void eval_all(const std::vector<std::vector<double>>& points, int round,
                std::vector<GridPointResult>& evaluated) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!cache_.contains(points[i])) todo.push_back(i);

    budget_used_ += static_cast<std::int64_t>(todo.size()) * spec_.base.n_trials;
    if (budget_used_ > spec_.max_budget)
      throw std::invalid_argument("scan: evaluation budget exceeded");

    // Group offset-compatible points into shared passes.
    std::map<std::vector<double>, std::vector<std::size_t>> groups;
    for (std::size_t i : todo) {
      std::vector<double> key;
      for (std::size_t j = 0; j < spec_.axes.size(); ++j)
        if (!is_offset_param(spec_.axes[j].param)) key.push_back(points[i][j]);
      groups[key].push_back(i);
    }
    for (auto& [key, members] : groups) {
      if (members.size() == 1) {
        eval_single(points[members[0]]);
        continue;
      }
      const RunSpec rep = make_spec(points[members[0]]);
      std::vector<BoxSpec> boxes;
      boxes.reserve(members.size());
      for (std::size_t m : members) boxes.push_back(make_spec(points[m]).box);
      try {
        auto ests = run_ensemble_multi(rep, boxes, opts_);
        for (std::size_t i = 0; i < members.size(); ++i)
          cache_[points[members[i]]] = ests[i];
      } catch (const std::invalid_argument&) {
        for (std::size_t m : members) eval_single(points[m]);
      }
    }
    for (std::size_t i : todo)
      evaluated.push_back({points[i], cache_.at(points[i]), round});
  }

 private:
  void eval_single(const std::vector<double>& values) {
    cache_[values] = run_ensemble(make_spec(values), opts_);
  }

  const SweepSpec& spec_;
  const EnsembleOptions& opts_;
  std::map<std::vector<double>, FractionEstimate> cache_;
  std::int64_t budget_used_ = 0;
};

std::vector<AxisSpec> refine_axes(const std::vector<AxisSpec>& axes,
                                  const std::vector<AxisSpec>& original,
                                  const std::vector<double>& argmax_values) {
  std::vector<AxisSpec> out;
  out.reserve(axes.size());
  for (std::size_t j = 0; j < axes.size(); ++j) {
    const auto& grid = axes[j].grid;
    AxisSpec ax{axes[j].param, {}};
    if (grid.size() < 2) {
      ax.grid = grid;
      out.push_back(std::move(ax));
      continue;
    }
    const double a = argmax_values[j];
    const auto it = std::find(grid.begin(), grid.end(), a);
    if (it == grid.end()) {  // cannot happen for grids built by scan()
      ax.grid = grid;
      out.push_back(std::move(ax));
      continue;
    }
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    double h = 0.0;
    if (i > 0) h = std::max(h, grid[i] - grid[i - 1]);
    if (i + 1 < grid.size()) h = std::max(h, grid[i + 1] - grid[i]);
    const double lo_bound = original[j].grid.front();
    const double hi_bound = original[j].grid.back();
    for (int s = -2; s <= 2; ++s) {
      const double v = a + 0.5 * h * s;
      if (v >= lo_bound - 1e-15 && v <= hi_bound + 1e-15) ax.grid.push_back(v);
    }
    std::sort(ax.grid.begin(), ax.grid.end());
    ax.grid.erase(std::unique(ax.grid.begin(), ax.grid.end()), ax.grid.end());
    out.push_back(std::move(ax));
  }
  return out;
}

}  // namespace

SweepResult scan(const SweepSpec& spec, const EnsembleOptions& opts) {
  validate_run_spec(spec.base);
  validate_axes(spec);

  Evaluator ev(spec, opts);
  std::vector<AxisSpec> axes = spec.axes;
  SweepResult res;
  res.n_trials = spec.base.n_trials;
  const double decay = 1.0 / std::sqrt(static_cast<double>(spec.base.n_trials));

  for (int round = 0;; ++round) {
    const auto points = cartesian(axes);
    ev.eval_all(points, round, res.evaluated);

    std::vector<GridPointResult> grid;
    grid.reserve(points.size());
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      grid.push_back({points[i], ev.result(points[i]), round});
      if (grid[i].est.fraction > grid[argmax].est.fraction) argmax = i;
    }
    const double f_max = grid[argmax].est.fraction;
    const double threshold = f_max - decay;

    // Per-axis bar: contiguous run around the argmax along the axis line.
    std::vector<std::size_t> sizes(axes.size()), strides(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) sizes[j] = axes[j].grid.size();
    std::size_t stride = 1;
    for (std::size_t j = axes.size(); j-- > 0;) {
      strides[j] = stride;
      stride *= sizes[j];
    }
    std::vector<std::size_t> coords(axes.size());
    {
      std::size_t rem = argmax;
      for (std::size_t j = 0; j < axes.size(); ++j) {
        coords[j] = rem / strides[j];
        rem %= strides[j];
      }
    }
    std::vector<AxisErrorBar> bars(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) {
      bars[j].lo = bars[j].hi = axes[j].grid[coords[j]];
      for (std::size_t i = coords[j]; i-- > 0;) {
        const std::size_t idx = argmax - (coords[j] - i) * strides[j];
        if (grid[idx].est.fraction >= threshold)
          bars[j].lo = axes[j].grid[i];
        else
          break;
      }
      for (std::size_t i = coords[j] + 1; i < sizes[j]; ++i) {
        const std::size_t idx = argmax + (i - coords[j]) * strides[j];
        if (grid[idx].est.fraction >= threshold)
          bars[j].hi = axes[j].grid[i];
        else
          break;
      }
    }

    res.rounds.push_back({axes, grid[argmax].values, bars, f_max});

    if (round == spec.refine_rounds) {
      res.axes = axes;
      res.argmax = argmax;
      res.argmax_values = grid[argmax].values;
      res.best = grid[argmax].est;
      res.f_max = f_max;
      res.error_bars = bars;
      res.grid = std::move(grid);
      break;
    }
    axes = refine_axes(axes, spec.axes, grid[argmax].values);
  }
  return res;
}

SweepResult optimize_2d_velocity(const SweepSpec& spec,
                                 const EnsembleOptions& opts) {
  const bool linear_family =
      std::holds_alternative<WedgeLinearTrajectory>(spec.base.box.trajectory) ||
      std::holds_alternative<HarmonicLinearTrajectory>(spec.base.box.trajectory);
  if (!linear_family)
    throw std::invalid_argument(
        "optimize_2d_velocity: trajectory must be wedge_linear or harmonic_linear");
  if (spec.axes.size() != 2)
    throw std::invalid_argument("optimize_2d_velocity: exactly two axes required");
  for (const auto& ax : spec.axes)
    if (ax.param != "v_Bx" && ax.param != "v_By" && ax.param != "y_c")
      throw std::invalid_argument(
          "optimize_2d_velocity: axes must be over v_Bx, v_By or y_c");
  return scan(spec, opts);
}

CoolingReport cooling_efficiency(const FractionEstimate& est, const BoxSpec& box,
                                 const SamplerSpec& sampler, double epsilon) {
  CoolingReport r;
  r.fraction = est.fraction;
  r.area_initial = initial_area(sampler, epsilon);
  r.area_box = 4.0 * box.half_width * box.half_width;
  r.threshold_ratio = box.threshold;
  r.epsilon = epsilon;
  r.eta = est.fraction > 0.0
              ? std::log10(est.fraction * (r.area_initial / r.area_box) /
                           box.threshold)
              : -std::numeric_limits<double>::infinity();
  return r;
}

TrajectoryComparison compare_trajectories(const std::vector<RunSpec>& specs,
                                          const EnsembleOptions& opts) {
  if (specs.empty())
    throw std::invalid_argument("compare_trajectories: no specs");
  const RunSpec& ref = specs.front();
  for (const RunSpec& s : specs) {
    const bool same_trap =
        s.trap.kind == ref.trap.kind &&
        (s.trap.kind != TrapKind::Wedge || s.trap.alpha == ref.trap.alpha);
    if (!same_trap || s.box.half_width != ref.box.half_width ||
        s.box.threshold != ref.box.threshold || s.t_final != ref.t_final ||
        s.n_trials != ref.n_trials ||
        s.sampler.master_seed != ref.sampler.master_seed ||
        s.sampler.wedge_ensemble != ref.sampler.wedge_ensemble)
      throw std::invalid_argument(
          "compare_trajectories: specs must share trap, w_B, E_B, t_f, trials "
          "and seed");
  }
  TrajectoryComparison cmp;
  for (const RunSpec& s : specs) {
    TrajectoryComparison::Row row;
    row.family = trajectory_family(s.box.trajectory);
    row.est = run_ensemble(s, opts);
    cmp.rows.push_back(std::move(row));
  }
  std::stable_sort(cmp.rows.begin(), cmp.rows.end(),
                   [](const auto& a, const auto& b) {
                     return a.est.fraction > b.est.fraction;
                   });
  const auto& best = cmp.rows.front().est;
  for (std::size_t i = 1; i < cmp.rows.size(); ++i) {
    const auto& e = cmp.rows[i].est;
    const double se = std::sqrt(e.std_error * e.std_error +
                                best.std_error * best.std_error);
    cmp.rows[i].significant_vs_best = std::abs(e.fraction - best.fraction) > 3.0 * se;
  }
  return cmp;
}

}  // namespace boxsim
