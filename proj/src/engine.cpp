#include "boxsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace boxsim {

void validate_run_spec(const RunSpec& spec) {
  if (spec.n_trials < 1)
    throw std::invalid_argument("run spec: n_trials must be >= 1");
  if (!(spec.t_final > 0.0))
    throw std::invalid_argument("run spec: t_final must be > 0");
  if (!(spec.check_interval > 0.0))
    throw std::invalid_argument("run spec: check_interval must be > 0");
  if (!(spec.box.half_width > 0.0))
    throw std::invalid_argument("run spec: box half width w_B must be > 0");
  if (!(spec.box.threshold > 0.0))
    throw std::invalid_argument("run spec: box threshold E_B must be > 0");
  if (spec.sampler.trap.kind != spec.trap.kind ||
      (spec.trap.kind == TrapKind::Wedge &&
       spec.sampler.trap.alpha != spec.trap.alpha))
    throw std::invalid_argument("run spec: sampler trap must match the run trap");
  const double dur = trajectory_duration(spec.box.trajectory);
  if (spec.t_final > dur * (1.0 + 1e-12) + 1e-9)
    throw std::invalid_argument(
        "run spec: t_final exceeds the trajectory duration t_f");
}

FractionEstimate make_fraction_estimate(std::int64_t n_caught,
                                        std::int64_t n_trials) {
  FractionEstimate est;
  est.n_caught = n_caught;
  est.n_trials = n_trials;
  est.fraction = static_cast<double>(n_caught) / static_cast<double>(n_trials);
  est.std_error =
      std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n_trials));
  return est;
}

namespace detail {

EnergyBounds catch_energy_bounds(const TrapSpec& trap, const BoxSpec& box,
                                 double t_final) {
  constexpr int kGrid = 2048;
  const double horizon = std::min(t_final, trajectory_duration(box.trajectory));
  const double v_kick = std::sqrt(2.0 * box.threshold);
  const double w = box.half_width;

  double hi_max = -std::numeric_limits<double>::infinity();
  double lo_min = std::numeric_limits<double>::infinity();
  double hi_prev = 0.0, lo_prev = 0.0;
  double hi_step = 0.0, lo_step = 0.0;
  for (int k = 0; k <= kGrid; ++k) {
    const double t = horizon * static_cast<double>(k) / kGrid;
    const BoxState bs = box_state_unchecked(box.trajectory, t);
    const double speed = bs.velocity.norm();
    const double ke_cap = 0.5 * (speed + v_kick) * (speed + v_kick);
    double v_max, v_min;
    if (trap.kind == TrapKind::Wedge) {
      v_max = bs.center.y() + w;
      v_min = std::max(0.0, bs.center.y() - w);
    } else {
      const double ax = std::abs(bs.center.x());
      const double ay = std::abs(bs.center.y());
      v_max = 0.5 * ((ax + w) * (ax + w) + (ay + w) * (ay + w));
      const double bx = std::max(0.0, ax - w);
      const double by = std::max(0.0, ay - w);
      v_min = 0.5 * (bx * bx + by * by);
    }
    const double hi = ke_cap + v_max;
    const double lo = v_min;
    if (k > 0) {
      hi_step = std::max(hi_step, std::abs(hi - hi_prev));
      lo_step = std::max(lo_step, std::abs(lo - lo_prev));
    }
    hi_max = std::max(hi_max, hi);
    lo_min = std::min(lo_min, lo);
    hi_prev = hi;
    lo_prev = lo;
  }
  EnergyBounds b;
  b.upper = hi_max + 2.0 * hi_step + 1e-3;
  b.lower = lo_min - 2.0 * lo_step - 1e-3;
  return b;
}

}  // namespace detail

namespace {

constexpr int kMaxSplitDepth = 40;
constexpr double kMinSplitInterval = 1e-9;
constexpr std::int64_t kTrialBlock = 256;

struct PointRuntime {
  Vec2 offset{0.0, 0.0};
  double threshold = 0.0;
  double e_lower = 0.0;
  double e_upper = 0.0;
};

struct TrialScratch {
  std::vector<std::uint8_t> caught;
  std::vector<double> catch_time;
  std::vector<int> active;
  bool anomaly = false;
};

inline int hist_bin(double t, double t_final) {
  const int b = static_cast<int>(t / t_final * 50.0);
  return std::clamp(b, 0, 49);
}

// Runs one trial against a set of catch predicates that share the base box's
// velocity profile and half width and differ by a constant center offset and
// threshold. Catching is absorbing per point; the trial stops early once all
// points have caught.
template <class Stepper>
class TrialRunner {
 public:
  TrialRunner(const RunSpec& base, const BoxTrajectory& rep,
              std::span<const PointRuntime> pts)
      : trap_(base.trap),
        sampler_(base.sampler),
        rep_(rep),
        w_B_(base.box.half_width),
        t_final_(base.t_final),
        dt_(base.check_interval),
        pts_(pts) {}

  void run(std::int64_t trial_index, TrialScratch& sc) {
    const std::size_t n = pts_.size();
    sc.caught.assign(n, 0);
    sc.catch_time.assign(n, 0.0);
    sc.active.clear();
    sc.anomaly = false;
    sc_ = &sc;

    const PhaseState s0 = sample_initial(sampler_, trial_index);
    const double H = energy(s0, trap_);
    for (std::size_t i = 0; i < n; ++i)
      if (H > pts_[i].e_lower && H < pts_[i].e_upper)
        sc.active.push_back(static_cast<int>(i));
    if (sc.active.empty()) return;

    st_.init(s0, trap_);
    BoxState b0 = box_state_unchecked(rep_, 0.0);
    check_points(b0, 0.0);

    const long n_steps = static_cast<long>(std::ceil(t_final_ / dt_ - 1e-9));
    double t0 = 0.0;
    for (long k = 1; k <= n_steps && !sc.active.empty(); ++k) {
      const double t1 = std::min(static_cast<double>(k) * dt_, t_final_);
      walk(t0, b0, t1, 0);
    }
    sc.anomaly = st_.anomaly;
  }

 private:
  // Advances [t0, t1]; bisects whenever the bound on the atom's displacement
  // relative to the box could exceed w_B/2, so a box crossing cannot slip
  // between checks. The bound uses endpoint relative speeds only, which keeps
  // the refinement tree independent of the (point-specific) box centers.
  void walk(double& t0, BoxState& b0, double t1, int depth) {
    const Stepper snap = st_;
    st_.advance(t1 - t0);
    BoxState b1 = box_state_unchecked(rep_, t1);
    if (depth < kMaxSplitDepth && (t1 - t0) > kMinSplitInterval &&
        needs_split(snap, b0, b1, t1 - t0)) {
      st_ = snap;
      const double tm = 0.5 * (t0 + t1);
      walk(t0, b0, tm, depth + 1);
      if (sc_->active.empty()) return;
      walk(t0, b0, t1, depth + 1);
      return;
    }
    check_points(b1, t1);
    t0 = t1;
    b0 = b1;
  }

  bool needs_split(const Stepper& s0, const BoxState& b0, const BoxState& b1,
                   double dt) const {
    const double v0 = std::max(std::abs(s0.p.x() - b0.velocity.x()),
                               std::abs(s0.p.y() - b0.velocity.y()));
    const double v1 = std::max(std::abs(st_.p.x() - b1.velocity.x()),
                               std::abs(st_.p.y() - b1.velocity.y()));
    const double a_pad =
        4.0 + std::max(std::abs(s0.r.x()), std::abs(s0.r.y())) +
        std::max(std::abs(st_.r.x()), std::abs(st_.r.y()));
    const double bound = dt * std::max(v0, v1) + dt * dt * a_pad;
    return bound > 0.5 * w_B_;
  }

  void check_points(const BoxState& bs, double t) {
    const double dx = st_.r.x() - bs.center.x();
    const double dy = st_.r.y() - bs.center.y();
    bool have_ke = false;
    double ke = 0.0;
    auto& act = sc_->active;
    for (std::size_t idx = act.size(); idx-- > 0;) {
      const int i = act[idx];
      const PointRuntime& pt = pts_[i];
      if (!(std::abs(dx - pt.offset.x()) < w_B_)) continue;
      if (!(std::abs(dy - pt.offset.y()) < w_B_)) continue;
      if (!have_ke) {
        const double dvx = st_.p.x() - bs.velocity.x();
        const double dvy = st_.p.y() - bs.velocity.y();
        ke = 0.5 * (dvx * dvx + dvy * dvy);
        have_ke = true;
      }
      if (ke < pt.threshold) {
        sc_->caught[i] = 1;
        sc_->catch_time[i] = t;
        act[idx] = act.back();
        act.pop_back();
      }
    }
  }

  const TrapSpec& trap_;
  const SamplerSpec& sampler_;
  const BoxTrajectory& rep_;
  double w_B_;
  double t_final_;
  double dt_;
  std::span<const PointRuntime> pts_;
  Stepper st_;
  TrialScratch* sc_ = nullptr;
};

struct PointTally {
  std::int64_t n_caught = 0;
  std::array<std::int64_t, 50> bins{};
};

template <class Stepper>
void drive_workers(const RunSpec& base, const BoxTrajectory& rep,
                   std::span<const PointRuntime> pts,
                   const EnsembleOptions& opts, std::vector<PointTally>& tally,
                   std::int64_t& anomalies) {
  const std::int64_t n_trials = base.n_trials;
  int n_workers = opts.n_workers > 0
                      ? opts.n_workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = static_cast<int>(
      std::min<std::int64_t>(n_workers, (n_trials + kTrialBlock - 1) / kTrialBlock));

  std::atomic<std::int64_t> cursor{0};
  std::mutex merge_mutex;

  auto work = [&]() {
    TrialRunner<Stepper> runner(base, rep, pts);
    TrialScratch sc;
    std::vector<PointTally> local(pts.size());
    std::int64_t local_anomalies = 0;
    for (;;) {
      const std::int64_t begin = cursor.fetch_add(kTrialBlock);
      if (begin >= n_trials) break;
      const std::int64_t end = std::min(n_trials, begin + kTrialBlock);
      for (std::int64_t k = begin; k < end; ++k) {
        runner.run(k, sc);
        if (sc.anomaly) ++local_anomalies;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (!sc.caught[i]) continue;
          ++local[i].n_caught;
          if (opts.record_histogram)
            ++local[i].bins[hist_bin(sc.catch_time[i], base.t_final)];
        }
      }
    }
    const std::lock_guard<std::mutex> lock(merge_mutex);
    anomalies += local_anomalies;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      tally[i].n_caught += local[i].n_caught;
      for (std::size_t b = 0; b < local[i].bins.size(); ++b)
        tally[i].bins[b] += local[i].bins[b];
    }
  };

  if (n_workers == 1) {
    work();
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) threads.emplace_back(work);
  for (auto& th : threads) th.join();
}

std::vector<FractionEstimate> run_points(const RunSpec& base,
                                         const BoxTrajectory& rep,
                                         std::vector<PointRuntime> pts,
                                         const EnsembleOptions& opts) {
  std::vector<PointTally> tally(pts.size());
  std::int64_t anomalies = 0;
  if (base.trap.kind == TrapKind::Wedge)
    drive_workers<detail::WedgeStepper>(base, rep, pts, opts, tally, anomalies);
  else
    drive_workers<detail::HarmonicStepper>(base, rep, pts, opts, tally, anomalies);

  std::vector<FractionEstimate> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    FractionEstimate est = make_fraction_estimate(tally[i].n_caught, base.n_trials);
    est.n_anomalies = anomalies;
    if (opts.record_histogram) {
      CatchHistogram h;
      h.t_max = base.t_final;
      h.bins = tally[i].bins;
      est.catch_times = h;
    }
    out.push_back(std::move(est));
  }
  return out;
}

PointRuntime make_point(const RunSpec& base, const BoxSpec& box, Vec2 offset) {
  PointRuntime pr;
  pr.offset = offset;
  pr.threshold = box.threshold;
  const auto eb = detail::catch_energy_bounds(base.trap, box, base.t_final);
  pr.e_lower = eb.lower;
  pr.e_upper = eb.upper;
  return pr;
}

}  // namespace

TrialOutcome run_trial(const RunSpec& spec, std::int64_t trial_index) {
  validate_run_spec(spec);
  if (trial_index < 0 || trial_index >= spec.n_trials)
    throw std::invalid_argument("run_trial: trial_index out of range");
  std::vector<PointRuntime> pts{make_point(spec, spec.box, Vec2{0.0, 0.0})};
  TrialScratch sc;
  if (spec.trap.kind == TrapKind::Wedge) {
    TrialRunner<detail::WedgeStepper> runner(spec, spec.box.trajectory, pts);
    runner.run(trial_index, sc);
  } else {
    TrialRunner<detail::HarmonicStepper> runner(spec, spec.box.trajectory, pts);
    runner.run(trial_index, sc);
  }
  TrialOutcome out;
  out.caught = sc.caught[0] != 0;
  out.catch_time = out.caught ? sc.catch_time[0] : 0.0;
  out.anomaly = sc.anomaly;
  return out;
}

FractionEstimate run_ensemble(const RunSpec& spec, const EnsembleOptions& opts) {
  validate_run_spec(spec);
  std::vector<PointRuntime> pts{make_point(spec, spec.box, Vec2{0.0, 0.0})};
  return run_points(spec, spec.box.trajectory, std::move(pts), opts)[0];
}

std::vector<FractionEstimate> run_ensemble_multi(const RunSpec& base,
                                                 std::span<const BoxSpec> boxes,
                                                 const EnsembleOptions& opts) {
  validate_run_spec(base);
  if (boxes.empty()) return {};

  const BoxTrajectory& rep = base.box.trajectory;
  const double dur_rep = trajectory_duration(rep);
  const Vec2 c_rep0 = box_state_unchecked(rep, 0.0).center;

  std::vector<PointRuntime> pts;
  pts.reserve(boxes.size());
  for (const BoxSpec& b : boxes) {
    if (b.half_width != base.box.half_width)
      throw std::invalid_argument("run_ensemble_multi: half widths differ");
    if (!(b.threshold > 0.0))
      throw std::invalid_argument("run_ensemble_multi: threshold must be > 0");
    const double dur = trajectory_duration(b.trajectory);
    if (!((std::isinf(dur) && std::isinf(dur_rep)) || dur == dur_rep))
      throw std::invalid_argument("run_ensemble_multi: trajectory durations differ");
    const Vec2 offset = box_state_unchecked(b.trajectory, 0.0).center - c_rep0;
    for (double frac : {0.0, 0.37, 0.71, 1.0}) {
      const double t = base.t_final * frac;
      const BoxState bi = box_state_unchecked(b.trajectory, t);
      const BoxState br = box_state_unchecked(rep, t);
      if (bi.velocity.x() != br.velocity.x() ||
          bi.velocity.y() != br.velocity.y())
        throw std::invalid_argument(
            "run_ensemble_multi: velocity profiles differ");
      const Vec2 d = (bi.center - br.center) - offset;
      const double tol =
          1e-12 * (1.0 + std::max(std::abs(offset.x()), std::abs(offset.y())));
      if (std::max(std::abs(d.x()), std::abs(d.y())) > tol)
        throw std::invalid_argument(
            "run_ensemble_multi: center offset is not constant in time");
    }
    pts.push_back(make_point(base, b, offset));
  }
  return run_points(base, rep, std::move(pts), opts);
}

}  // namespace boxsim
