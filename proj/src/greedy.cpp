#include "alemor/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "alemor/errors.hpp"
#include "alemor/online.hpp"
#include "alemor/presets.hpp"

namespace alemor {

namespace {

std::string mu_key(const Eigen::VectorXd& mu) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (long i = 0; i < mu.size(); ++i) out << mu(i) << ";";
  return out.str();
}

/// LRU cache of frame-trajectory snapshot columns, keyed by parameter.
class FomCache {
public:
  explicit FomCache(int capacity) : capacity_(std::max(capacity, 1)) {}

  template <typename Fn>
  const Eigen::MatrixXd& get(const Eigen::VectorXd& mu, Fn&& compute) {
    const std::string key = mu_key(mu);
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].first == key) {
        std::rotate(entries_.begin() + i, entries_.begin() + i + 1, entries_.end());
        return entries_.back().second;
      }
    }
    if (static_cast<int>(entries_.size()) >= capacity_) entries_.erase(entries_.begin());
    entries_.emplace_back(key, compute());
    return entries_.back().second;
  }

private:
  int capacity_;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> entries_;
};

Eigen::MatrixXd frame_trajectory(const ReducedModel& model, const Eigen::VectorXd& mu) {
  const EvolutionOperator op = model.make_operator(mu);
  return op.solve(model.frame_initial_state(mu), mu, model.dt, model.n_steps).snapshot_columns();
}

struct Sweep {
  Eigen::VectorXd indicators;
  double max_indicator = 0.0;
  int worst = -1;
  int k_max = 0;
  OnlineTrace worst_trace;
};

Sweep run_sweep(const ReducedModel& model, const std::vector<Eigen::VectorXd>& train_set) {
  Sweep sweep;
  sweep.indicators.setZero(static_cast<long>(train_set.size()));
  for (size_t i = 0; i < train_set.size(); ++i) {
    OnlineTrace trace = online_solve(model, train_set[i], -1, /*throw_on_divergence=*/false);
    sweep.indicators(static_cast<long>(i)) = trace.indicator;
    if (sweep.worst < 0 || trace.indicator > sweep.max_indicator) {
      sweep.max_indicator = trace.indicator;
      sweep.worst = static_cast<int>(i);
      sweep.worst_trace = std::move(trace);
    }
  }
  // Worst time step: the increment with the largest weight in the final
  // accumulated indicator (the recursion multiplies older terms by C).
  const OnlineTrace& trace = sweep.worst_trace;
  const int n_terms = static_cast<int>(trace.step_terms.size());
  double weight = 1.0, best = -1.0;
  for (int k = n_terms - 1; k >= 0; --k) {
    const double contribution = weight * trace.step_terms(k);
    if (contribution > best) {
      best = contribution;
      sweep.k_max = k;
    }
    weight *= model.lipschitz;
    if (!std::isfinite(weight)) break;
  }
  return sweep;
}

} // namespace

EimSpace eim_init(const Eigen::MatrixXd& snapshots, double eps_rel, int n_extra, double dx) {
  EimSpace space;
  space.basis.resize(snapshots.rows(), 0);
  space.interp.resize(0, 0);
  space.n_extra = 0;

  const long n_cols = snapshots.cols();
  if (n_cols == 0) throw Error(ErrorCode::Config, "collocation warm start needs snapshots");

  int extra_left = -1; // countdown once the relative target is met
  while (true) {
    long worst = 0;
    double worst_abs = -1.0, worst_rel = 0.0;
    for (long j = 0; j < n_cols; ++j) {
      const double err = space.interpolation_error(snapshots.col(j), space.size(), dx);
      const double norm = std::sqrt(dx) * snapshots.col(j).norm();
      if (err > worst_abs) {
        worst_abs = err;
        worst_rel = err / std::max(norm, 1e-300);
        worst = j;
      }
    }
    if (extra_left < 0 && worst_rel <= eps_rel) extra_left = n_extra;
    if (extra_left == 0) break;
    if (!eim_update(space, snapshots.col(worst))) break; // snapshot set exhausted
    if (extra_left > 0) --extra_left;
  }
  space.n_extra = std::min(n_extra, std::max(space.size() - 1, 0));
  return space;
}

ReducedModel podei_greedy(const std::string& preset_name, RomMode mode,
                          const std::vector<Eigen::VectorXd>& train_set, const Grid& grid,
                          double dt, int n_steps,
                          std::shared_ptr<const CalibrationModel> calibration,
                          const GreedyConfig& config) {
  if (train_set.empty()) throw Error(ErrorCode::Config, "empty training set");
  const Preset& p = preset(preset_name);
  if (mode == RomMode::Ale && !calibration)
    throw Error(ErrorCode::Config, "moving-frame reduction needs a calibration map");

  ReducedModel model;
  model.preset_name = preset_name;
  model.mode = mode;
  model.transform = p.transform;
  model.scheme = config.scheme;
  model.grid = grid;
  model.dt = dt;
  model.n_steps = n_steps;
  model.tolerance = config.tolerance;
  model.lipschitz = config.lipschitz;
  model.calibration = std::move(calibration);

  FomCache cache(config.fom_cache_capacity);
  const auto cached_trajectory = [&](const Eigen::VectorXd& mu) -> const Eigen::MatrixXd& {
    return cache.get(mu, [&] { return frame_trajectory(model, mu); });
  };

  // Collocation warm start from subsampled operator snapshots.
  {
    int stride = config.eim_init_stride;
    if (stride <= 0)
      stride = std::max<int>(1, static_cast<int>((static_cast<long>(n_steps) + 1) *
                                                 static_cast<long>(train_set.size()) / 600));
    std::vector<Eigen::VectorXd> columns;
    for (const Eigen::VectorXd& mu : train_set) {
      const Eigen::MatrixXd& traj = cached_trajectory(mu);
      const EvolutionOperator op = model.make_operator(mu);
      for (int k = 0; k < n_steps; k += stride)
        columns.push_back(op.apply(traj.col(k), op.context(k * dt, mu)));
    }
    Eigen::MatrixXd snapshots(grid.n_cells, static_cast<long>(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j) snapshots.col(static_cast<long>(j)) = columns[j];
    model.eim = eim_init(snapshots, config.eps_eim_init, config.n_extra, grid.dx);
  }

  // Basis seed: leading modes of the middle training trajectory.
  {
    const Eigen::MatrixXd& traj = cached_trajectory(train_set[train_set.size() / 2]);
    PodBasis seed = pod(traj, config.tolerance, grid.dx);
    if (seed.dim() > config.modes_per_update) {
      seed.modes = seed.modes.leftCols(config.modes_per_update).eval();
      seed.singular_values = seed.singular_values.head(config.modes_per_update).eval();
    }
    model.rb = std::move(seed);
  }
  model.finalize();

  Sweep sweep = run_sweep(model, train_set);
  double best_max = sweep.max_indicator;
  int stall_count = 0;

  for (int iter = 1;; ++iter) {
    if (config.log) {
      *config.log << "greedy iter " << iter << " max-indicator " << sweep.max_indicator << " n-rb "
                  << model.rb.dim() << " n-eim " << model.eim.main_dim() << "\n";
    }
    if (sweep.max_indicator <= config.tolerance) {
      model.status = GreedyStatus::Converged;
      model.status_reason.clear();
      break;
    }
    if (model.eim.main_dim() >= config.eim_max) {
      model.status = GreedyStatus::Stalled;
      model.status_reason = "collocation size limit reached";
      break;
    }
    if (model.rb.dim() >= config.n_max) {
      model.status = GreedyStatus::Stalled;
      model.status_reason = "basis size limit reached";
      break;
    }
    if (stall_count >= config.patience) {
      model.status = GreedyStatus::Stalled;
      model.status_reason = "no indicator progress";
      break;
    }

    const Eigen::VectorXd mu_star = train_set[static_cast<size_t>(sweep.worst)];

    // Collocation extension: exact operator on the reconstructed reduced
    // state at the worst time step. Appending keeps n_extra auxiliaries, so
    // the oldest auxiliary is promoted into the interpolation space. A target
    // already in the span (typically right after a rollback) is skipped in
    // favor of the next-heaviest time step, then of full-order snapshots, so
    // collocation-only refinement cannot deadlock.
    {
      const EvolutionOperator op = model.make_operator(mu_star);
      std::vector<int> ranked(static_cast<size_t>(sweep.worst_trace.step_terms.size()));
      for (size_t k = 0; k < ranked.size(); ++k) ranked[k] = static_cast<int>(k);
      std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        return sweep.worst_trace.step_terms(a) > sweep.worst_trace.step_terms(b);
      });
      bool extended = false;
      for (const int k : ranked) {
        const Eigen::VectorXd u_red =
            model.rb.reconstruct(sweep.worst_trace.coeffs.row(k).transpose());
        if (eim_update(model.eim, op.apply(u_red, op.context(k * dt, mu_star)))) {
          extended = true;
          break;
        }
      }
      if (!extended) {
        const Eigen::MatrixXd& traj = cached_trajectory(mu_star);
        for (const int k : ranked) {
          if (eim_update(model.eim, op.apply(traj.col(k), op.context(k * dt, mu_star)))) break;
        }
      }
    }

    // Basis extension from the full-order trajectory, with rollback when the
    // richer basis does not improve the sweep.
    const PodBasis previous_rb = model.rb;
    model.rb = pod_greedy_update(model.rb, cached_trajectory(mu_star), config.tolerance,
                                 config.modes_per_update);
    model.finalize();
    Sweep next = run_sweep(model, train_set);
    // Transient indicator bumps are part of the convergence path (the sweep
    // maximum hops between parameters while both spaces are undersized), so
    // only a blowup beyond this factor rejects the richer basis.
    constexpr double kRollbackFactor = 10.0;
    bool rollback = false;
    if (model.rb.dim() > previous_rb.dim() &&
        (!std::isfinite(next.max_indicator) ||
         next.max_indicator > kRollbackFactor * sweep.max_indicator)) {
      model.rb = previous_rb;
      model.finalize();
      next = run_sweep(model, train_set);
      rollback = true;
    }

    GreedyIterationLog log;
    log.iteration = iter;
    log.mu_max = mu_star;
    log.max_indicator = next.max_indicator;
    log.n_rb = model.rb.dim();
    log.n_eim = model.eim.main_dim();
    log.rollback = rollback;
    model.history.push_back(std::move(log));

    if (next.max_indicator < best_max * (1.0 - 1e-12)) {
      best_max = next.max_indicator;
      stall_count = 0;
    } else {
      ++stall_count;
    }
    sweep = std::move(next);
  }

  model.finalize();
  return model;
}

} // namespace alemor
