#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/graph.hpp"
#include "wordwalks/kernel.hpp"
#include "wordwalks/lamplighter.hpp"
#include "wordwalks/rng.hpp"

// Monte-Carlo and pathwise estimators. Every estimator reports a
// standard error, and trial i always draws from the stream derived
// from (seed, i), so serial and threaded runs agree bitwise.

namespace ww {

struct Estimate {
  double value = 0;
  double std_error = 0;
  int trials = 0;
};

inline Estimate summarize(const std::vector<double>& xs) {
  Estimate e;
  e.trials = static_cast<int>(xs.size());
  if (xs.empty()) return e;
  double sum = 0;
  for (double x : xs) sum += x;
  e.value = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - e.value) * (x - e.value);
    e.std_error = std::sqrt(ss / (xs.size() - 1.0) / xs.size());
  }
  return e;
}

// Runs fn(trial, stream) for each trial; results land in trial order
// regardless of scheduling.
template <class F>
std::vector<double> run_trials(const SimConfig& cfg, F&& fn) {
  cfg.validate();
  std::vector<double> results(cfg.trials, 0.0);
  if (cfg.threads <= 1) {
    for (int i = 0; i < cfg.trials; ++i) {
      RngStream stream(cfg.seed, static_cast<std::uint64_t>(i));
      results[i] = fn(i, stream);
    }
    return results;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      RngStream stream(cfg.seed, static_cast<std::uint64_t>(i));
      results[i] = fn(i, stream);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min<int>(cfg.threads, cfg.trials);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

// ----------------------------------------------------------------------
template <class K>
struct Trajectory {
  std::vector<typename K::state_type> states;
};

template <class K>
Trajectory<K> run_trajectory(const K& k, const typename K::state_type& start, long long n,
                             RngStream& rng) {
  require(n >= 0, "run_trajectory: negative horizon");
  Trajectory<K> traj;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.push_back(start);
  auto cur = start;
  for (long long i = 0; i < n; ++i) {
    k.step(cur, rng);
    traj.states.push_back(cur);
  }
  return traj;
}

// ----------------------------------------------------------------------
struct EstimateWithTrials {
  Estimate estimate;
  std::vector<double> per_trial;
};

// Mean of metric(X_n)/n over trials, where metric measures the distance
// from the start.

template <class K, class Metric>
EstimateWithTrials rate_of_escape(const K& k, const typename K::state_type& start, Metric metric,
                                  const SimConfig& cfg) {
  require(cfg.horizon >= 1, "rate_of_escape: horizon must be >= 1");
  auto per_trial = run_trials(cfg, [&](int, RngStream& rng) {
    auto cur = start;
    for (long long i = 0; i < cfg.horizon; ++i) k.step(cur, rng);
    return static_cast<double>(metric(cur)) / static_cast<double>(cfg.horizon);
  });
  return {summarize(per_trial), std::move(per_trial)};
}

// Mean of |supp(eta_n)|/n over trials for a lamplighter kernel.
template <class LK>
EstimateWithTrials support_growth(const LK& k, const typename LK::state_type& start,
                                  const SimConfig& cfg) {
  require(cfg.horizon >= 1, "support_growth: horizon must be >= 1");
  auto per_trial = run_trials(cfg, [&](int, RngStream& rng) {
    auto cur = start;
    for (long long i = 0; i < cfg.horizon; ++i) k.step(cur, rng);
    return static_cast<double>(cur.lamps.size()) / static_cast<double>(cfg.horizon);
  });
  return {summarize(per_trial), std::move(per_trial)};
}

// ----------------------------------------------------------------------
// Number of distinct points visited by X_1..X_j. The tracker buffers
// scalar values so that unit-step paths on Z resolve to a max-min
// interval without hashing; everything else falls back to a hash set.

namespace detail {

template <class S>
struct RangeTracker {
  std::unordered_set<S, HashOf> seen;
  void add(const S& s) { seen.insert(s); }
  unsigned long long finalize() const { return seen.size(); }
};

struct ScalarRangeTracker {
  std::vector<long long> values;
  void add_scalar(long long v) { values.push_back(v); }
  unsigned long long finalize() const {
    if (values.empty()) return 0;
    bool unit = true;
    long long lo = values[0], hi = values[0];
    for (std::size_t i = 0; i + 1 < values.size() && unit; ++i) {
      long long d = values[i + 1] - values[i];
      if (d > 1 || d < -1) unit = false;
    }
    if (unit) {
      for (long long v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return static_cast<unsigned long long>(hi - lo + 1);
    }
    std::unordered_set<long long, HashOf> seen(values.begin(), values.end());
    return seen.size();
  }
};

template <>
struct RangeTracker<long long> : ScalarRangeTracker {
  void add(long long v) { add_scalar(v); }
};

template <>
struct RangeTracker<std::vector<long long>> {
  ScalarRangeTracker scalar;
  std::unordered_set<std::vector<long long>, HashOf> seen;
  bool use_scalar = true;

  void add(const std::vector<long long>& v) {
    if (use_scalar && v.size() == 1) {
      scalar.add_scalar(v[0]);
    } else {
      use_scalar = false;
      seen.insert(v);
    }
  }
  unsigned long long finalize() const {
    return use_scalar ? scalar.finalize() : seen.size();
  }
};

}  // namespace detail

// R_j = |{X_1,...,X_j}| for j = 1..n; nondecreasing, R_j <= j. X_0 is
// not counted, following the range convention used by the return
// probability formula.
template <class S>
std::vector<unsigned long long> range_sequence(const std::vector<S>& states) {
  std::vector<unsigned long long> out;
  if (states.size() <= 1) return out;
  out.reserve(states.size() - 1);
  std::unordered_set<S, HashOf> seen;
  for (std::size_t j = 1; j < states.size(); ++j) {
    seen.insert(states[j]);
    out.push_back(seen.size());
  }
  return out;
}

// ----------------------------------------------------------------------
// Return probabilities of the switch-walk-switch lamplighter walk with
// the uniform lamp kernel, via the range identity
//   q^(n)((eta,x),(eta,x)) = E_x[ 2^(-R_n) 1{X_n = x} ],
// estimated on trajectories of the base walk alone.
template <class K>
EstimateWithTrials sws_return_probability(const K& base, const typename K::state_type& start,
                                          long long n, const SimConfig& cfg) {
  require(n >= 0, "sws_return_probability: n must be >= 0");
  auto per_trial = run_trials(cfg, [&](int, RngStream& rng) {
    auto cur = start;
    detail::RangeTracker<typename K::state_type> tracker;
    for (long long i = 0; i < n; ++i) {
      base.step(cur, rng);
      tracker.add(cur);
    }
    if (!(cur == start)) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(tracker.finalize()));
  });
  return {summarize(per_trial), std::move(per_trial)};
}

// Monte-Carlo mean of exp(-t R_n); the Laplace transform of the range.
template <class K>
EstimateWithTrials laplace_range(const K& base, const typename K::state_type& start, double t,
                                 long long n, const SimConfig& cfg) {
  require(t >= 0, "laplace_range: t must be >= 0");
  require(n >= 0, "laplace_range: n must be >= 0");
  auto per_trial = run_trials(cfg, [&](int, RngStream& rng) {
    auto cur = start;
    detail::RangeTracker<typename K::state_type> tracker;
    for (long long i = 0; i < n; ++i) {
      base.step(cur, rng);
      tracker.add(cur);
    }
    return std::exp(-t * static_cast<double>(tracker.finalize()));
  });
  return {summarize(per_trial), std::move(per_trial)};
}

// ----------------------------------------------------------------------
// The induced chain on the spine: Y_m = X_{tau_m}, where tau_m are the
// successive exit times from the hanging trees. Y lives on Z_+, moves
// by +-1, and starts Y_0 = 0, Y_1 = 1.

struct InducedChain {
  std::vector<long long> y;
  bool truncated = false;  // no exit observed within the horizon
};

inline InducedChain induced_chain(const std::vector<OrientedTree::Vertex>& states) {
  require(!states.empty() && states.front() == OrientedTree::Vertex{},
          "induced_chain: trajectory must start at the origin spine vertex");
  InducedChain out;
  out.y.push_back(0);
  long long cur = 0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const auto& s = states[i];
    if (s.spine != cur) {
      require(s.digits.empty(), "induced_chain: exit landed off the spine");
      out.y.push_back(s.spine);
      cur = s.spine;
    }
  }
  out.truncated = out.y.size() < 2;
  return out;
}

// Streaming variant: walks the oriented tree without storing the
// trajectory, emitting spine exits until either max_transitions have
// been collected or the step budget runs out. Excursions into hanging
// trees have heavy-tailed lengths, so budgets matter at scale.
inline InducedChain induced_chain_stream(const OrientedTreeKernel& k, long long step_budget,
                                         std::size_t max_transitions, RngStream& rng) {
  InducedChain out;
  out.y.push_back(0);
  OrientedTree::Vertex cur{};
  long long cur_spine = 0;
  for (long long step = 0; step < step_budget && out.y.size() - 1 < max_transitions; ++step) {
    k.step(cur, rng);
    if (cur.digits.empty() && cur.spine != cur_spine) {
      out.y.push_back(cur.spine);
      cur_spine = cur.spine;
    }
  }
  out.truncated = out.y.size() < 2;
  return out;
}

// Independent capped runs, pooled until min_transitions spine exits
// have been collected. Single runs are unreliable at scale: one deep
// excursion can swallow any fixed step budget, so the estimator pools
// complete transitions from many bounded runs instead. Run i uses the
// stream derived from (seed, i).
inline std::vector<InducedChain> induced_chain_pooled(const OrientedTreeKernel& k,
                                                      std::uint64_t seed,
                                                      long long per_run_budget,
                                                      std::size_t min_transitions,
                                                      int max_runs) {
  std::vector<InducedChain> runs;
  std::size_t collected = 0;
  for (int i = 0; i < max_runs && collected < min_transitions; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    runs.push_back(induced_chain_stream(k, per_run_budget, min_transitions, rng));
    collected += runs.back().y.size() - 1;
  }
  return runs;
}

// ----------------------------------------------------------------------
// Cut times of a finite path: n is a cut time iff the past
// {path_0..path_n} and the future {path_{n+1}..} are disjoint. Only
// indices with a nonempty future inside the window are evaluated, and
// the last censor_tail indices are skipped because the definition
// quantifies over an infinite future. The density reported is the
// density of cut points within the set of visited states.

struct CutReport {
  std::vector<std::size_t> times;
  std::vector<long long> values;
  std::size_t evaluated = 0;  // indices checked: [0, evaluated)
  std::size_t distinct = 0;   // distinct states visited in the window
  double density = 0;
};

inline CutReport cut_points(const std::vector<long long>& path, std::size_t censor_tail = 100) {
  CutReport out;
  if (path.size() < 2) return out;
  std::size_t eval_end = path.size() - 1;
  eval_end = censor_tail >= eval_end ? 0 : eval_end - censor_tail;
  out.evaluated = eval_end;
  if (eval_end == 0) return out;

  std::unordered_map<long long, std::size_t, HashOf> last_occ;
  for (std::size_t i = 0; i < path.size(); ++i) last_occ[path[i]] = i;

  std::unordered_set<long long, HashOf> visited;
  std::size_t running_last = 0;
  for (std::size_t n = 0; n < eval_end; ++n) {
    visited.insert(path[n]);
    running_last = std::max(running_last, last_occ[path[n]]);
    if (running_last <= n) {
      out.times.push_back(n);
      out.values.push_back(path[n]);
    }
  }
  out.distinct = visited.size();
  out.density = out.distinct == 0
                    ? 0.0
                    : static_cast<double>(out.times.size()) / static_cast<double>(out.distinct);
  return out;
}

// ----------------------------------------------------------------------
// Stabilization diagnostics for the lamp configuration on a ball around
// the origin. The configuration on the ball is declared stabilized when
// the walker keeps out of the ball for the final margin_frac of the
// window; flips can only happen where the walker stands.

template <class V>
struct LimitConfigReport {
  LampConfig<V> config;                              // final lamps on the ball
  std::vector<std::pair<V, long long>> last_flips;   // per ball vertex with flips
  long long stabilization_time = 0;                  // last flip time inside the ball
  bool censored = false;
};

template <class G>
LimitConfigReport<typename G::vertex_type> limit_configuration(
    const G& g, const std::vector<LampState<typename G::vertex_type>>& traj, int radius,
    double margin_frac = 0.75) {
  using V = typename G::vertex_type;
  require(!traj.empty(), "limit_configuration: empty trajectory");
  require(radius >= 0, "limit_configuration: radius must be >= 0");
  require(margin_frac > 0 && margin_frac < 1, "limit_configuration: margin_frac in (0,1)");
  const long long n = static_cast<long long>(traj.size()) - 1;
  const auto origin = g.origin();

  auto in_ball = [&](const V& v) { return g.distance(origin, v) <= radius; };

  LimitConfigReport<V> out;
  std::unordered_map<V, long long, HashOf> last_flip;
  long long last_in_ball = -1;
  if (in_ball(traj[0].position)) last_in_ball = 0;
  for (long long t = 1; t <= n; ++t) {
    if (in_ball(traj[t].position)) last_in_ball = t;
    auto diff = symmetric_difference(traj[t - 1].lamps, traj[t].lamps);
    for (const auto& v : diff.support) {
      if (in_ball(v)) last_flip[v] = t;
    }
  }
  for (const auto& v : traj.back().lamps.support) {
    if (in_ball(v)) out.config.support.push_back(v);
  }
  std::sort(out.config.support.begin(), out.config.support.end());
  for (auto& [v, t] : last_flip) {
    out.last_flips.emplace_back(v, t);
    out.stabilization_time = std::max(out.stabilization_time, t);
  }
  std::sort(out.last_flips.begin(), out.last_flips.end());
  long long cutoff = n - static_cast<long long>(std::ceil(margin_frac * static_cast<double>(n)));
  out.censored = last_in_ball > cutoff;
  return out;
}

}  // namespace ww
