#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <unordered_set>

#include "wordwalks/simulate.hpp"

using namespace ww;

namespace {

// Exhaustive expectation of 2^(-R_n) 1{X_n = x0} over all length-n base
// paths; the independent oracle for the return-probability formula.
template <class K>
double exact_sws_return(const K& base, const typename K::state_type& x0, int n) {
  double total = 0;
  std::vector<typename K::state_type> path{x0};
  auto rec = [&](auto&& self, double prob) -> void {
    if (static_cast<int>(path.size()) == n + 1) {
      if (!(path.back() == x0)) return;
      std::unordered_set<typename K::state_type, HashOf> seen(path.begin() + 1, path.end());
      total += prob * std::ldexp(1.0, -static_cast<int>(seen.size()));
      return;
    }
    for (auto& [t, p] : base.enumerate(path.back())) {
      path.push_back(t);
      self(self, prob * p);
      path.pop_back();
    }
  };
  rec(rec, 1.0);
  return total;
}

// Direct n-step return probability of the full SWS chain by exact DP.
double direct_sws_return_dp(int n) {
  auto k = switch_walk_switch(LampKernel::uniform(), srw(LatticeGraph(1)));
  using S = decltype(k)::state_type;
  S o{{}, {0}};
  std::unordered_map<S, double, HashOf> dist{{o, 1.0}};
  for (int i = 0; i < n; ++i) {
    std::unordered_map<S, double, HashOf> next;
    for (auto& [s, m] : dist) {
      for (auto& [t, p] : k.enumerate(s)) next[t] += m * p;
    }
    dist = std::move(next);
  }
  auto it = dist.find(o);
  return it == dist.end() ? 0.0 : it->second;
}

// Deterministic lamplighter kernel: flip the lamp here, then step right.
struct FlipThenRight {
  using state_type = LampState<std::vector<long long>>;
  Enumeration<state_type> enumerate(const state_type& s) const {
    state_type t = s;
    t.lamps.toggle(t.position);
    t.position[0] += 1;
    return {{t, 1.0}};
  }
  state_type sample(const state_type& s, RngStream&) const { return enumerate(s)[0].first; }
  void step(state_type& s, RngStream& rng) const { s = sample(s, rng); }
};

bool is_cut_time_brute(const std::vector<long long>& path, std::size_t n) {
  std::unordered_set<long long> past(path.begin(), path.begin() + n + 1);
  for (std::size_t j = n + 1; j < path.size(); ++j) {
    if (past.count(path[j])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("trajectories are reproducible and respect the horizon") {
  auto k = biased_z(0.7);
  RngStream r1(42, 0), r2(42, 0);
  auto t1 = run_trajectory(k, 0LL, 500, r1);
  auto t2 = run_trajectory(k, 0LL, 500, r2);
  CHECK(t1.states == t2.states);
  REQUIRE(t1.states.size() == 501);
  for (std::size_t i = 1; i < t1.states.size(); ++i) {
    CHECK(std::llabs(t1.states[i] - t1.states[i - 1]) == 1);
  }

  RngStream r3(42, 0);
  auto t0 = run_trajectory(k, 0LL, 0, r3);
  CHECK(t0.states == std::vector<long long>{0});
}

TEST_CASE("rate of escape: drifting, recurrent, and tree walks") {
  SimConfig cfg{/*seed=*/7, /*horizon=*/4000, /*trials=*/100};

  auto kb = biased_z(0.7);
  auto rb = rate_of_escape(kb, 0LL, [](long long x) { return std::llabs(x); }, cfg);
  CHECK(std::abs(rb.estimate.value - 0.4) <= 4 * rb.estimate.std_error);

  auto kz = srw(LatticeGraph(1));
  auto rz = rate_of_escape(
      kz, kz.graph.origin(), [](const std::vector<long long>& v) { return std::llabs(v[0]); },
      cfg);
  CHECK(rz.estimate.value < 0.05);

  auto kt = srw(HomTree(3));
  auto rt = rate_of_escape(
      kt, kt.graph.origin(), [](const std::string& w) { return w.size(); }, cfg);
  CHECK(std::abs(rt.estimate.value - 1.0 / 3) <= 4 * rt.estimate.std_error);
}

TEST_CASE("reproducibility: identical configs give identical estimates") {
  SimConfig cfg{123, 1000, 20};
  auto k = biased_z(0.6);
  auto metric = [](long long x) { return std::llabs(x); };
  auto a = rate_of_escape(k, 0LL, metric, cfg);
  auto b = rate_of_escape(k, 0LL, metric, cfg);
  CHECK(a.estimate.value == b.estimate.value);
  CHECK(a.estimate.std_error == b.estimate.std_error);
  CHECK(a.per_trial == b.per_trial);

  SimConfig threaded = cfg;
  threaded.threads = 4;
  auto c = rate_of_escape(k, 0LL, metric, threaded);
  CHECK(c.per_trial == a.per_trial);
}

TEST_CASE("support growth: recurrent base flat, transient base linear, deterministic = 1") {
  SimConfig cfg{11, 4000, 40};
  auto uniform = LampKernel::uniform();

  auto rec = support_growth(switch_walk_switch(uniform, srw(LatticeGraph(1))),
                            {{}, {0}}, cfg);
  CHECK(rec.estimate.value < 0.02);

  auto tra = support_growth(switch_walk_switch(uniform, biased_z(0.7)), {{}, 0LL}, cfg);
  CHECK(tra.estimate.value > 0.1);

  SimConfig one{1, 1000, 1};
  auto det = support_growth(FlipThenRight{}, {{}, {0}}, one);
  CHECK(det.estimate.value == 1.0);
}

TEST_CASE("range sequence: examples and invariants") {
  // deterministic rightward path
  std::vector<long long> right = {0, 1, 2, 3, 4};
  auto rr = range_sequence(right);
  CHECK(rr == std::vector<unsigned long long>{1, 2, 3, 4});

  // back-and-forth path: X_0..X_3 = 0,1,0,1
  std::vector<long long> forth = {0, 1, 0, 1};
  auto rf = range_sequence(forth);
  CHECK(rf == std::vector<unsigned long long>{1, 2, 2});

  auto k = srw(LatticeGraph(1));
  RngStream rng(5, 0);
  auto traj = run_trajectory(k, k.graph.origin(), 300, rng);
  auto rs = range_sequence(traj.states);
  for (std::size_t j = 0; j < rs.size(); ++j) {
    CHECK(rs[j] <= j + 1);
    if (j > 0) CHECK(rs[j] >= rs[j - 1]);
  }
}

TEST_CASE("range of the SRW on Z scales like sqrt(8n/pi)") {
  SimConfig cfg{29, 10000, 200};
  auto k = srw(LatticeGraph(1));
  auto res = run_trials(cfg, [&](int, RngStream& rng) {
    auto cur = k.graph.origin();
    detail::RangeTracker<std::vector<long long>> tracker;
    for (long long i = 0; i < cfg.horizon; ++i) {
      k.step(cur, rng);
      tracker.add(cur);
    }
    return static_cast<double>(tracker.finalize());
  });
  double mean = summarize(res).value;
  double predicted = std::sqrt(8.0 * cfg.horizon / std::acos(-1.0));
  CHECK(std::abs(mean - predicted) / predicted < 0.2);
}

TEST_CASE("sws return probability: oracle, DP cross-check, Monte Carlo") {
  auto base = srw(LatticeGraph(1));
  auto x0 = base.graph.origin();

  SimConfig cfg{17, 0, 40000};
  auto at0 = sws_return_probability(base, x0, 0, cfg);
  CHECK(at0.estimate.value == 1.0);

  // the exact enumeration over the four 2-step paths gives 1/8, and the
  // full switch-walk-switch chain agrees exactly
  CHECK(exact_sws_return(base, x0, 2) == Catch::Approx(0.125).margin(1e-15));
  CHECK(direct_sws_return_dp(2) == Catch::Approx(0.125).margin(1e-15));
  for (int n = 1; n <= 4; ++n) {
    CHECK(exact_sws_return(base, x0, n) ==
          Catch::Approx(direct_sws_return_dp(n)).margin(1e-13));
  }

  for (int n : {1, 2, 3, 4}) {
    auto est = sws_return_probability(base, x0, n, cfg);
    double exact = exact_sws_return(base, x0, n);
    CHECK(std::abs(est.estimate.value - exact) <= 4 * est.estimate.std_error + 1e-12);
  }
}

TEST_CASE("laplace transform of the range") {
  auto base = srw(LatticeGraph(1));
  auto x0 = base.graph.origin();
  SimConfig cfg{31, 0, 2000};

  auto t0 = laplace_range(base, x0, 0.0, 50, cfg);
  CHECK(t0.estimate.value == 1.0);

  auto th = laplace_range(base, x0, 0.5, 200, cfg);
  auto t1 = laplace_range(base, x0, 1.0, 200, cfg);
  CHECK(t1.estimate.value <= th.estimate.value);

  CHECK_THROWS_AS(laplace_range(base, x0, -1.0, 10, cfg), ValidationError);
}

TEST_CASE("induced chain on the spine") {
  auto k = oriented_tree_kernel(2);

  RngStream rng(3, 0);
  auto traj = run_trajectory(k, k.tree.origin(), 4000, rng);
  auto ic = induced_chain(traj.states);
  REQUIRE_FALSE(ic.truncated);
  REQUIRE(ic.y.size() >= 2);
  CHECK(ic.y[0] == 0);
  CHECK(ic.y[1] == 1);
  for (std::size_t i = 1; i < ic.y.size(); ++i) {
    CHECK(std::llabs(ic.y[i] - ic.y[i - 1]) == 1);
    if (ic.y[i - 1] == 0) CHECK(ic.y[i] == 1);  // q(0,1) = 1
  }

  // no exit in a zero-step trajectory
  RngStream rng2(3, 1);
  auto tiny = run_trajectory(k, k.tree.origin(), 0, rng2);
  CHECK(induced_chain(tiny.states).truncated);

  // up-step frequency q/(q+1) away from the reflecting origin
  long long ups = 0, total = 0;
  for (const auto& run : induced_chain_pooled(k, 3, 1'000'000, 3000, 20)) {
    for (std::size_t i = 1; i < run.y.size(); ++i) {
      if (run.y[i - 1] == 0) continue;
      ++total;
      if (run.y[i] > run.y[i - 1]) ++ups;
    }
  }
  REQUIRE(total >= 2000);
  double freq = static_cast<double>(ups) / static_cast<double>(total);
  double p = 2.0 / 3.0;
  CHECK(std::abs(freq - p) <= 4 * std::sqrt(p * (1 - p) / static_cast<double>(total)));
}

TEST_CASE("cut points: examples, brute-force agreement, density") {
  std::vector<long long> rising = {0, 1, 2, 3, 4, 5};
  auto cr = cut_points(rising, 0);
  CHECK(cr.times == std::vector<std::size_t>{0, 1, 2, 3, 4});

  std::vector<long long> path = {0, 1, 0, 1, 2};
  auto cp = cut_points(path, 0);
  CHECK(cp.times == std::vector<std::size_t>{3});
  CHECK(cp.values == std::vector<long long>{1});

  auto k = oriented_tree_kernel(2);
  RngStream rng(47, 0);
  auto stream = induced_chain_stream(k, 5'000'000, 3000, rng);
  REQUIRE(stream.y.size() >= 500);
  auto report = cut_points(stream.y);
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    CHECK(is_cut_time_brute(stream.y, report.times[i]));
    CHECK(stream.y[report.times[i]] == report.values[i]);
  }
  // spatial density of cut points near 1 - 1/q = 1/2
  CHECK(report.density > 0.35);
  CHECK(report.density < 0.65);
}

TEST_CASE("limit configuration diagnostics") {
  LatticeGraph g(1);
  auto uniform = LampKernel::uniform();

  // zero horizon: initial configuration, stabilization time 0
  std::vector<LampState<std::vector<long long>>> still{{{}, {0}}};
  auto zero = limit_configuration(g, still, 2);
  CHECK(zero.config.empty());
  CHECK(zero.stabilization_time == 0);
  CHECK_FALSE(zero.censored);

  // transient base: stabilization reported in > 95% of trials
  auto kt = switch_walk_switch(uniform, biased_z(0.8));
  int stabilized = 0;
  const int trials = 60;
  for (int i = 0; i < trials; ++i) {
    RngStream rng(71, static_cast<std::uint64_t>(i));
    std::vector<LampState<long long>> traj;
    LampState<long long> cur{{}, 0};
    traj.push_back(cur);
    for (int s = 0; s < 4000; ++s) {
      kt.step(cur, rng);
      traj.push_back(cur);
    }
    struct ZLine {
      using vertex_type = long long;
      vertex_type origin() const { return 0; }
      long long distance(long long a, long long b) const { return std::llabs(a - b); }
    } line;
    auto rep = limit_configuration(line, traj, 2);
    if (!rep.censored) ++stabilized;
  }
  CHECK(stabilized > static_cast<int>(0.95 * trials));

  // recurrent base: censored in the majority of trials at horizon 1000
  auto kr = switch_walk_switch(uniform, srw(LatticeGraph(1)));
  int censored = 0;
  for (int i = 0; i < trials; ++i) {
    RngStream rng(72, static_cast<std::uint64_t>(i));
    std::vector<LampState<std::vector<long long>>> traj;
    LampState<std::vector<long long>> cur{{}, {0}};
    traj.push_back(cur);
    for (int s = 0; s < 1000; ++s) {
      kr.step(cur, rng);
      traj.push_back(cur);
    }
    auto rep = limit_configuration(g, traj, 2);
    if (rep.censored) ++censored;
  }
  CHECK(censored > trials / 2);
}
