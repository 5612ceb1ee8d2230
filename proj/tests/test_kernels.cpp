#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "wordwalks/kernel.hpp"
#include "wordwalks/spectral.hpp"

using namespace ww;

namespace {

template <class K>
double row_sum(const K& k, const typename K::state_type& s) {
  double total = 0;
  for (auto& [t, p] : k.enumerate(s)) {
    CHECK(p > 0);
    total += p;
  }
  return total;
}

// Rows must sum to 1 along a short random trajectory of states.
template <class K>
void check_stochastic_along_walk(const K& k, typename K::state_type s, int states,
                                 std::uint64_t seed) {
  RngStream rng(seed, 0);
  for (int i = 0; i < states; ++i) {
    CHECK(row_sum(k, s) == Catch::Approx(1.0).margin(1e-12));
    s = k.sample(s, rng);
  }
}

// Empirical sampler frequencies against the enumeration, 4 standard
// errors at n samples.
template <class K>
void check_sampler_matches_enumeration(const K& k, const typename K::state_type& s, int n,
                                       std::uint64_t seed) {
  RngStream rng(seed, 1);
  std::map<typename K::state_type, long long> counts;
  for (int i = 0; i < n; ++i) ++counts[k.sample(s, rng)];
  for (auto& [t, p] : k.enumerate(s)) {
    double freq = static_cast<double>(counts[t]) / n;
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(freq - p) <= 4 * se + 1e-12);
  }
}

}  // namespace

TEST_CASE("srw puts 1/deg on each neighbor") {
  auto kz = srw(LatticeGraph(1));
  auto e = kz.enumerate({0});
  REQUIRE(e.size() == 2);
  CHECK(e[0].second == Catch::Approx(0.5));
  CHECK(e[1].second == Catch::Approx(0.5));

  auto kt = srw(HomTree(3));
  auto et = kt.enumerate("");
  REQUIRE(et.size() == 3);
  for (auto& [t, p] : et) CHECK(p == Catch::Approx(1.0 / 3));

  check_stochastic_along_walk(kz, {0}, 100, 11);
  check_stochastic_along_walk(kt, "", 100, 12);
}

TEST_CASE("biased walk on Z") {
  auto k = biased_z(0.7);
  auto e = k.enumerate(0);
  REQUIRE(e.size() == 2);
  CHECK(e[0].first == -1);
  CHECK(e[0].second == Catch::Approx(0.3));
  CHECK(e[1].first == 1);
  CHECK(e[1].second == Catch::Approx(0.7));

  // mean one-step increment is 2p-1
  double mean = 0;
  for (auto& [t, p] : e) mean += p * static_cast<double>(t);
  CHECK(mean == Catch::Approx(0.4));

  CHECK_THROWS_AS(biased_z(0.5), ValidationError);
  CHECK_THROWS_AS(biased_z(1.0), ValidationError);
  check_stochastic_along_walk(k, 0, 100, 13);
}

TEST_CASE("oriented tree kernel: 1/2 to the father, 1/(2q) to each son") {
  auto k = oriented_tree_kernel(2);
  auto e = k.enumerate(k.tree.origin());
  REQUIRE(e.size() == 3);
  CHECK(e[0].second == Catch::Approx(0.5));  // father
  CHECK(e[1].second == Catch::Approx(0.25));
  CHECK(e[2].second == Catch::Approx(0.25));

  // height increment is +-1 with probability 1/2 each
  double up = 0, down = 0;
  for (auto& [t, p] : e) {
    (k.tree.height(t) > 0 ? up : down) += p;
  }
  CHECK(up == Catch::Approx(0.5));
  CHECK(down == Catch::Approx(0.5));

  CHECK_THROWS_AS(oriented_tree_kernel(1), ValidationError);
  check_stochastic_along_walk(k, k.tree.origin(), 100, 14);
}

TEST_CASE("modular drift, exactly") {
  for (int q = 2; q <= 6; ++q) {
    CHECK(modular_drift(oriented_tree_kernel(q)) == 0.0);
  }
  CHECK(modular_drift(OrientedTreeKernel(3, Rational(2, 3))) == -1.0 / 3.0);
  CHECK(modular_drift(OrientedTreeKernel(3, Rational(1, 3))) == 1.0 / 3.0);
}

TEST_CASE("walk-or-switch enumeration from the zero configuration") {
  auto k = walk_or_switch(0.5, srw(LatticeGraph(1)), LampKernel::uniform());
  LampState<std::vector<long long>> o{{}, {0}};
  auto e = k.enumerate(o);
  REQUIRE(e.size() == 4);
  std::map<std::pair<std::vector<long long>, std::size_t>, double> seen;
  for (auto& [t, p] : e) seen[{t.position, t.lamps.size()}] = p;
  CHECK(seen[{{1}, 0}] == Catch::Approx(0.25));   // move right
  CHECK(seen[{{-1}, 0}] == Catch::Approx(0.25));  // move left
  CHECK(seen[{{0}, 1}] == Catch::Approx(0.25));   // flip here
  CHECK(seen[{{0}, 0}] == Catch::Approx(0.25));   // hold

  CHECK_THROWS_AS(walk_or_switch(0.0, srw(LatticeGraph(1)), LampKernel::uniform()),
                  ValidationError);
  check_stochastic_along_walk(k, o, 100, 15);
  RngStream rng(16, 0);
  auto s = o;
  for (int i = 0; i < 3; ++i) {
    check_sampler_matches_enumeration(k, s, 100000, 160 + i);
    s = k.sample(s, rng);
  }
}

TEST_CASE("switch-walk-switch: 8 distinct equal-probability targets") {
  auto k = switch_walk_switch(LampKernel::uniform(), srw(LatticeGraph(1)));
  LampState<std::vector<long long>> o{{}, {0}};
  auto e = k.enumerate(o);
  REQUIRE(e.size() == 8);
  for (auto& [t, p] : e) CHECK(p == Catch::Approx(0.125));

  check_stochastic_along_walk(k, o, 100, 17);
  check_sampler_matches_enumeration(k, o, 100000, 18);

  // three states per kernel for the sampler check
  RngStream rng(19, 0);
  auto s = o;
  for (int i = 0; i < 2; ++i) {
    s = k.sample(s, rng);
    check_sampler_matches_enumeration(k, s, 100000, 20 + i);
  }
}

TEST_CASE("oriented radial lumping reproduces the tree walk exactly") {
  auto k = oriented_tree_kernel(2);
  OrientedRadialChain lumped(k);

  // the lumped transition law is stochastic and matches by hand
  auto e0 = lumped.enumerate({0, 0});
  REQUIRE(e0.size() == 2);
  auto e5 = lumped.enumerate({5, 0});
  REQUIRE(e5.size() == 3);
  double total = 0;
  for (auto& [t, p] : e5) total += p;
  CHECK(total == Catch::Approx(1.0).margin(1e-15));

  // even-time return probabilities to the origin agree with the full
  // tree DP, exactly (the lumping is a strong lumping of the kernel)
  auto direct = spectral_radius_dp(k, k.tree.origin(), 12);
  auto viaLump = spectral_radius_dp(lumped, {}, 12);
  REQUIRE(direct.roots.size() == viaLump.roots.size());
  for (std::size_t m = 1; m < direct.roots.size(); ++m) {
    CHECK(direct.roots[m] == Catch::Approx(viaLump.roots[m]).margin(1e-13));
  }
}

TEST_CASE("lamplighter moves stay within one step and two endpoint flips") {
  auto check_local = [](const auto& k, const auto& start) {
    LatticeGraph g(1);
    RngStream rng(21, 0);
    auto s = start;
    for (int i = 0; i < 40; ++i) {
      for (auto& [t, p] : k.enumerate(s)) {
        CHECK(g.distance(s.position, t.position) <= 1);
        auto d = symmetric_difference(s.lamps, t.lamps);
        CHECK(d.size() <= 2);
        for (const auto& v : d.support) {
          CHECK((v == s.position || v == t.position));
        }
      }
      s = k.sample(s, rng);
    }
  };
  LampState<std::vector<long long>> o{{}, {0}};
  check_local(walk_or_switch(0.5, srw(LatticeGraph(1)), LampKernel::uniform()), o);
  check_local(switch_walk_switch(LampKernel::uniform(), srw(LatticeGraph(1))), o);
}

TEST_CASE("base projection recovers the base walk") {
  LampState<std::vector<long long>> o{{}, {0}};

  auto wos = walk_or_switch(0.3, srw(LatticeGraph(1)), LampKernel::uniform());
  auto proj = project_base(wos, o);
  REQUIRE(proj.size() == 3);
  std::map<std::vector<long long>, double> m(proj.begin(), proj.end());
  CHECK(m[{-1}] == Catch::Approx(0.15));
  CHECK(m[{0}] == Catch::Approx(0.7));
  CHECK(m[{1}] == Catch::Approx(0.15));

  auto sws = switch_walk_switch(LampKernel::uniform(), srw(LatticeGraph(1)));
  auto proj2 = project_base(sws, o);
  REQUIRE(proj2.size() == 2);
  std::map<std::vector<long long>, double> m2(proj2.begin(), proj2.end());
  CHECK(m2[{-1}] == Catch::Approx(0.5));
  CHECK(m2[{1}] == Catch::Approx(0.5));

  double total = 0;
  for (auto& [v, p] : proj) total += p;
  CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("reversibility checks") {
  auto kz = srw(LatticeGraph(2));
  CHECK(check_reversible(
      kz, [](const auto&) { return 4.0; }, kz.graph.origin(), 3));

  auto kb = biased_z(0.7);
  CHECK_FALSE(check_reversible(
      kb, [](long long) { return 1.0; }, 0, 4));
  CHECK(check_reversible(
      kb, [](long long x) { return std::pow(0.7 / 0.3, static_cast<double>(x)); }, 0, 4));
}

TEST_CASE("homtree radial chain matches the tree walk's distance law") {
  HomTreeRadialChain radial(3);
  auto e = radial.enumerate(5);
  REQUIRE(e.size() == 2);
  CHECK(e[0].second == Catch::Approx(1.0 / 3));
  CHECK(e[1].second == Catch::Approx(2.0 / 3));
  auto e0 = radial.enumerate(0);
  REQUIRE(e0.size() == 1);
  CHECK(e0[0].second == Catch::Approx(1.0));

  // empirical check against the distance process of the tree SRW
  auto tree_walk = srw(HomTree(3));
  RngStream rng(22, 0);
  std::string pos;
  int ups = 0, total = 0;
  for (int i = 0; i < 20000; ++i) {
    auto next = tree_walk.sample(pos, rng);
    if (!pos.empty()) {
      ++total;
      if (next.size() > pos.size()) ++ups;
    }
    pos = next;
  }
  double freq = static_cast<double>(ups) / total;
  CHECK(std::abs(freq - 2.0 / 3) <= 4 * std::sqrt((2.0 / 9) / total));
}
