#pragma once

#include <algorithm>
#include <concepts>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/graph.hpp"
#include "wordwalks/lamplighter.hpp"
#include "wordwalks/rng.hpp"

// Transition kernels defined by exact local enumeration plus a sampler
// whose distribution equals the enumeration. State spaces are infinite,
// so matrices are never materialized globally; the spectral module
// truncates on demand.

namespace ww {

template <class S>
using Enumeration = std::vector<std::pair<S, double>>;

namespace detail {

template <class S>
void sort_and_merge(Enumeration<S>& e) {
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Enumeration<S> merged;
  for (auto& term : e) {
    if (term.second <= 0) continue;
    if (!merged.empty() && merged.back().first == term.first) {
      merged.back().second += term.second;
    } else {
      merged.push_back(std::move(term));
    }
  }
  e = std::move(merged);
}

}  // namespace detail

// Inverse-CDF sampling from an enumeration; the fallback sampler every
// kernel agrees with.
template <class K>
typename K::state_type sample_from_enumeration(const K& k, const typename K::state_type& s,
                                               RngStream& rng) {
  auto e = k.enumerate(s);
  double u = rng.next_double();
  double acc = 0;
  for (auto& [t, p] : e) {
    acc += p;
    if (u < acc) return t;
  }
  return e.back().first;  // guard against rounding at u ~ 1
}

// ----------------------------------------------------------------------
// Simple random walk on a base graph: uniform over neighbors.
template <class G>
struct Srw {
  using state_type = typename G::vertex_type;

  G graph;

  Enumeration<state_type> enumerate(const state_type& s) const {
    auto nb = graph.neighbors(s);
    Enumeration<state_type> out;
    out.reserve(nb.size());
    double p = 1.0 / static_cast<double>(nb.size());
    for (auto& w : nb) out.emplace_back(std::move(w), p);
    return out;
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    auto nb = graph.neighbors(s);
    return nb[rng.next_below(nb.size())];
  }

  void step(state_type& s, RngStream& rng) const { s = sample(s, rng); }
};

// In-place stepping for the lattice avoids reallocating coordinate
// vectors in long simulation loops.
template <>
inline void Srw<LatticeGraph>::step(state_type& s, RngStream& rng) const {
  std::uint64_t r = rng.next_below(2ull * graph.dim);
  s[r >> 1] += (r & 1) ? +1 : -1;
}

// In-place stepping on the tree: append or cancel one involutive
// generator instead of materializing the neighbor list.
template <>
inline void Srw<HomTree>::step(state_type& s, RngStream& rng) const {
  char c = graph.letter(static_cast<int>(rng.next_below(graph.degree_m)));
  if (!s.empty() && s.back() == c) {
    s.pop_back();
  } else {
    s.push_back(c);
  }
}

template <class G>
Srw<G> srw(G g) {
  return Srw<G>{std::move(g)};
}

// ----------------------------------------------------------------------
// Random walk on Z with drift to the right: p(x,x+1)=p, p(x,x-1)=1-p.
struct BiasedZ {
  using state_type = long long;

  double p;

  explicit BiasedZ(double p_) : p(p_) {
    require(p_ > 0.5 && p_ < 1.0, "biased_z: p must lie in (1/2, 1)");
  }

  Enumeration<state_type> enumerate(const state_type& s) const {
    return {{s - 1, 1.0 - p}, {s + 1, p}};
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    return rng.bernoulli(p) ? s + 1 : s - 1;
  }

  void step(state_type& s, RngStream& rng) const { s += rng.bernoulli(p) ? +1 : -1; }
};

inline BiasedZ biased_z(double p) { return BiasedZ(p); }

// ----------------------------------------------------------------------
// Nearest-neighbour walk on the oriented tree: father with probability
// pf, each of the q sons with (1-pf)/q. The default pf = 1/2 is the
// zero-modular-drift kernel whose height projection is the SRW on Z.
struct OrientedTreeKernel {
  using state_type = OrientedTree::Vertex;

  OrientedTree tree;
  Rational father_prob;

  explicit OrientedTreeKernel(int q, Rational pf = Rational(1, 2))
      : tree(q), father_prob(pf) {
    require(pf.num > 0 && pf.num < pf.den, "oriented kernel: father probability must be in (0,1)");
  }

  Rational son_prob() const {
    return Rational(father_prob.den - father_prob.num, father_prob.den * tree.branching);
  }

  Enumeration<state_type> enumerate(const state_type& s) const {
    Enumeration<state_type> out;
    out.emplace_back(tree.father(s), father_prob.to_double());
    double ps = son_prob().to_double();
    for (auto& son : tree.sons(s)) out.emplace_back(std::move(son), ps);
    return out;
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    state_type t = s;
    step(t, rng);
    return t;
  }

  void step(state_type& s, RngStream& rng) const {
    if (rng.bernoulli(father_prob.to_double())) {
      if (!s.digits.empty()) {
        s.digits.pop_back();
      } else {
        ++s.spine;
      }
      return;
    }
    std::uint64_t c = rng.next_below(tree.branching);
    if (s.digits.empty() && s.spine >= 1) {
      if (c == 0) {
        --s.spine;
      } else {
        s.digits.push_back(static_cast<char>('0' + (c - 1)));
      }
    } else {
      s.digits.push_back(static_cast<char>('0' + c));
    }
  }
};

inline OrientedTreeKernel oriented_tree_kernel(int q) { return OrientedTreeKernel(q); }

// Expected one-step height increment, exactly. All one-step
// probabilities of this kernel are rational, so the drift is summed as
// a fraction; the default kernel yields exactly 0.
inline double modular_drift(const OrientedTreeKernel& k) {
  Rational up = Rational(k.tree.branching, 1) * k.son_prob();
  Rational drift = up - k.father_prob;
  return drift.to_double();
}

// ----------------------------------------------------------------------
// 2x2 stochastic kernel on the lamp states {0,1}.
struct LampKernel {
  double p[2][2];

  LampKernel(double p00, double p01, double p10, double p11) : p{{p00, p01}, {p10, p11}} {
    for (int i = 0; i < 2; ++i) {
      require(p[i][0] >= 0 && p[i][1] >= 0, "lamp kernel: negative entry");
      require(std::abs(p[i][0] + p[i][1] - 1.0) <= 1e-15, "lamp kernel: rows must sum to 1");
    }
  }

  static LampKernel uniform() { return LampKernel(0.5, 0.5, 0.5, 0.5); }

  bool is_uniform() const {
    return p[0][0] == 0.5 && p[0][1] == 0.5 && p[1][0] == 0.5 && p[1][1] == 0.5;
  }

  double flip(int cur) const { return p[cur][1 - cur]; }
  double keep(int cur) const { return p[cur][cur]; }
};

// ----------------------------------------------------------------------
// Walk-or-switch kernel P_a = a * lift(base) + (1-a) * lift(lamp):
// toss a coin; heads moves the walker by the base kernel, tails
// re-draws the lamp at the current position. The lamp kernel's
// diagonal becomes a hold probability at the same state, which is the
// reading under which P_a is stochastic.
template <class BaseK>
struct WalkOrSwitch {
  using base_state = typename BaseK::state_type;
  using state_type = LampState<base_state>;

  double move_prob;
  BaseK base;
  LampKernel lamp;

  WalkOrSwitch(double a, BaseK b, LampKernel l)
      : move_prob(a), base(std::move(b)), lamp(l) {
    require(a > 0 && a < 1, "walk_or_switch: a must lie in (0,1)");
  }

  Enumeration<state_type> enumerate(const state_type& s) const {
    Enumeration<state_type> out;
    for (auto& [y, p] : base.enumerate(s.position)) {
      out.push_back({{s.lamps, y}, move_prob * p});
    }
    int cur = s.lamps.on(s.position) ? 1 : 0;
    state_type flipped = s;
    flipped.lamps.toggle(s.position);
    out.push_back({std::move(flipped), (1 - move_prob) * lamp.flip(cur)});
    out.push_back({s, (1 - move_prob) * lamp.keep(cur)});
    detail::sort_and_merge(out);
    return out;
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    state_type t = s;
    step(t, rng);
    return t;
  }

  void step(state_type& s, RngStream& rng) const {
    if (rng.bernoulli(move_prob)) {
      base.step(s.position, rng);
      return;
    }
    int cur = s.lamps.on(s.position) ? 1 : 0;
    if (rng.bernoulli(lamp.flip(cur))) s.lamps.toggle(s.position);
  }
};

template <class BaseK>
WalkOrSwitch<BaseK> walk_or_switch(double a, BaseK base, LampKernel lamp) {
  return WalkOrSwitch<BaseK>(a, std::move(base), lamp);
}

// ----------------------------------------------------------------------
// Switch-walk-switch kernel Q = lift(lamp) * lift(base) * lift(lamp):
// re-draw the lamp here, move, re-draw the lamp there.
template <class BaseK>
struct SwitchWalkSwitch {
  using base_state = typename BaseK::state_type;
  using state_type = LampState<base_state>;

  LampKernel lamp;
  BaseK base;

  SwitchWalkSwitch(LampKernel l, BaseK b) : lamp(l), base(std::move(b)) {}

  Enumeration<state_type> enumerate(const state_type& s) const {
    Enumeration<state_type> out;
    int cur = s.lamps.on(s.position) ? 1 : 0;
    for (int f1 = 0; f1 < 2; ++f1) {
      double q1 = f1 ? lamp.flip(cur) : lamp.keep(cur);
      if (q1 <= 0) continue;
      state_type mid = s;
      if (f1) mid.lamps.toggle(s.position);
      for (auto& [y, p] : base.enumerate(s.position)) {
        int there = mid.lamps.on(y) ? 1 : 0;
        for (int f2 = 0; f2 < 2; ++f2) {
          double q2 = f2 ? lamp.flip(there) : lamp.keep(there);
          if (q2 <= 0) continue;
          state_type fin{mid.lamps, y};
          if (f2) fin.lamps.toggle(y);
          out.push_back({std::move(fin), q1 * p * q2});
        }
      }
    }
    detail::sort_and_merge(out);
    return out;
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    state_type t = s;
    step(t, rng);
    return t;
  }

  void step(state_type& s, RngStream& rng) const {
    int cur = s.lamps.on(s.position) ? 1 : 0;
    if (rng.bernoulli(lamp.flip(cur))) s.lamps.toggle(s.position);
    base.step(s.position, rng);
    int there = s.lamps.on(s.position) ? 1 : 0;
    if (rng.bernoulli(lamp.flip(there))) s.lamps.toggle(s.position);
  }
};

template <class BaseK>
SwitchWalkSwitch<BaseK> switch_walk_switch(LampKernel lamp, BaseK base) {
  return SwitchWalkSwitch<BaseK>(lamp, std::move(base));
}

// ----------------------------------------------------------------------
// Marginal of a lamplighter kernel on positions, started from the zero
// configuration: p_G(x,x') = sum over eta' of p((0,x),(eta',x')).
template <class LK>
auto project_base(const LK& k, const typename LK::state_type& zero_at_x) {
  using V = decltype(zero_at_x.position);
  std::map<V, double> mass;
  for (auto& [t, p] : k.enumerate(zero_at_x)) mass[t.position] += p;
  std::vector<std::pair<V, double>> out(mass.begin(), mass.end());
  return out;
}

template <class LK, class V>
  requires(!std::same_as<V, typename LK::state_type>)
auto project_base(const LK& k, const V& x) {
  return project_base(k, LampState<V>{{}, x});
}

// ----------------------------------------------------------------------
// Reversibility check: m(x) p(x,y) = m(y) p(y,x) for all pairs in the
// ball of the given radius around start (in the support graph of the
// kernel), to relative tolerance 1e-12.
template <class K, class Weight>
bool check_reversible(const K& k, Weight m, const typename K::state_type& start, int radius) {
  using S = typename K::state_type;
  std::vector<S> order{start};
  std::unordered_map<S, int, HashOf> depth{{start, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    S s = order[head];
    int d = depth[s];
    if (d == radius) continue;
    for (auto& [t, p] : k.enumerate(s)) {
      if (depth.emplace(t, d + 1).second) order.push_back(t);
    }
  }
  auto prob = [&](const S& a, const S& b) {
    for (auto& [t, p] : k.enumerate(a)) {
      if (t == b) return p;
    }
    return 0.0;
  };
  for (const auto& s : order) {
    double ms = m(s);
    require(ms > 0, "check_reversible: weight must be positive on the ball");
    for (auto& [t, p] : k.enumerate(s)) {
      if (!depth.count(t)) continue;
      double lhs = ms * p;
      double rhs = m(t) * prob(t, s);
      double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (std::abs(lhs - rhs) > 1e-12 * scale) return false;
    }
  }
  return true;
}

// ----------------------------------------------------------------------
// Exact (spine index, subtree depth) lumping of the oriented-tree
// kernel. The transition law of the tree walk depends only on this
// pair, so return probabilities to the origin agree exactly while the
// reachable set grows quadratically instead of exponentially.
struct OrientedRadialChain {
  struct State {
    long long spine = 0;
    long long depth = 0;

    auto operator<=>(const State&) const = default;
  };
  using state_type = State;

  int branching;
  Rational father_prob;

  explicit OrientedRadialChain(const OrientedTreeKernel& k)
      : branching(k.tree.branching), father_prob(k.father_prob) {}

  Enumeration<state_type> enumerate(const state_type& s) const {
    require(s.spine >= 0 && s.depth >= 0, "oriented lumping: bad state");
    double pf = father_prob.to_double();
    double ps = 1.0 - pf;
    if (s.depth >= 1) {
      return {{{s.spine, s.depth - 1}, pf}, {{s.spine, s.depth + 1}, ps}};
    }
    if (s.spine == 0) {
      return {{{1, 0}, pf}, {{0, 1}, ps}};
    }
    double down_spine = ps / branching;
    Enumeration<state_type> out = {{{s.spine - 1, 0}, down_spine}, {{s.spine + 1, 0}, pf}};
    if (branching > 1) out.push_back({{s.spine, 1}, ps - down_spine});
    detail::sort_and_merge(out);
    return out;
  }

  state_type sample(const state_type& s, RngStream& rng) const {
    return sample_from_enumeration(*this, s, rng);
  }

  void step(state_type& s, RngStream& rng) const { s = sample(s, rng); }
};

inline std::size_t hash_of(const OrientedRadialChain::State& s) {
  std::size_t seed = hash_of(s.spine);
  hash_combine(seed, hash_of(s.depth));
  return seed;
}

// ----------------------------------------------------------------------
// Distance-from-origin lumping of the SRW on the homogeneous tree T_M:
// a birth-death chain on Z_+ (up (M-1)/M from r >= 1, reflecting at 0).
// Exact for return probabilities to the origin, and the tractable route
// to the tree's spectral radius: the tree ball of radius n is
// exponential, the lumped chain's is linear.
struct HomTreeRadialChain {
  using state_type = long long;

  int degree_m;

  explicit HomTreeRadialChain(int m) : degree_m(m) {
    require(m >= 3, "radial chain: M must be >= 3");
  }

  Enumeration<state_type> enumerate(const state_type& r) const {
    require(r >= 0, "radial chain: negative radius");
    if (r == 0) return {{1, 1.0}};
    double up = static_cast<double>(degree_m - 1) / degree_m;
    return {{r - 1, 1.0 - up}, {r + 1, up}};
  }

  state_type sample(const state_type& r, RngStream& rng) const {
    if (r == 0) return 1;
    double up = static_cast<double>(degree_m - 1) / degree_m;
    return rng.bernoulli(up) ? r + 1 : r - 1;
  }

  void step(state_type& r, RngStream& rng) const { r = sample(r, rng); }
};

}  // namespace ww
