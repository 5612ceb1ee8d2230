#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/graph.hpp"

// The wreath product Z_2 wr G as a graph: states are (lamp
// configuration, position) pairs, a step either moves the walker to a
// base neighbor or flips the lamp at the current position.

namespace ww {

// Finitely supported {0,1}-configuration, stored as the sorted set of
// vertices whose lamp is on.
template <class V>
struct LampConfig {
  std::vector<V> support;  // sorted, unique

  static LampConfig from(std::vector<V> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return LampConfig{std::move(vs)};
  }

  bool on(const V& v) const { return std::binary_search(support.begin(), support.end(), v); }

  void toggle(const V& v) {
    auto it = std::lower_bound(support.begin(), support.end(), v);
    if (it != support.end() && *it == v) {
      support.erase(it);
    } else {
      support.insert(it, v);
    }
  }

  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }

  auto operator<=>(const LampConfig&) const = default;
};

template <class V>
LampConfig<V> symmetric_difference(const LampConfig<V>& a, const LampConfig<V>& b) {
  LampConfig<V> out;
  std::set_symmetric_difference(a.support.begin(), a.support.end(), b.support.begin(),
                                b.support.end(), std::back_inserter(out.support));
  return out;
}

template <class V>
struct LampState {
  LampConfig<V> lamps;
  V position{};

  auto operator<=>(const LampState&) const = default;
};

template <class V>
std::size_t hash_of(const LampConfig<V>& c) {
  std::size_t seed = 0x1a2b3c4d;
  for (const auto& v : c.support) hash_combine(seed, hash_of(v));
  return seed;
}

template <class V>
std::size_t hash_of(const LampState<V>& s) {
  std::size_t seed = hash_of(s.lamps);
  hash_combine(seed, hash_of(s.position));
  return seed;
}

template <class G>
LampState<typename G::vertex_type> lamp_origin(const G& g) {
  return {{}, g.origin()};
}

// Two states are adjacent iff the positions are base-neighbors with
// equal configurations, or the positions agree and the configurations
// differ exactly at that position.
template <class G>
bool is_adjacent(const G& g, const LampState<typename G::vertex_type>& s,
                 const LampState<typename G::vertex_type>& t) {
  if (s.position == t.position) {
    auto d = symmetric_difference(s.lamps, t.lamps);
    return d.support.size() == 1 && d.support[0] == s.position;
  }
  if (s.lamps != t.lamps) return false;
  return g.distance(s.position, t.position) == 1;
}

// deg(position) move-neighbors plus the single switch-neighbor.
template <class G>
std::vector<LampState<typename G::vertex_type>> lamplighter_neighbors(
    const G& g, const LampState<typename G::vertex_type>& s) {
  std::vector<LampState<typename G::vertex_type>> out;
  for (auto& w : g.neighbors(s.position)) out.push_back({s.lamps, std::move(w)});
  auto flipped = s;
  flipped.lamps.toggle(s.position);
  out.push_back(std::move(flipped));
  return out;
}

struct LampDistance {
  long long value = 0;
  bool exact = true;
};

namespace detail {

// Cost of the open walk start -> (visit every site) -> finish given the
// pairwise base distances; exact subset DP (Held-Karp).
inline long long tour_dp(const std::vector<long long>& from_start,
                         const std::vector<long long>& to_finish,
                         const std::vector<std::vector<long long>>& between,
                         long long start_to_finish) {
  const int m = static_cast<int>(from_start.size());
  if (m == 0) return start_to_finish;
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<std::vector<long long>> dp(1u << m, std::vector<long long>(m, inf));
  for (int j = 0; j < m; ++j) dp[1u << j][j] = from_start[j];
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask & (1u << j)) || dp[mask][j] >= inf) continue;
      for (int k = 0; k < m; ++k) {
        if (mask & (1u << k)) continue;
        unsigned next = mask | (1u << k);
        long long cand = dp[mask][j] + between[j][k];
        if (cand < dp[next][k]) dp[next][k] = cand;
      }
    }
  }
  long long best = inf;
  unsigned full = (1u << m) - 1;
  for (int j = 0; j < m; ++j) best = std::min(best, dp[full][j] + to_finish[j]);
  return best;
}

// Nearest-neighbor construction plus 2-opt on the visiting order;
// an upper bound for large symmetric differences.
inline long long tour_heuristic(const std::vector<long long>& from_start,
                                const std::vector<long long>& to_finish,
                                const std::vector<std::vector<long long>>& between) {
  const int m = static_cast<int>(from_start.size());
  std::vector<int> order;
  std::vector<bool> used(m, false);
  long long cur_cost = 0;
  int cur = -1;
  for (int step = 0; step < m; ++step) {
    int best = -1;
    long long best_d = std::numeric_limits<long long>::max();
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      long long d = cur < 0 ? from_start[j] : between[cur][j];
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    order.push_back(best);
    cur_cost += best_d;
    cur = best;
  }
  auto endpoint_cost = [&](const std::vector<int>& ord) {
    long long c = from_start[ord.front()] + to_finish[ord.back()];
    for (int i = 0; i + 1 < m; ++i) c += between[ord[i]][ord[i + 1]];
    return c;
  };
  long long best_total = endpoint_cost(order);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        std::reverse(order.begin() + i, order.begin() + j + 1);
        long long c = endpoint_cost(order);
        if (c < best_total) {
          best_total = c;
          improved = true;
        } else {
          std::reverse(order.begin() + i, order.begin() + j + 1);
        }
      }
    }
  }
  return best_total;
}

}  // namespace detail

// The lamplighter metric: shortest walk from s.position to t.position
// visiting every vertex where the configurations differ, plus the
// number of differing lamps. Exact by subset DP for |diff| <= 12,
// otherwise a flagged upper bound.
template <class G>
LampDistance lamplighter_distance(const G& g, const LampState<typename G::vertex_type>& s,
                                  const LampState<typename G::vertex_type>& t) {
  auto diff = symmetric_difference(s.lamps, t.lamps);
  const auto& sites = diff.support;
  const int m = static_cast<int>(sites.size());
  std::vector<long long> from_start(m), to_finish(m);
  std::vector<std::vector<long long>> between(m, std::vector<long long>(m, 0));
  for (int j = 0; j < m; ++j) {
    from_start[j] = g.distance(s.position, sites[j]);
    to_finish[j] = g.distance(sites[j], t.position);
    for (int k = 0; k < m; ++k) between[j][k] = g.distance(sites[j], sites[k]);
  }
  long long direct = g.distance(s.position, t.position);
  if (m <= 12) {
    long long walk = detail::tour_dp(from_start, to_finish, between, direct);
    return {walk + m, true};
  }
  long long walk = detail::tour_heuristic(from_start, to_finish, between);
  return {walk + m, false};
}

// Lattice translation, acting diagonally on position and support; the
// group action of Z^d on Z_2 wr Z^d restricted to translations.
inline LampState<LatticeGraph::vertex_type> translate(const LatticeGraph& g,
                                                      const std::vector<long long>& shift,
                                                      LampState<LatticeGraph::vertex_type> s) {
  require(static_cast<int>(shift.size()) == g.dim, "translate: shift has wrong dimension");
  g.check(s.position);
  for (int i = 0; i < g.dim; ++i) s.position[i] += shift[i];
  for (auto& v : s.lamps.support) {
    g.check(v);
    for (int i = 0; i < g.dim; ++i) v[i] += shift[i];
  }
  std::sort(s.lamps.support.begin(), s.lamps.support.end());
  return s;
}

}  // namespace ww
