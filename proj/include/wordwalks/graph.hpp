#pragma once

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordwalks/common.hpp"

// Base-graph families with exact geometry. Every family exposes
//   vertex_type, origin(), degree(), neighbors(v), distance(u,v)
// with canonical vertex encodings so that hash-set membership is exact.

namespace ww {

// ----------------------------------------------------------------------
// Z^d with the L1 (graph) metric. Vertices are integer coordinate
// vectors of length d.
struct LatticeGraph {
  using vertex_type = std::vector<long long>;

  int dim;

  explicit LatticeGraph(int d) : dim(d) { require(d >= 1, "lattice: d must be >= 1"); }

  vertex_type origin() const { return vertex_type(dim, 0); }
  int degree() const { return 2 * dim; }

  void check(const vertex_type& v) const {
    require(static_cast<int>(v.size()) == dim, "lattice: bad vertex encoding");
  }

  std::vector<vertex_type> neighbors(const vertex_type& v) const {
    check(v);
    std::vector<vertex_type> out;
    out.reserve(2 * dim);
    for (int i = 0; i < dim; ++i) {
      for (long long s : {-1LL, +1LL}) {
        vertex_type w = v;
        w[i] += s;
        out.push_back(std::move(w));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  long long distance(const vertex_type& u, const vertex_type& v) const {
    check(u);
    check(v);
    long long d = 0;
    for (int i = 0; i < dim; ++i) d += std::llabs(u[i] - v[i]);
    return d;
  }
};

// ----------------------------------------------------------------------
// The homogeneous tree T_M, realized as the Cayley graph of the free
// product of M copies of Z_2. Vertices are freely reduced words over
// the involutive generators 'a','b',... (no letter repeated adjacently).
struct HomTree {
  using vertex_type = std::string;

  int degree_m;

  explicit HomTree(int m) : degree_m(m) { require(m >= 3, "homtree: M must be >= 3"); }

  vertex_type origin() const { return {}; }
  int degree() const { return degree_m; }

  char letter(int i) const { return static_cast<char>('a' + i); }

  void check(const vertex_type& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
      require(v[i] >= 'a' && v[i] < 'a' + degree_m, "homtree: bad vertex encoding");
      require(i == 0 || v[i] != v[i - 1], "homtree: word not reduced");
    }
  }

  std::vector<vertex_type> neighbors(const vertex_type& v) const {
    check(v);
    std::vector<vertex_type> out;
    out.reserve(degree_m);
    for (int i = 0; i < degree_m; ++i) {
      char c = letter(i);
      if (!v.empty() && v.back() == c) {
        out.push_back(v.substr(0, v.size() - 1));
      } else {
        out.push_back(v + c);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  long long distance(const vertex_type& u, const vertex_type& v) const {
    check(u);
    check(v);
    std::size_t lcp = 0;
    while (lcp < u.size() && lcp < v.size() && u[lcp] == v[lcp]) ++lcp;
    return static_cast<long long>(u.size() + v.size() - 2 * lcp);
  }
};

// ----------------------------------------------------------------------
// The homogeneous tree of degree q+1 with a fixed end omega, seen as the
// geodesic ray from the origin toward omega (the "spine", indexed by
// Z_+) with a tree hanging at each spine vertex. A vertex is the spine
// index where its hanging tree attaches plus the descent string from
// there. Fathers point toward omega; the height function decreases by 1
// toward the father.
struct OrientedTree {
  struct Vertex {
    long long spine = 0;     // spine vertex the hanging tree attaches at
    std::string digits;      // descent path inside that hanging tree

    auto operator<=>(const Vertex&) const = default;
  };
  using vertex_type = Vertex;

  int branching;  // q

  explicit OrientedTree(int q) : branching(q) { require(q >= 2, "oriented: q must be >= 2"); }

  vertex_type origin() const { return {}; }
  int degree() const { return branching + 1; }

  void check(const Vertex& v) const {
    require(v.spine >= 0, "oriented: negative spine index");
    for (std::size_t i = 0; i < v.digits.size(); ++i) {
      int limit = branching;
      // A spine vertex k >= 1 has one son on the spine already, so only
      // q-1 descent branches start there.
      if (i == 0 && v.spine >= 1) limit = branching - 1;
      require(v.digits[i] >= '0' && v.digits[i] < '0' + limit, "oriented: bad digit string");
    }
  }

  Vertex father(const Vertex& v) const {
    check(v);
    if (!v.digits.empty()) return {v.spine, v.digits.substr(0, v.digits.size() - 1)};
    return {v.spine + 1, {}};
  }

  std::vector<Vertex> sons(const Vertex& v) const {
    check(v);
    std::vector<Vertex> out;
    out.reserve(branching);
    if (v.digits.empty() && v.spine >= 1) out.push_back({v.spine - 1, {}});
    int branches = (v.digits.empty() && v.spine >= 1) ? branching - 1 : branching;
    for (int c = 0; c < branches; ++c) {
      out.push_back({v.spine, v.digits + static_cast<char>('0' + c)});
    }
    return out;
  }

  // Father first, then sons in canonical order.
  std::vector<Vertex> neighbors(const Vertex& v) const {
    std::vector<Vertex> out;
    out.reserve(branching + 1);
    out.push_back(father(v));
    for (auto& s : sons(v)) out.push_back(std::move(s));
    return out;
  }

  // Generation number relative to the origin's horocycle.
  long long height(const Vertex& v) const {
    check(v);
    return static_cast<long long>(v.digits.size()) - v.spine;
  }

  // First common vertex of the rays from x and y toward omega.
  Vertex meet(const Vertex& x, const Vertex& y) const {
    check(x);
    check(y);
    if (x.spine != y.spine) return {std::max(x.spine, y.spine), {}};
    std::size_t lcp = 0;
    while (lcp < x.digits.size() && lcp < y.digits.size() && x.digits[lcp] == y.digits[lcp]) ++lcp;
    return {x.spine, x.digits.substr(0, lcp)};
  }

  long long distance(const Vertex& u, const Vertex& v) const {
    return height(u) + height(v) - 2 * height(meet(u, v));
  }
};

inline std::size_t hash_of(const OrientedTree::Vertex& v) {
  std::size_t seed = hash_of(v.spine);
  hash_combine(seed, hash_of(v.digits));
  return seed;
}

// ----------------------------------------------------------------------
// The integer line with scalar vertices; the base graph of the
// scalar-state kernels on Z.
struct ZLineGraph {
  using vertex_type = long long;

  vertex_type origin() const { return 0; }
  int degree() const { return 2; }

  std::vector<vertex_type> neighbors(vertex_type v) const { return {v - 1, v + 1}; }
  long long distance(vertex_type u, vertex_type v) const { return std::llabs(u - v); }
};

// ----------------------------------------------------------------------
// The 2-cycle (a single edge): the smallest transitive base graph,
// used for the Z_2 wr Z_2 structure checks.
struct TwoCycleGraph {
  using vertex_type = long long;

  vertex_type origin() const { return 0; }
  int degree() const { return 1; }

  void check(vertex_type v) const { require(v == 0 || v == 1, "2-cycle: bad vertex"); }

  std::vector<vertex_type> neighbors(vertex_type v) const {
    check(v);
    return {1 - v};
  }

  long long distance(vertex_type u, vertex_type v) const {
    check(u);
    check(v);
    return u == v ? 0 : 1;
  }
};

// ----------------------------------------------------------------------
// BFS ball and exact BFS distances on any graph family; the test oracle
// for the closed-form metrics. Balls in trees grow exponentially, so
// callers keep the radius small (<= 6).
template <class G>
std::vector<typename G::vertex_type> ball(const G& g, const typename G::vertex_type& center,
                                          int radius) {
  using V = typename G::vertex_type;
  std::vector<V> order{center};
  std::unordered_map<V, int, HashOf> depth{{center, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    V v = order[head];
    int d = depth[v];
    if (d == radius) continue;
    for (auto& w : g.neighbors(v)) {
      if (depth.emplace(w, d + 1).second) order.push_back(w);
    }
  }
  return order;
}

template <class G>
long long bfs_distance(const G& g, const typename G::vertex_type& from,
                       const typename G::vertex_type& to, int cap) {
  using V = typename G::vertex_type;
  if (from == to) return 0;
  std::unordered_map<V, long long, HashOf> depth{{from, 0}};
  std::queue<V> q;
  q.push(from);
  while (!q.empty()) {
    V v = q.front();
    q.pop();
    long long d = depth[v];
    if (d >= cap) continue;
    for (auto& w : g.neighbors(v)) {
      if (depth.emplace(w, d + 1).second) {
        if (w == to) return d + 1;
        q.push(w);
      }
    }
  }
  return -1;  // not within cap
}

}  // namespace ww
