#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/spectral.hpp"

// Finite labelled digraphs viewed as automata: the language L_{x,y} is
// the set of words read along paths from x to y.

namespace ww {

struct LabeledDigraph {
  struct Edge {
    int src;
    int label;  // index into alphabet
    int dst;
  };

  int num_vertices = 0;
  std::vector<std::string> alphabet;
  std::vector<Edge> edges;

  LabeledDigraph() = default;
  LabeledDigraph(int n, std::vector<std::string> sigma, std::vector<Edge> es)
      : num_vertices(n), alphabet(std::move(sigma)), edges(std::move(es)) {
    validate();
  }

  void validate() const {
    require(num_vertices >= 1, "digraph: need at least one vertex");
    require(!alphabet.empty(), "digraph: empty alphabet");
    std::set<std::string> labels(alphabet.begin(), alphabet.end());
    require(labels.size() == alphabet.size(), "digraph: duplicate alphabet symbols");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : edges) {
      require(e.src >= 0 && e.src < num_vertices, "digraph: edge source out of range");
      require(e.dst >= 0 && e.dst < num_vertices, "digraph: edge target out of range");
      require(e.label >= 0 && e.label < static_cast<int>(alphabet.size()),
              "digraph: edge label out of range");
      require(seen.insert({e.src, e.label, e.dst}).second,
              "digraph: parallel edges must carry distinct labels");
    }
  }

  int label_index(const std::string& s) const {
    for (int i = 0; i < static_cast<int>(alphabet.size()); ++i) {
      if (alphabet[i] == s) return i;
    }
    throw ValidationError("digraph: unknown label '" + s + "'");
  }

  std::vector<std::vector<int>> out_adjacency() const {
    std::vector<std::vector<int>> adj(num_vertices);
    for (const auto& e : edges) adj[e.src].push_back(e.dst);
    return adj;
  }
};

// At most one out-edge per (vertex, label).
inline bool check_deterministic(const LabeledDigraph& g) {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (!seen.insert({e.src, e.label}).second) return false;
  }
  return true;
}

// Exactly one out-edge per (vertex, label).
inline bool check_fully_deterministic(const LabeledDigraph& g) {
  if (!check_deterministic(g)) return false;
  return g.edges.size() ==
         static_cast<std::size_t>(g.num_vertices) * g.alphabet.size();
}

namespace detail {

// forward BFS distances from src over an adjacency list; -1 = unreachable
inline std::vector<long long> bfs_forward(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<long long> dist(adj.size(), -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

// Tarjan strongly connected components, iterative. Returns component
// ids in reverse topological order (component of an edge target <=
// component of its source id... ids are assigned so that every edge
// goes from higher-or-equal id to lower-or-equal? No ordering is
// promised; use the ids only for grouping).
inline std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  count = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& fr = call.back();
      if (fr.child < adj[fr.v].size()) {
        int w = adj[fr.v][fr.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = count;
            if (w == fr.v) break;
          }
          ++count;
        }
        int v = fr.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return comp;
}

// Exponential growth rate of the number of weighted paths from any
// source to any target: the largest Perron root among strongly
// connected components that lie on some source -> target path.
// Returns 0 when every relevant component is trivial (finitely many
// paths only give rate 0 = log-growth -inf for the caller to map).
inline double path_growth_rate(const Matrix& weight, const std::vector<int>& sources,
                               const std::vector<int>& targets) {
  const int n = static_cast<int>(weight.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (weight[i][j] > 0) adj[i].push_back(j);
    }
  }
  std::vector<std::vector<int>> radj(n);
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) radj[j].push_back(i);
  }
  std::vector<bool> from_src(n, false), to_tgt(n, false);
  {
    std::vector<int> work;
    for (int s : sources) {
      if (!from_src[s]) {
        from_src[s] = true;
        work.push_back(s);
      }
    }
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      for (int w : adj[v]) {
        if (!from_src[w]) {
          from_src[w] = true;
          work.push_back(w);
        }
      }
    }
    for (int t : targets) {
      if (!to_tgt[t]) {
        to_tgt[t] = true;
        work.push_back(t);
      }
    }
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      for (int w : radj[v]) {
        if (!to_tgt[w]) {
          to_tgt[w] = true;
          work.push_back(w);
        }
      }
    }
  }
  int comp_count = 0;
  auto comp = scc_ids(adj, comp_count);
  double best = 0;
  for (int c = 0; c < comp_count; ++c) {
    std::vector<int> members;
    bool relevant = false;
    for (int v = 0; v < n; ++v) {
      if (comp[v] == c) {
        members.push_back(v);
        if (from_src[v] && to_tgt[v]) relevant = true;
      }
    }
    if (!relevant) continue;
    if (members.size() == 1) {
      int v = members[0];
      best = std::max(best, weight[v][v]);
      continue;
    }
    Matrix sub(members.size(), std::vector<double>(members.size(), 0.0));
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        sub[i][j] = weight[members[i]][members[j]];
      }
    }
    best = std::max(best, perron(sub).rho);
  }
  return best;
}

}  // namespace detail

inline bool strong_connectivity(const LabeledDigraph& g) {
  auto adj = g.out_adjacency();
  auto d = detail::bfs_forward(adj, 0);
  if (std::any_of(d.begin(), d.end(), [](long long x) { return x < 0; })) return false;
  std::vector<std::vector<int>> radj(g.num_vertices);
  for (const auto& e : g.edges) radj[e.dst].push_back(e.src);
  auto rd = detail::bfs_forward(radj, 0);
  return std::none_of(rd.begin(), rd.end(), [](long long x) { return x < 0; });
}

// Minimum length of a directed path from x to y.
inline long long forward_distance(const LabeledDigraph& g, int x, int y) {
  require(x >= 0 && x < g.num_vertices && y >= 0 && y < g.num_vertices,
          "forward_distance: vertex out of range");
  auto d = detail::bfs_forward(g.out_adjacency(), x)[y];
  if (d < 0) throw CertificationError("forward_distance: target unreachable");
  return d;
}

// Smallest K such that every edge x->y has a return path y->x of
// length <= K; nullopt when disconnected or K > k_max.
inline std::optional<int> uniform_connectedness(const LabeledDigraph& g, int k_max) {
  require(k_max >= 1, "uniform_connectedness: K_max must be >= 1");
  auto adj = g.out_adjacency();
  std::vector<std::vector<long long>> dist(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) dist[v] = detail::bfs_forward(adj, v);
  long long k = 0;
  for (const auto& e : g.edges) {
    long long back = dist[e.dst][e.src];
    if (back < 0) return std::nullopt;
    k = std::max(k, back);
  }
  if (k > k_max) return std::nullopt;
  return static_cast<int>(k);
}

// Label-summed adjacency counts: T[x][y] = number of edges x -> y.
inline Matrix count_matrix(const LabeledDigraph& g) {
  Matrix t(g.num_vertices, std::vector<double>(g.num_vertices, 0.0));
  for (const auto& e : g.edges) t[e.src][e.dst] += 1.0;
  return t;
}

// Number of length-n words in L_{x,y}. Determinism makes word counts
// equal path counts; nondeterministic inputs are rejected because the
// path count then overcounts words.
inline unsigned long long count_words(const LabeledDigraph& g, int x, int y, int n) {
  require(x >= 0 && x < g.num_vertices && y >= 0 && y < g.num_vertices,
          "count_words: vertex out of range");
  require(n >= 0, "count_words: n must be >= 0");
  if (!check_deterministic(g)) {
    throw ValidationError("count_words: graph is not deterministic (words != paths)");
  }
  std::vector<unsigned long long> cur(g.num_vertices, 0);
  cur[x] = 1;
  const unsigned long long guard = std::numeric_limits<unsigned long long>::max() / 4;
  for (int i = 0; i < n; ++i) {
    std::vector<unsigned long long> next(g.num_vertices, 0);
    for (const auto& e : g.edges) {
      require(next[e.dst] <= guard && cur[e.src] <= guard, "count_words: count overflow");
      next[e.dst] += cur[e.src];
    }
    cur = std::move(next);
  }
  return cur[y];
}

// Period of a strongly connected graph: gcd of all cycle lengths.
inline int graph_period(const LabeledDigraph& g) {
  auto adj = g.out_adjacency();
  auto level = detail::bfs_forward(adj, 0);
  long long p = 0;
  for (const auto& e : g.edges) {
    p = std::gcd(p, std::llabs(level[e.src] + 1 - level[e.dst]));
  }
  return static_cast<int>(p == 0 ? 1 : p);
}

struct EntropyResult {
  double h = 0;                 // log of the Perron root of the count matrix
  std::vector<double> raw;      // raw[n] = (1/n) log count(x,y,n), -inf where 0
  int period = 1;
  bool periodic = false;
};

// Entropy of L_{x,y} on a strongly connected graph: exact via the
// Perron root of the count-transfer matrix, with the raw normalized
// log-count sequence attached. The limsup is taken along residue
// classes when the graph is periodic; the Perron route already returns
// that value, and the raw sequence exposes the periodicity.
inline EntropyResult entropy(const LabeledDigraph& g, int x, int y, int n_raw = 0) {
  if (!strong_connectivity(g)) {
    throw CertificationError("entropy: graph is not strongly connected");
  }
  EntropyResult out;
  double rho = detail::path_growth_rate(count_matrix(g), {x}, {y});
  out.h = rho > 0 ? std::log(rho) : -std::numeric_limits<double>::infinity();
  out.period = graph_period(g);
  out.periodic = out.period > 1;
  out.raw.assign(n_raw + 1, -std::numeric_limits<double>::infinity());
  for (int n = 1; n <= n_raw; ++n) {
    auto c = count_words(g, x, y, n);
    if (c > 0) out.raw[n] = std::log(static_cast<double>(c)) / n;
  }
  return out;
}

}  // namespace ww
