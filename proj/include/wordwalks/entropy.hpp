#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/digraph.hpp"
#include "wordwalks/factor.hpp"
#include "wordwalks/spectral.hpp"

// Forbidden-factor restriction, Markov chains with forbidden
// transitions, and the growth-sensitivity reports built on them.

namespace ww {

// ----------------------------------------------------------------------
// Product of a labelled digraph with the factor automaton. The label
// sequences of paths from (x, root) to any live (y, *) are exactly the
// words of L_{x,y} with no factor in F. Determinism is preserved.
struct Restricted {
  LabeledDigraph product;
  int trie_states = 0;
  std::vector<int> pair_id;      // (v * trie_states + t) -> product vertex, -1 dead
  std::vector<int> source_edge;  // product edge -> index of the original edge

  int origin(int v) const {
    int id = pair_id[static_cast<std::size_t>(v) * trie_states];  // trie root = 0
    return id;
  }

  std::vector<int> fiber(int v) const {
    std::vector<int> out;
    for (int t = 0; t < trie_states; ++t) {
      int id = pair_id[static_cast<std::size_t>(v) * trie_states + t];
      if (id >= 0) out.push_back(id);
    }
    return out;
  }
};

inline Restricted restrict_graph(const LabeledDigraph& g, const FactorSet& f) {
  require(f.alphabet_size == static_cast<int>(g.alphabet.size()),
          "restrict: factor set alphabet does not match the graph");
  FactorAutomaton aut(f);
  Restricted r;
  r.trie_states = aut.size();
  r.pair_id.assign(static_cast<std::size_t>(g.num_vertices) * aut.size(), -1);
  int next_id = 0;
  for (int v = 0; v < g.num_vertices; ++v) {
    for (int t = 0; t < aut.size(); ++t) {
      if (!aut.dead[t]) r.pair_id[static_cast<std::size_t>(v) * aut.size() + t] = next_id++;
    }
  }
  std::vector<LabeledDigraph::Edge> edges;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    for (int t = 0; t < aut.size(); ++t) {
      if (aut.dead[t]) continue;
      int t2 = aut.next[t][e.label];
      if (t2 < 0) continue;
      int a = r.pair_id[static_cast<std::size_t>(e.src) * aut.size() + t];
      int b = r.pair_id[static_cast<std::size_t>(e.dst) * aut.size() + t2];
      edges.push_back({a, e.label, b});
      r.source_edge.push_back(static_cast<int>(i));
    }
  }
  r.product = LabeledDigraph(next_id, g.alphabet, std::move(edges));
  return r;
}

// Number of length-n words of L_{x,y} avoiding every factor in F.
inline unsigned long long count_restricted(const LabeledDigraph& g, const FactorSet& f, int x,
                                           int y, int n) {
  require(x >= 0 && x < g.num_vertices && y >= 0 && y < g.num_vertices,
          "count_restricted: vertex out of range");
  require(n >= 0, "count_restricted: n must be >= 0");
  if (!check_deterministic(g)) {
    throw ValidationError("count_restricted: graph is not deterministic");
  }
  auto r = restrict_graph(g, f);
  std::vector<unsigned long long> cur(r.product.num_vertices, 0);
  cur[r.origin(x)] = 1;
  const unsigned long long guard = std::numeric_limits<unsigned long long>::max() / 4;
  for (int i = 0; i < n; ++i) {
    std::vector<unsigned long long> next(r.product.num_vertices, 0);
    for (const auto& e : r.product.edges) {
      require(next[e.dst] <= guard && cur[e.src] <= guard, "count_restricted: overflow");
      next[e.dst] += cur[e.src];
    }
    cur = std::move(next);
  }
  unsigned long long total = 0;
  for (int id : r.fiber(y)) total += cur[id];
  return total;
}

// ----------------------------------------------------------------------
// Relative denseness: the smallest D such that from every vertex some
// factor of F is spellable within forward distance D.
inline std::optional<int> relative_denseness(const LabeledDigraph& g, const FactorSet& f,
                                             int d_max) {
  require(d_max >= 0, "relative_denseness: D_max must be >= 0");
  require(f.alphabet_size == static_cast<int>(g.alphabet.size()),
          "relative_denseness: factor set alphabet does not match the graph");
  // spell_from[v]: some w in F labels a path starting at v
  std::vector<bool> spell_from(g.num_vertices, false);
  for (const auto& w : f.words) {
    std::vector<bool> can(g.num_vertices, true);  // can spell w[i..] from here
    for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
      std::vector<bool> prev(g.num_vertices, false);
      for (const auto& e : g.edges) {
        if (e.label == w[i] && can[e.dst]) prev[e.src] = true;
      }
      can = std::move(prev);
    }
    for (int v = 0; v < g.num_vertices; ++v) {
      if (can[v]) spell_from[v] = true;
    }
  }
  auto adj = g.out_adjacency();
  int d_needed = 0;
  for (int x = 0; x < g.num_vertices; ++x) {
    auto dist = detail::bfs_forward(adj, x);
    long long best = -1;
    for (int y = 0; y < g.num_vertices; ++y) {
      if (spell_from[y] && dist[y] >= 0 && (best < 0 || dist[y] < best)) best = dist[y];
    }
    if (best < 0 || best > d_max) return std::nullopt;
    d_needed = std::max(d_needed, static_cast<int>(best));
  }
  return d_needed;
}

// ----------------------------------------------------------------------
// Edge probabilities p(e) >= alpha > 0 with substochastic rows.
struct WeightedGraph {
  LabeledDigraph graph;
  std::vector<double> edge_prob;  // parallel to graph.edges
  double alpha = 0;

  WeightedGraph(LabeledDigraph g, std::vector<double> probs, double a)
      : graph(std::move(g)), edge_prob(std::move(probs)), alpha(a) {
    require(alpha > 0, "weighted graph: alpha must be positive");
    require(edge_prob.size() == graph.edges.size(), "weighted graph: probability per edge");
    std::vector<double> row(graph.num_vertices, 0.0);
    for (std::size_t i = 0; i < edge_prob.size(); ++i) {
      require(edge_prob[i] >= alpha, "weighted graph: p(e) >= alpha violated");
      row[graph.edges[i].src] += edge_prob[i];
    }
    for (double s : row) {
      require(s <= 1.0 + 1e-12, "weighted graph: out-probabilities exceed 1");
    }
  }

  Matrix transition_matrix() const {
    Matrix p(graph.num_vertices, std::vector<double>(graph.num_vertices, 0.0));
    for (std::size_t i = 0; i < edge_prob.size(); ++i) {
      p[graph.edges[i].src][graph.edges[i].dst] += edge_prob[i];
    }
    return p;
  }
};

// p(x,a,y) = 1/|Sigma| on every edge; substochastic because a
// deterministic graph has out-degree at most |Sigma|.
inline WeightedGraph uniform_weighting(const LabeledDigraph& g) {
  require(check_deterministic(g), "uniform_weighting: graph must be deterministic");
  double a = 1.0 / static_cast<double>(g.alphabet.size());
  return WeightedGraph(g, std::vector<double>(g.edges.size(), a), a);
}

// Per-edge h-transform p^h(x,a,y) = p(x,a,y) h(y) / (rho h(x)).
inline std::vector<double> h_transform_edges(const WeightedGraph& wg,
                                             const std::vector<double>& h, double rho) {
  require(h.size() == static_cast<std::size_t>(wg.graph.num_vertices),
          "h_transform_edges: size mismatch");
  require(rho > 0, "h_transform_edges: rho must be positive");
  for (double x : h) require(x > 0, "h_transform_edges: h must be positive");
  std::vector<double> out(wg.edge_prob.size(), 0.0);
  for (std::size_t i = 0; i < wg.edge_prob.size(); ++i) {
    const auto& e = wg.graph.edges[i];
    out[i] = wg.edge_prob[i] * h[e.dst] / (rho * h[e.src]);
  }
  return out;
}

// ----------------------------------------------------------------------
// Restricted k-step mass: row sums of P_F^(k), by DP over the product
// with the factor automaton.

namespace detail {

struct WeightedProduct {
  Restricted restricted;
  std::vector<double> edge_prob;  // parallel to restricted.product.edges
};

inline WeightedProduct weighted_product(const WeightedGraph& wg, const FactorSet& f) {
  WeightedProduct wp{restrict_graph(wg.graph, f), {}};
  wp.edge_prob.reserve(wp.restricted.product.edges.size());
  for (int src : wp.restricted.source_edge) wp.edge_prob.push_back(wg.edge_prob[src]);
  return wp;
}

inline Matrix weighted_product_matrix(const WeightedProduct& wp) {
  Matrix m(wp.restricted.product.num_vertices,
           std::vector<double>(wp.restricted.product.num_vertices, 0.0));
  for (std::size_t i = 0; i < wp.restricted.product.edges.size(); ++i) {
    const auto& e = wp.restricted.product.edges[i];
    m[e.src][e.dst] += wp.edge_prob[i];
  }
  return m;
}

}  // namespace detail

struct SubstochReport {
  int k = 0;          // D + R
  int d_const = 0;    // relative denseness constant D
  int r_const = 0;    // longest forbidden word R
  double eps0 = 0;    // alpha^k
  double max_row_sum = 0;
  std::vector<double> row_sums;  // per start vertex
  bool pass = false;
};

// Substochasticity bound: after k = D + R restricted
// steps, every row sum of P_F^(k) is at most 1 - alpha^k.
inline SubstochReport substochastic_bound_check(const WeightedGraph& wg, const FactorSet& f,
                                                int d_max = 1 << 20) {
  if (!strong_connectivity(wg.graph)) {
    throw CertificationError("substochastic_bound_check: graph is not strongly connected");
  }
  auto d = relative_denseness(wg.graph, f, d_max);
  if (!d) {
    throw CertificationError("substochastic_bound_check: F is not relatively dense");
  }
  SubstochReport rep;
  rep.d_const = *d;
  rep.r_const = f.max_length;
  rep.k = rep.d_const + rep.r_const;
  rep.eps0 = std::pow(wg.alpha, rep.k);

  auto wp = detail::weighted_product(wg, f);
  auto m = detail::weighted_product_matrix(wp);
  rep.row_sums.assign(wg.graph.num_vertices, 0.0);
  for (int x = 0; x < wg.graph.num_vertices; ++x) {
    std::vector<double> cur(wp.restricted.product.num_vertices, 0.0);
    cur[wp.restricted.origin(x)] = 1.0;
    for (int step = 0; step < rep.k; ++step) {
      std::vector<double> next(wp.restricted.product.num_vertices, 0.0);
      for (std::size_t i = 0; i < wp.restricted.product.edges.size(); ++i) {
        const auto& e = wp.restricted.product.edges[i];
        next[e.dst] += cur[e.src] * wp.edge_prob[i];
      }
      cur = std::move(next);
    }
    double total = 0;
    for (double v : cur) total += v;
    rep.row_sums[x] = total;
    rep.max_row_sum = std::max(rep.max_row_sum, total);
  }
  rep.pass = rep.max_row_sum <= 1.0 - rep.eps0 + 1e-12;
  return rep;
}

// Restricted k-step mass from one start, for arbitrary k (used to
// check the matrix-power corollary row sums <= (1-eps0)^m at k = m(D+R)).
inline double restricted_mass(const WeightedGraph& wg, const FactorSet& f, int x, int k) {
  auto wp = detail::weighted_product(wg, f);
  std::vector<double> cur(wp.restricted.product.num_vertices, 0.0);
  cur[wp.restricted.origin(x)] = 1.0;
  for (int step = 0; step < k; ++step) {
    std::vector<double> next(wp.restricted.product.num_vertices, 0.0);
    for (std::size_t i = 0; i < wp.restricted.product.edges.size(); ++i) {
      const auto& e = wp.restricted.product.edges[i];
      next[e.dst] += cur[e.src] * wp.edge_prob[i];
    }
    cur = std::move(next);
  }
  double total = 0;
  for (double v : cur) total += v;
  return total;
}

// ----------------------------------------------------------------------
// rho_{x,y}(P_F) = limsup p_F^(n)(x,y)^{1/n}.

struct RestrictedRho {
  double estimate = 0;
  std::vector<double> roots;  // roots[n] = p_F^(n)(x,y)^{1/n}, 0 where mass vanishes
};

// DP on the weighted product plus the same two-point log-scale
// extrapolation as the spectral module.
inline RestrictedRho restricted_rho(const WeightedGraph& wg, const FactorSet& f, int x, int y,
                                    int n_max) {
  require(n_max >= 4, "restricted_rho: n_max must be >= 4");
  require(x >= 0 && x < wg.graph.num_vertices && y >= 0 && y < wg.graph.num_vertices,
          "restricted_rho: vertex out of range");
  auto wp = detail::weighted_product(wg, f);
  std::vector<double> cur(wp.restricted.product.num_vertices, 0.0);
  cur[wp.restricted.origin(x)] = 1.0;
  auto fiber = wp.restricted.fiber(y);

  RestrictedRho out;
  out.roots.assign(n_max + 1, 0.0);
  std::vector<double> log_p(n_max + 1, 0.0);
  std::vector<bool> positive(n_max + 1, false);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> next(wp.restricted.product.num_vertices, 0.0);
    for (std::size_t i = 0; i < wp.restricted.product.edges.size(); ++i) {
      const auto& e = wp.restricted.product.edges[i];
      next[e.dst] += cur[e.src] * wp.edge_prob[i];
    }
    cur = std::move(next);
    double mass = 0;
    for (int id : fiber) mass += cur[id];
    if (mass > 0) {
      positive[n] = true;
      log_p[n] = std::log(mass);
      out.roots[n] = std::exp(log_p[n] / n);
    }
  }
  int n1 = n_max;
  while (n1 >= 1 && !positive[n1]) --n1;
  if (n1 < 1) {
    out.estimate = 0;  // finite restricted language
    return out;
  }
  int n0 = n1 / 2;
  while (n0 >= 1 && !positive[n0]) --n0;
  if (n0 < 1 || n0 == n1) {
    out.estimate = out.roots[n1];
    return out;
  }
  out.estimate = std::exp(
      detail::two_point_extrapolate(n0, log_p[n0] / n0, n1, log_p[n1] / n1));
  return out;
}

// Exact value of sup_{x,y} rho_{x,y}(P_F) via the Perron roots of the
// relevant components of the weighted product; also per-pair values.
inline Matrix restricted_rho_exact(const WeightedGraph& wg, const FactorSet& f) {
  auto wp = detail::weighted_product(wg, f);
  auto m = detail::weighted_product_matrix(wp);
  const int n = wg.graph.num_vertices;
  Matrix out(n, std::vector<double>(n, 0.0));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      out[x][y] = detail::path_growth_rate(m, {wp.restricted.origin(x)},
                                           wp.restricted.fiber(y));
    }
  }
  return out;
}

// ----------------------------------------------------------------------
// Growth sensitivity: h(L^F_{x,y}) < h(X) for certified instances.

struct SensitivityReport {
  std::vector<std::string> violations;  // empty iff hypotheses certified
  int k_const = 0;                      // uniform connectedness constant
  int d_const = 0;                      // relative denseness constant
  double h = 0;                         // entropy of the unrestricted graph
  Matrix h_f;                           // per-pair restricted entropies (-inf allowed)
  double sup_h_f = -std::numeric_limits<double>::infinity();
  bool strict = false;

  bool ok() const { return violations.empty(); }
};

inline SensitivityReport growth_sensitivity_report(const LabeledDigraph& g, const FactorSet& f,
                                                   int k_max = 1 << 20, int d_max = 1 << 20) {
  SensitivityReport rep;
  if (!check_deterministic(g)) rep.violations.push_back("graph is not deterministic");
  auto k = uniform_connectedness(g, k_max);
  if (!k) {
    rep.violations.push_back("graph is not uniformly connected");
  } else {
    rep.k_const = *k;
  }
  if (rep.violations.empty()) {
    auto d = relative_denseness(g, f, d_max);
    if (!d) {
      rep.violations.push_back("factor set is not relatively dense");
    } else {
      rep.d_const = *d;
    }
  }
  if (!rep.violations.empty()) return rep;

  double rho = detail::path_growth_rate(count_matrix(g), {0}, {0});
  rep.h = rho > 0 ? std::log(rho) : -std::numeric_limits<double>::infinity();

  auto r = restrict_graph(g, f);
  auto counts = count_matrix(r.product);
  rep.h_f.assign(g.num_vertices, std::vector<double>(g.num_vertices, 0.0));
  for (int x = 0; x < g.num_vertices; ++x) {
    for (int y = 0; y < g.num_vertices; ++y) {
      double growth = detail::path_growth_rate(counts, {r.origin(x)}, r.fiber(y));
      rep.h_f[x][y] =
          growth > 0 ? std::log(growth) : -std::numeric_limits<double>::infinity();
      rep.sup_h_f = std::max(rep.sup_h_f, rep.h_f[x][y]);
    }
  }
  rep.strict = rep.sup_h_f < rep.h - 1e-9;
  return rep;
}

// ----------------------------------------------------------------------
// Two independent routes to the entropy of a uniformly weighted
// deterministic graph: counting vs log(rho(P) |Sigma|).

struct IdentityCheck {
  double h_counting = 0;
  double log_rho_sigma = 0;
  double delta = 0;
};

inline IdentityCheck entropy_spectral_identity_check(const LabeledDigraph& g) {
  if (!strong_connectivity(g)) {
    throw CertificationError("identity check: graph is not strongly connected");
  }
  require(check_deterministic(g), "identity check: graph must be deterministic");
  IdentityCheck out;
  out.h_counting = entropy(g, 0, 0).h;
  auto wg = uniform_weighting(g);
  double rho_p = perron(wg.transition_matrix()).rho;
  out.log_rho_sigma = std::log(rho_p * static_cast<double>(g.alphabet.size()));
  out.delta = std::abs(out.h_counting - out.log_rho_sigma);
  return out;
}

}  // namespace ww
