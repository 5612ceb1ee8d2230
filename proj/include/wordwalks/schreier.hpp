#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/digraph.hpp"

// Schreier coset graphs X(G,K,psi): vertices are the right K-cosets,
// edges Kg --a--> Kg psi(a). Supported families have canonical coset
// forms, so no general coset enumeration is needed.

namespace ww {

// ----------------------------------------------------------------------
// Finite group given by its multiplication table.
struct FiniteGroupTable {
  int order = 0;
  std::vector<int> table;  // table[a * order + b] = a * b
  int identity = -1;

  FiniteGroupTable(int n, std::vector<int> t) : order(n), table(std::move(t)) {
    require(n >= 1, "group table: empty group");
    require(table.size() == static_cast<std::size_t>(n) * n, "group table: wrong size");
    for (int v : table) require(v >= 0 && v < n, "group table: entry out of range");
    for (int e = 0; e < n; ++e) {
      bool left = true, right = true;
      for (int g = 0; g < n; ++g) {
        if (mul_raw(e, g) != g) left = false;
        if (mul_raw(g, e) != g) right = false;
      }
      if (left && right) {
        identity = e;
        break;
      }
    }
    require(identity >= 0, "group table: no identity element");
    for (int a = 0; a < n; ++a) {
      bool has_inverse = false;
      for (int b = 0; b < n; ++b) {
        if (mul_raw(a, b) == identity && mul_raw(b, a) == identity) has_inverse = true;
      }
      require(has_inverse, "group table: missing inverse");
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          require(mul_raw(mul_raw(a, b), c) == mul_raw(a, mul_raw(b, c)),
                  "group table: not associative");
        }
      }
    }
  }

  int mul_raw(int a, int b) const { return table[a * order + b]; }
  int mul(int a, int b) const {
    require(a >= 0 && a < order && b >= 0 && b < order, "group table: element out of range");
    return mul_raw(a, b);
  }

  static FiniteGroupTable cyclic(int n) {
    std::vector<int> t(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) t[a * n + b] = (a + b) % n;
    }
    return FiniteGroupTable(n, std::move(t));
  }

  static FiniteGroupTable z2() { return cyclic(2); }

  // closure of the generators as a subgroup
  std::vector<int> subgroup(const std::vector<int>& gens) const {
    std::set<int> elems{identity};
    std::vector<int> work{identity};
    for (int g : gens) {
      require(g >= 0 && g < order, "subgroup: generator out of range");
      if (elems.insert(g).second) work.push_back(g);
    }
    while (!work.empty()) {
      int a = work.back();
      work.pop_back();
      for (int b : std::vector<int>(elems.begin(), elems.end())) {
        for (int c : {mul_raw(a, b), mul_raw(b, a)}) {
          if (elems.insert(c).second) work.push_back(c);
        }
      }
    }
    return {elems.begin(), elems.end()};
  }
};

// ----------------------------------------------------------------------
// Hermite column echelon form of an integer lattice, for canonical
// coset representatives of Z^d / L.
struct IntegerLattice {
  int dim = 0;
  // echelon basis columns; pivot_row[c] strictly increasing
  std::vector<std::vector<long long>> basis;
  std::vector<int> pivot_row;

  IntegerLattice(int d, const std::vector<std::vector<long long>>& generators) : dim(d) {
    require(d >= 1, "lattice subgroup: dimension must be >= 1");
    std::vector<std::vector<long long>> cols;
    for (const auto& g : generators) {
      require(static_cast<int>(g.size()) == d, "lattice subgroup: generator of wrong dimension");
      cols.push_back(g);
    }
    // integer column echelon via gcd elimination
    int col = 0;
    for (int row = 0; row < d && col < static_cast<int>(cols.size()); ++row) {
      int pivot = -1;
      for (int c = col; c < static_cast<int>(cols.size()); ++c) {
        if (cols[c][row] != 0) {
          pivot = c;
          break;
        }
      }
      if (pivot < 0) continue;
      std::swap(cols[col], cols[pivot]);
      for (int c = col + 1; c < static_cast<int>(cols.size()); ++c) {
        // euclidean elimination of cols[c][row]
        while (cols[c][row] != 0) {
          long long q = cols[col][row] / cols[c][row];
          for (int r = 0; r < d; ++r) cols[col][r] -= q * cols[c][r];
          std::swap(cols[col], cols[c]);
        }
      }
      if (cols[col][row] < 0) {
        for (int r = 0; r < d; ++r) cols[col][r] = -cols[col][r];
      }
      basis.push_back(cols[col]);
      pivot_row.push_back(row);
      ++col;
    }
  }

  bool full_rank() const { return static_cast<int>(basis.size()) == dim; }

  long long index() const {
    require(full_rank(), "lattice subgroup: infinite index");
    long long idx = 1;
    for (std::size_t c = 0; c < basis.size(); ++c) idx *= basis[c][pivot_row[c]];
    return idx;
  }

  // canonical representative of v + L: reduce pivot coordinates into
  // [0, pivot) in pivot-row order
  std::vector<long long> reduce(std::vector<long long> v) const {
    require(static_cast<int>(v.size()) == dim, "lattice subgroup: vector of wrong dimension");
    for (std::size_t c = 0; c < basis.size(); ++c) {
      int row = pivot_row[c];
      long long p = basis[c][row];
      long long q = v[row] >= 0 ? v[row] / p : -((-v[row] + p - 1) / p);
      for (int r = 0; r < dim; ++r) v[r] -= q * basis[c][r];
    }
    return v;
  }
};

// ----------------------------------------------------------------------
// Reduced words over k involutive generators (the free product of k
// copies of Z_2); only the trivial subgroup is supported here.
struct FreeProductZ2 {
  int factors = 0;

  explicit FreeProductZ2(int k) : factors(k) {
    require(k >= 1, "free product: need at least one factor");
  }

  void check(const std::string& w) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      require(w[i] >= 'a' && w[i] < 'a' + factors, "free product: bad generator");
      require(i == 0 || w[i] != w[i - 1], "free product: word not reduced");
    }
  }

  std::string mul(const std::string& a, const std::string& b) const {
    check(a);
    check(b);
    std::string out = a;
    for (char c : b) {
      if (!out.empty() && out.back() == c) {
        out.pop_back();
      } else {
        out.push_back(c);
      }
    }
    return out;
  }
};

// ----------------------------------------------------------------------
struct SchreierGraph {
  LabeledDigraph graph;
  int origin = 0;                       // coset K
  bool truncated = false;               // infinite family cut at the radius
  int radius = 0;                       // exactness horizon when truncated
  std::vector<std::string> coset_names; // canonical representative per vertex
};

namespace detail {

// Generic coset BFS given canonical representatives. step(rep, a)
// returns the canonical representative of the a-successor coset.
template <class Rep, class Step, class Name>
SchreierGraph coset_bfs(const Rep& start, const std::vector<std::string>& alphabet, Step step,
                        Name name, int radius, bool finite_family) {
  std::vector<Rep> order{start};
  std::map<Rep, int> ids{{start, 0}};
  std::vector<int> depth{0};
  bool cut = false;
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (!finite_family && depth[head] >= radius) {
      // the frontier may have undiscovered successors
      for (std::size_t a = 0; a < alphabet.size(); ++a) {
        if (!ids.count(step(order[head], static_cast<int>(a)))) {
          cut = true;
          break;
        }
      }
      continue;
    }
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      Rep nxt = step(order[head], static_cast<int>(a));
      auto [it, inserted] = ids.try_emplace(nxt, static_cast<int>(order.size()));
      if (inserted) {
        order.push_back(nxt);
        depth.push_back(depth[head] + 1);
      }
    }
  }
  std::vector<LabeledDigraph::Edge> edges;
  for (std::size_t v = 0; v < order.size(); ++v) {
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      Rep nxt = step(order[v], static_cast<int>(a));
      auto it = ids.find(nxt);
      if (it != ids.end()) edges.push_back({static_cast<int>(v), static_cast<int>(a), it->second});
    }
  }
  SchreierGraph out;
  out.graph = LabeledDigraph(static_cast<int>(order.size()), alphabet, std::move(edges));
  out.origin = 0;
  out.truncated = cut;
  out.radius = radius;
  for (const auto& rep : order) out.coset_names.push_back(name(rep));
  return out;
}

}  // namespace detail

// Finite-by-table family: exact, radius ignored.
inline SchreierGraph build_schreier(const FiniteGroupTable& g, const std::vector<int>& subgroup_gens,
                                    const std::vector<std::string>& alphabet,
                                    const std::vector<int>& psi) {
  require(alphabet.size() == psi.size(), "schreier: one psi image per letter");
  for (int im : psi) require(im >= 0 && im < g.order, "schreier: psi image out of range");
  // psi(Sigma) must generate G as a semigroup: closure under right
  // multiplication by images, starting from the identity
  {
    std::set<int> seen{g.identity};
    std::vector<int> work{g.identity};
    while (!work.empty()) {
      int a = work.back();
      work.pop_back();
      for (int im : psi) {
        int b = g.mul(a, im);
        if (seen.insert(b).second) work.push_back(b);
      }
    }
    require(static_cast<int>(seen.size()) == g.order,
            "schreier: psi(alphabet) does not generate the group");
  }
  auto k_elems = g.subgroup(subgroup_gens);
  auto coset_rep = [&](int elem) {
    int best = g.order;
    for (int k : k_elems) best = std::min(best, g.mul(k, elem));
    return best;
  };
  auto step = [&](int rep, int a) { return coset_rep(g.mul(rep, psi[a])); };
  auto name = [](int rep) { return "g" + std::to_string(rep); };
  return detail::coset_bfs(coset_rep(g.identity), alphabet, step, name, 0, true);
}

// Independent index computation by orbit enumeration: partition all of
// G into right cosets of the subgroup generated by gens.
inline int coset_count_by_orbits(const FiniteGroupTable& g, const std::vector<int>& subgroup_gens) {
  auto k_elems = g.subgroup(subgroup_gens);
  std::set<int> reps;
  for (int elem = 0; elem < g.order; ++elem) {
    int best = g.order;
    for (int k : k_elems) best = std::min(best, g.mul(k, elem));
    reps.insert(best);
  }
  return static_cast<int>(reps.size());
}

// Z^d modulo the sublattice spanned by the given generating vectors.
inline SchreierGraph build_schreier(int dim, const std::vector<std::vector<long long>>& subgroup_gens,
                                    const std::vector<std::string>& alphabet,
                                    const std::vector<std::vector<long long>>& psi, int radius) {
  require(alphabet.size() == psi.size(), "schreier: one psi image per letter");
  IntegerLattice lattice(dim, subgroup_gens);
  // the presentation must contain +-(every standard basis vector)
  for (int i = 0; i < dim; ++i) {
    for (long long sign : {-1LL, +1LL}) {
      std::vector<long long> e(dim, 0);
      e[i] = sign;
      bool found = false;
      for (const auto& im : psi) {
        if (im == e) found = true;
      }
      require(found, "schreier: psi must contain every +-standard basis vector");
    }
  }
  bool finite_index = lattice.full_rank();
  require(finite_index || radius >= 1, "schreier: radius must be >= 1 for infinite families");
  auto step = [&](const std::vector<long long>& rep, int a) {
    auto v = rep;
    for (int i = 0; i < dim; ++i) v[i] += psi[a][i];
    return lattice.reduce(std::move(v));
  };
  auto name = [](const std::vector<long long>& rep) {
    std::string s = "(";
    for (std::size_t i = 0; i < rep.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(rep[i]);
    }
    return s + ")";
  };
  // finite index: BFS closes on its own; give it enough rope
  int eff_radius = finite_index ? std::max<long long>(radius, lattice.index() + 1)
                                : radius;
  auto out = detail::coset_bfs(lattice.reduce(std::vector<long long>(dim, 0)), alphabet, step,
                               name, eff_radius, finite_index);
  if (finite_index) {
    require(static_cast<long long>(out.graph.num_vertices) == lattice.index(),
            "schreier: coset count does not match the lattice index");
  }
  return out;
}

// Free product of k copies of Z_2 with the trivial subgroup. psi images
// are reduced words; all single generators must appear among them.
inline SchreierGraph build_schreier(const FreeProductZ2& g,
                                    const std::vector<std::string>& alphabet,
                                    const std::vector<std::string>& psi, int radius) {
  require(alphabet.size() == psi.size(), "schreier: one psi image per letter");
  for (const auto& w : psi) g.check(w);
  for (int i = 0; i < g.factors; ++i) {
    std::string gen(1, static_cast<char>('a' + i));
    bool found = false;
    for (const auto& w : psi) {
      if (w == gen) found = true;
    }
    require(found, "schreier: psi must contain every involutive generator");
  }
  require(radius >= 1, "schreier: radius must be >= 1 for infinite families");
  auto step = [&](const std::string& rep, int a) { return g.mul(rep, psi[a]); };
  auto name = [](const std::string& rep) { return rep.empty() ? std::string("e") : rep; };
  bool finite = g.factors == 1;  // a single Z_2 factor is the 2-element group
  return detail::coset_bfs(std::string{}, alphabet, step, name, finite ? 2 : radius, finite);
}

// ----------------------------------------------------------------------
// The word problem L(G,K,psi) = {w : psi(w) in K} = L_{o,o} of the
// Schreier graph rooted at the coset K. Counts on truncated graphs are
// exact only up to the radius: shorter paths cannot feel the cut.
struct WordProblem {
  const SchreierGraph* schreier;

  unsigned long long count(int n) const {
    require(n >= 0, "word problem: n must be >= 0");
    if (schreier->truncated && n > schreier->radius) {
      throw HorizonError("word problem: count request beyond the trust horizon of a truncated graph");
    }
    return count_words(schreier->graph, schreier->origin, schreier->origin, n);
  }
};

inline WordProblem word_problem_language(const SchreierGraph& g) { return WordProblem{&g}; }

}  // namespace ww
