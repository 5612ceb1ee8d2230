#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wordwalks/digraph.hpp"
#include "wordwalks/entropy.hpp"
#include "wordwalks/rng.hpp"

// Shared corpus generators and brute-force oracles. The oracles count
// by enumerating label sequences and walking them, independent of the
// transfer-matrix DP they check.

namespace testsupport {

using ww::FactorSet;
using ww::LabeledDigraph;
using ww::RngStream;

// A small running example over {a,b} with
//   L_{x,y} = { a(a)*bb, (ba)*bb, bb, ... }
// where x=0, y=1, z=2, t=3.
inline LabeledDigraph paper_example_graph() {
  return LabeledDigraph(4, {"a", "b"},
                        {{0, 0, 2},    // x -a-> z
                         {0, 1, 3},    // x -b-> t
                         {2, 0, 2},    // z -a-> z
                         {2, 1, 3},    // z -b-> t
                         {3, 0, 0},    // t -a-> x
                         {3, 1, 1},    // t -b-> y
                         {1, 0, 2},    // y -a-> z
                         {1, 1, 3}});  // y -b-> t
}

// full shift on two letters: one vertex, loops 0 and 1
inline LabeledDigraph full_binary_shift() {
  return LabeledDigraph(1, {"0", "1"}, {{0, 0, 0}, {0, 1, 0}});
}

// golden-mean shift: words over {0,1} with no factor 11
inline LabeledDigraph golden_mean_graph() {
  return LabeledDigraph(2, {"0", "1"}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 0}});
}

// deterministic edge lookup: (vertex, label) -> target or -1
inline std::vector<std::vector<int>> det_successor(const LabeledDigraph& g) {
  std::vector<std::vector<int>> succ(g.num_vertices,
                                     std::vector<int>(g.alphabet.size(), -1));
  for (const auto& e : g.edges) succ[e.src][e.label] = e.dst;
  return succ;
}

// Counts length-n words from x to y by enumerating all |Sigma|^n label
// sequences and walking each one.
inline unsigned long long brute_count_words(const LabeledDigraph& g, int x, int y, int n) {
  auto succ = det_successor(g);
  const int sigma = static_cast<int>(g.alphabet.size());
  unsigned long long total = 0;
  std::vector<int> word(n, 0);
  for (;;) {
    int v = x;
    for (int i = 0; i < n && v >= 0; ++i) v = succ[v][word[i]];
    if (v == y) ++total;
    int i = n - 1;
    while (i >= 0 && word[i] == sigma - 1) word[i--] = 0;
    if (i < 0) break;
    ++word[i];
  }
  return total;
}

// Same, discarding words with a forbidden factor (naive scan).
inline unsigned long long brute_count_restricted(const LabeledDigraph& g, const FactorSet& f,
                                                 int x, int y, int n) {
  auto succ = det_successor(g);
  const int sigma = static_cast<int>(g.alphabet.size());
  unsigned long long total = 0;
  std::vector<int> word(n, 0);
  for (;;) {
    if (!ww::contains_factor(word, f)) {
      int v = x;
      for (int i = 0; i < n && v >= 0; ++i) v = succ[v][word[i]];
      if (v == y) ++total;
    }
    int i = n - 1;
    while (i >= 0 && word[i] == sigma - 1) word[i--] = 0;
    if (i < 0) break;
    ++word[i];
  }
  return total;
}

// Random deterministic strongly connected graph, <= 6 vertices,
// |Sigma| <= 3.
inline LabeledDigraph random_strongly_connected_graph(RngStream& rng) {
  static const std::vector<std::string> letters = {"a", "b", "c"};
  for (;;) {
    int n = 1 + static_cast<int>(rng.next_below(6));
    int sigma = 1 + static_cast<int>(rng.next_below(3));
    std::vector<LabeledDigraph::Edge> edges;
    for (int v = 0; v < n; ++v) {
      for (int a = 0; a < sigma; ++a) {
        if (rng.next_double() < 0.8) {
          edges.push_back({v, a, static_cast<int>(rng.next_below(n))});
        }
      }
    }
    if (edges.empty()) continue;
    LabeledDigraph g(n, std::vector<std::string>(letters.begin(), letters.begin() + sigma),
                     std::move(edges));
    if (ww::strong_connectivity(g)) return g;
  }
}

// Random factor set over the graph's alphabet; nullopt when it fails
// the relative-denseness certification.
inline std::optional<FactorSet> random_dense_factor_set(RngStream& rng,
                                                        const LabeledDigraph& g) {
  const int sigma = static_cast<int>(g.alphabet.size());
  int count = 1 + static_cast<int>(rng.next_below(3));
  std::vector<std::vector<int>> words;
  for (int i = 0; i < count; ++i) {
    int len = 1 + static_cast<int>(rng.next_below(3));
    std::vector<int> w;
    for (int j = 0; j < len; ++j) w.push_back(static_cast<int>(rng.next_below(sigma)));
    words.push_back(std::move(w));
  }
  FactorSet f(std::move(words), sigma);
  if (!ww::relative_denseness(g, f, 1000)) return std::nullopt;
  return f;
}

struct CertifiedInstance {
  LabeledDigraph graph;
  FactorSet factors;
};

// Certified corpus: deterministic, uniformly connected graphs with a
// relatively dense forbidden set.
inline std::vector<CertifiedInstance> certified_corpus(std::uint64_t seed, int count) {
  std::vector<CertifiedInstance> out;
  RngStream rng(seed, 0);
  while (static_cast<int>(out.size()) < count) {
    auto g = random_strongly_connected_graph(rng);
    for (int attempt = 0; attempt < 8; ++attempt) {
      auto f = random_dense_factor_set(rng, g);
      if (f) {
        out.push_back({g, *f});
        break;
      }
    }
  }
  return out;
}

}  // namespace testsupport
