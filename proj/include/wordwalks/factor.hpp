#pragma once

#include <queue>
#include <set>
#include <string>
#include <vector>

#include "wordwalks/common.hpp"
#include "wordwalks/digraph.hpp"

// Finite sets of forbidden factors and the deterministic machine that
// recognizes the words avoiding them. Matching uses failure links, so
// overlapping occurrences ("aa" inside "aaa") are caught.

namespace ww {

// A finite nonempty set of nonempty words over the alphabet, stored as
// label-index sequences.
struct FactorSet {
  std::vector<std::vector<int>> words;
  int alphabet_size = 0;
  int max_length = 0;  // R

  FactorSet(std::vector<std::vector<int>> ws, int sigma) : words(std::move(ws)), alphabet_size(sigma) {
    require(sigma >= 1, "factor set: empty alphabet");
    require(!words.empty(), "factor set: F must be non-empty");
    std::set<std::vector<int>> dedup;
    for (const auto& w : words) {
      require(!w.empty(), "factor set: the empty word is not a factor");
      for (int a : w) require(a >= 0 && a < sigma, "factor set: letter outside the alphabet");
      dedup.insert(w);
      max_length = std::max(max_length, static_cast<int>(w.size()));
    }
    words.assign(dedup.begin(), dedup.end());
  }

  // Words given as strings of single-character labels, resolved
  // against the graph's alphabet.
  static FactorSet parse(const std::vector<std::string>& ws, const LabeledDigraph& g) {
    for (const auto& s : g.alphabet) {
      require(s.size() == 1, "factor set: string parsing needs single-character labels");
    }
    std::vector<std::vector<int>> out;
    for (const auto& w : ws) {
      std::vector<int> seq;
      for (char c : w) seq.push_back(g.label_index(std::string(1, c)));
      out.push_back(std::move(seq));
    }
    return FactorSet(std::move(out), static_cast<int>(g.alphabet.size()));
  }
};

// Scans a label sequence for any factor in F; the naive quadratic
// reference used by tests and certification code.
inline bool contains_factor(const std::vector<int>& word, const FactorSet& f) {
  for (const auto& w : f.words) {
    if (w.size() > word.size()) continue;
    for (std::size_t i = 0; i + w.size() <= word.size(); ++i) {
      bool hit = true;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (word[i + j] != w[j]) {
          hit = false;
          break;
        }
      }
      if (hit) return true;
    }
  }
  return false;
}

// Aho-Corasick trie over the prefixes of F with failure links. States
// that complete some factor (possibly as a suffix, via the failure
// chain) are dead; transitions into them return -1, every other
// transition is total. The live part recognizes exactly the words
// with no F-factor.
struct FactorAutomaton {
  int alphabet_size = 0;
  int root = 0;
  std::vector<std::vector<int>> next;  // state x letter -> state, -1 = forbidden
  std::vector<bool> dead;

  explicit FactorAutomaton(const FactorSet& f) : alphabet_size(f.alphabet_size) {
    std::vector<std::vector<int>> child(1, std::vector<int>(alphabet_size, -1));
    std::vector<bool> terminal(1, false);
    for (const auto& w : f.words) {
      int s = 0;
      for (int a : w) {
        if (child[s][a] < 0) {
          child[s][a] = static_cast<int>(child.size());
          child.emplace_back(alphabet_size, -1);
          terminal.push_back(false);
        }
        s = child[s][a];
      }
      terminal[s] = true;
    }
    const int n = static_cast<int>(child.size());
    std::vector<int> fail(n, 0);
    dead.assign(n, false);
    next.assign(n, std::vector<int>(alphabet_size, 0));

    std::queue<int> bfs;
    for (int a = 0; a < alphabet_size; ++a) {
      int c = child[0][a];
      if (c < 0) {
        next[0][a] = 0;
      } else {
        fail[c] = 0;
        next[0][a] = c;
        bfs.push(c);
      }
    }
    dead[0] = terminal[0];
    while (!bfs.empty()) {
      int s = bfs.front();
      bfs.pop();
      dead[s] = terminal[s] || dead[fail[s]];
      for (int a = 0; a < alphabet_size; ++a) {
        int c = child[s][a];
        if (c < 0) {
          next[s][a] = next[fail[s]][a];
        } else {
          fail[c] = next[fail[s]][a];
          next[s][a] = c;
          bfs.push(c);
        }
      }
    }
    // collapse transitions into dead states
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < alphabet_size; ++a) {
        if (next[s][a] >= 0 && dead[next[s][a]]) next[s][a] = -1;
      }
      if (dead[s]) {
        for (int a = 0; a < alphabet_size; ++a) next[s][a] = -1;
      }
    }
  }

  int size() const { return static_cast<int>(next.size()); }

  // -1 as soon as some factor has been completed
  int scan(const std::vector<int>& word) const {
    int s = root;
    for (int a : word) {
      require(a >= 0 && a < alphabet_size, "factor automaton: letter outside the alphabet");
      s = next[s][a];
      if (s < 0) return -1;
    }
    return s;
  }

  bool avoids(const std::vector<int>& word) const { return scan(word) >= 0; }
};

}  // namespace ww
