#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "support.hpp"
#include "wordwalks/entropy.hpp"
#include "wordwalks/schreier.hpp"

using namespace ww;

namespace {

// S3 as a multiplication table, elements = permutations of {0,1,2}
FiniteGroupTable s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p = {0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto index_of = [&](const std::array<int, 3>& q) {
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i] == q) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<int> table(36);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> comp;
      for (int i = 0; i < 3; ++i) comp[i] = perms[a][perms[b][i]];
      table[a * 6 + b] = index_of(comp);
    }
  }
  return FiniteGroupTable(6, std::move(table));
}

}  // namespace

TEST_CASE("group table validation") {
  CHECK_NOTHROW(FiniteGroupTable::cyclic(5));
  CHECK_NOTHROW(s3_table());
  // a broken table: not associative / no identity
  CHECK_THROWS_AS(FiniteGroupTable(2, {0, 0, 0, 0}), ValidationError);
}

TEST_CASE("Schreier graph of (Z2, {1}): the two-vertex a-cycle") {
  auto g2 = FiniteGroupTable::z2();
  auto s = build_schreier(g2, {}, {"a"}, {1});
  CHECK_FALSE(s.truncated);
  REQUIRE(s.graph.num_vertices == 2);
  REQUIRE(s.graph.edges.size() == 2);
  CHECK(check_fully_deterministic(s.graph));
  CHECK(uniform_connectedness(s.graph, 10).has_value());

  // L(G,K,psi) = {a^{2n}}: counts 1,0,1,0,...
  auto wp = word_problem_language(s);
  for (int n = 0; n <= 10; ++n) {
    CHECK(wp.count(n) == (n % 2 == 0 ? 1ull : 0ull));
  }

  // forbidding aa collapses the language to {eps}
  auto f = FactorSet::parse({"aa"}, s.graph);
  CHECK(count_restricted(s.graph, f, s.origin, s.origin, 0) == 1);
  for (int n = 1; n <= 8; ++n) {
    CHECK(count_restricted(s.graph, f, s.origin, s.origin, n) == 0);
  }
}

TEST_CASE("Schreier graph of (Z, 2Z) with psi(a) = +1, psi(b) = -1") {
  auto s = build_schreier(1, {{2}}, {"a", "b"}, {{1}, {-1}}, 4);
  CHECK_FALSE(s.truncated);
  CHECK(s.graph.num_vertices == 2);
  CHECK(check_fully_deterministic(s.graph));

  // brute-force oracle: evaluate psi over all words of length 2; the
  // images +2, 0, 0, -2 all lie in 2Z, so the count is 4
  {
    int count = 0;
    for (int w0 : {+1, -1}) {
      for (int w1 : {+1, -1}) {
        if ((w0 + w1) % 2 == 0) ++count;
      }
    }
    CHECK(count == 4);
    CHECK(word_problem_language(s).count(2) == 4);
  }
  CHECK(word_problem_language(s).count(0) == 1);
  CHECK(word_problem_language(s).count(1) == 0);
  CHECK(word_problem_language(s).count(3) == 0);

  // psi must contain the +-standard basis
  CHECK_THROWS_AS(build_schreier(1, {{2}}, {"a"}, {{1}}, 4), ValidationError);
}

TEST_CASE("finite tables: vertex count equals the index by orbit enumeration") {
  auto z6 = FiniteGroupTable::cyclic(6);
  auto s = build_schreier(z6, {2}, {"a", "b"}, {1, 5});
  CHECK_FALSE(s.truncated);
  CHECK(s.graph.num_vertices == 2);  // [Z6 : <2>] = 2
  CHECK(s.graph.num_vertices == coset_count_by_orbits(z6, {2}));
  CHECK(check_fully_deterministic(s.graph));
  CHECK(uniform_connectedness(s.graph, 10).has_value());

  auto s3 = s3_table();
  // K generated by one transposition: index 3
  int transposition = -1;
  for (int a = 0; a < 6; ++a) {
    if (a != s3.identity && s3.mul(a, a) == s3.identity) {
      transposition = a;
      break;
    }
  }
  REQUIRE(transposition >= 0);
  // psi must generate S3 as a semigroup: use all elements as letters
  std::vector<std::string> alphabet;
  std::vector<int> psi;
  for (int a = 0; a < 6; ++a) {
    alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
    psi.push_back(a);
  }
  auto st = build_schreier(s3, {transposition}, alphabet, psi);
  CHECK(st.graph.num_vertices == 3);
  CHECK(st.graph.num_vertices == coset_count_by_orbits(s3, {transposition}));
  CHECK(check_fully_deterministic(st.graph));

  // a presentation that does not generate is rejected
  CHECK_THROWS_AS(build_schreier(z6, {}, {"a"}, {2}), ValidationError);
}

TEST_CASE("free product of Z2s: truncation and trust horizon") {
  FreeProductZ2 g(2);
  auto s = build_schreier(g, {"a", "b"}, {"a", "b"}, 3);
  CHECK(s.truncated);
  CHECK(s.radius == 3);
  CHECK(check_deterministic(s.graph));
  CHECK_FALSE(check_fully_deterministic(s.graph));  // boundary edges dropped

  auto wp = word_problem_language(s);
  CHECK(wp.count(0) == 1);
  CHECK(wp.count(1) == 0);
  CHECK(wp.count(2) == 2);  // aa and bb reduce to the identity
  CHECK(wp.count(3) == 0);
  CHECK_THROWS_AS(wp.count(4), HorizonError);

  // a single Z2 factor is the two-element group: exact
  FreeProductZ2 g1(1);
  auto s1 = build_schreier(g1, {"a"}, {"a"}, 5);
  CHECK_FALSE(s1.truncated);
  CHECK(s1.graph.num_vertices == 2);
  CHECK(check_fully_deterministic(s1.graph));
}

TEST_CASE("truncated lattice Schreier graphs are exact up to the radius") {
  // K = {0}: the coset graph is Z itself, truncated at radius 4
  auto s = build_schreier(1, {}, {"a", "b"}, {{1}, {-1}}, 4);
  CHECK(s.truncated);
  CHECK(s.graph.num_vertices == 9);  // window [-4, 4]
  auto wp = word_problem_language(s);
  // words of +-1 steps returning to 0: C(n, n/2) for even n
  CHECK(wp.count(0) == 1);
  CHECK(wp.count(1) == 0);
  CHECK(wp.count(2) == 2);
  CHECK(wp.count(3) == 0);
  CHECK(wp.count(4) == 6);
  CHECK_THROWS_AS(wp.count(5), HorizonError);

  // finite index: exact quotient, same counts as the cyclic table
  auto s6 = build_schreier(1, {{6}}, {"a", "b"}, {{1}, {-1}}, 1);
  CHECK_FALSE(s6.truncated);
  CHECK(s6.graph.num_vertices == 6);
  auto z6 = FiniteGroupTable::cyclic(6);
  auto st = build_schreier(z6, {}, {"a", "b"}, {1, 5});
  CHECK(st.graph.num_vertices == 6);
  for (int n = 0; n <= 12; ++n) {
    CHECK(word_problem_language(s6).count(n) == word_problem_language(st).count(n));
  }
}
