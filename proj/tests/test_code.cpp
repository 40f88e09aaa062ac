#include <gtest/gtest.h>

#include <functional>
#include <unordered_map>

#include "mcc/code.hpp"

using namespace mcc;

namespace {

uint64_t syndrome_key(const CodeLayout& L, const std::vector<int>& modes) {
  Bits b = Bits::of(modes);
  uint64_t key = 0;
  for (int p : syndrome_of(L, b)) key |= uint64_t{1} << p;
  return key;
}

// Calls f on every subset of 0..n-1 with at most k elements.
void for_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    f(cur);
    if (int(cur.size()) == k) return;
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

Bits path_modes(const CodeLayout& L, const std::vector<int>& path) {
  UnfoldedGraph g = unfold(L);
  Bits b;
  for (int e : path)
    for (int m : g.edges[e].correction) b.flip(m);
  return b;
}

}  // namespace

TEST(Code, VertexAndPlaquetteCounts) {
  for (int d : {5, 9, 13, 17}) {
    CodeLayout L = build_code(d);
    EXPECT_EQ(L.num_vertices(), d * d - d + 1);
    EXPECT_EQ(L.num_vertices() % 2, 1);
    EXPECT_EQ(int(L.logical_support.size()), L.num_vertices());
  }
}

TEST(Code, RejectsUnsupportedDistance) {
  EXPECT_THROW(build_code(3), std::invalid_argument);
  EXPECT_THROW(build_code(7), std::invalid_argument);
  EXPECT_THROW(build_code(8), std::invalid_argument);
}

TEST(Code, FullInvariantSuite) {
  for (int d : {5, 9, 13, 17}) {
    Report r = validate_code(build_code(d));
    EXPECT_TRUE(all_ok(r)) << "d=" << d << "\n" << format_report(r);
  }
}

TEST(Code, PlaquetteSizesAndColours) {
  CodeLayout L = build_code(9);
  int blue = 0;
  for (auto& p : L.plaquettes) {
    size_t n = p.vertices.size();
    EXPECT_TRUE(n == 4 || n == 6 || n == 8);
    if (p.color == Color::blue) {
      EXPECT_EQ(n, 4u);
      ++blue;
    }
  }
  EXPECT_GT(blue, 0);
}

TEST(Code, ValidationCatchesOddOverlap) {
  CodeLayout L = build_code(9);
  // Swap one vertex of an octagon for a vertex of a neighbour: size stays 8, overlaps go odd.
  auto it = std::find_if(L.plaquettes.begin(), L.plaquettes.end(),
                         [](const Plaquette& p) { return p.vertices.size() == 8; });
  ASSERT_NE(it, L.plaquettes.end());
  int far = -1;
  for (auto& q : L.plaquettes)
    for (int v : q.vertices)
      if (std::find(it->vertices.begin(), it->vertices.end(), v) == it->vertices.end()) far = v;
  it->vertices.back() = far;
  Report r = validate_code(L);
  EXPECT_FALSE(all_ok(r));
  EXPECT_FALSE(r[2].ok) << format_report(r);
}

TEST(Code, ValidationCatchesUncoveredVertex) {
  CodeLayout L = build_code(5);
  L.vertices.push_back({L.num_vertices(), 1000, 1000});
  L.vertices.push_back({L.num_vertices(), 1004, 1000});
  for (int i = 0; i < 2; ++i) L.logical_support.push_back(L.num_vertices() - 2 + i);
  EXPECT_FALSE(all_ok(validate_code(L)));
}

TEST(Code, ValidationCatchesDependentStabiliser) {
  CodeLayout L = build_code(5);
  L.plaquettes.push_back(L.plaquettes[0]);
  L.plaquettes.back().id = int(L.plaquettes.size()) - 1;
  EXPECT_FALSE(all_ok(validate_code(L)));
}

TEST(Code, LogicalCommutesWithEveryStabiliser) {
  CodeLayout L = build_code(13);
  Monomial lg = logical_operator(L);
  EXPECT_EQ(lg.weight() % 2, 1u);
  for (size_t p = 0; p < L.plaquettes.size(); ++p) EXPECT_TRUE(commutes(lg, L.stabilizer(int(p))));
}

TEST(Code, JsonRoundTrip) {
  CodeLayout L = build_code(9);
  CodeLayout R = layout_from_json(layout_to_json(L));
  ASSERT_EQ(R.num_vertices(), L.num_vertices());
  ASSERT_EQ(R.plaquettes.size(), L.plaquettes.size());
  for (size_t i = 0; i < L.plaquettes.size(); ++i) {
    EXPECT_EQ(R.plaquettes[i].vertices, L.plaquettes[i].vertices);
    EXPECT_EQ(R.plaquettes[i].color, L.plaquettes[i].color);
  }
  EXPECT_EQ(R.logical_support, L.logical_support);
  EXPECT_THROW(layout_from_json("{\"d\": 5}"), std::exception);
}

TEST(Unfold, EdgeCorrectionsFlipExactlyTheirEndpoints) {
  for (int d : {5, 9, 13}) {
    CodeLayout L = build_code(d);
    UnfoldedGraph g = unfold(L);
    for (size_t e = 0; e < g.edges.size(); ++e) {
      auto& E = g.edges[e];
      std::vector<int> want;
      for (int n : {E.a, E.b})
        if (g.node_plaquette[n] >= 0) want.push_back(g.node_plaquette[n]);
      if (want.size() == 2 && want[0] == want[1]) want.clear();
      std::sort(want.begin(), want.end());
      EXPECT_EQ(syndrome_of(L, Bits::of(E.correction)), want) << "d=" << d << " edge " << e;
    }
  }
}

TEST(Unfold, ImagePairsAndBlueSquares) {
  CodeLayout L = build_code(9);
  UnfoldedGraph g = unfold(L);
  int blue = 0, pairs = 0, singles = 0;
  for (auto& p : L.plaquettes) blue += p.color == Color::blue;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    auto& E = g.edges[e];
    if (E.kind == EdgeKind::single) {
      ++singles;
      EXPECT_EQ(E.image, int(e));
      EXPECT_EQ(E.correction.size(), 1u);
      // A single-mode edge joins a red node (or the left boundary) with a green node (or the right).
      EXPECT_TRUE(E.a == g.left || L.plaquettes[g.node_plaquette[E.a]].color == Color::red);
      EXPECT_TRUE(E.b == g.right || L.plaquettes[g.node_plaquette[E.b]].color == Color::green);
    } else {
      ++pairs;
      EXPECT_EQ(g.edges[E.image].image, int(e));
      EXPECT_NE(g.edges[E.image].kind, E.kind);
      EXPECT_EQ(E.correction[0], g.edges[E.image].correction[0]);
    }
  }
  EXPECT_EQ(pairs, 2 * blue);
  EXPECT_EQ(singles, L.num_vertices() - 4 * blue);
}

TEST(Distance, PathSearchGivesDAtFiveAndNine) {
  for (int d : {5, 9}) {
    CodeLayout L = build_code(d);
    std::vector<int> path;
    EXPECT_EQ(min_logical_weight(L, &path), d);
    EXPECT_GE(int(path.size()), (d + 1) / 2);
    Bits w = path_modes(L, path);
    EXPECT_EQ(int(w.count()), d);
    EXPECT_TRUE(syndrome_of(L, w).empty());
  }
}

// Brute force: no odd undetectable mode set of weight below 5, and one of weight 5.
TEST(Distance, BruteForceOracleAtFive) {
  CodeLayout L = build_code(5);
  int best = 1 << 20;
  for_subsets(L.num_vertices(), 5, [&](const std::vector<int>& s) {
    if (s.size() % 2 == 1 && syndrome_key(L, s) == 0) best = std::min(best, int(s.size()));
  });
  EXPECT_EQ(best, 5);
}

// Meet in the middle: an odd undetectable set of weight <= 7 splits into an even
// and an odd part of weight <= 4 with equal syndromes.
TEST(Distance, MeetInTheMiddleOracleAtNine) {
  CodeLayout L = build_code(9);
  ASSERT_LE(L.plaquettes.size(), 64u);
  std::unordered_map<uint64_t, uint8_t> seen;
  seen.reserve(1 << 21);
  bool mixed = false;
  for_subsets(L.num_vertices(), 4, [&](const std::vector<int>& s) {
    uint8_t& m = seen[syndrome_key(L, s)];
    m |= uint8_t(1 << (s.size() % 2));
    if (m == 3) mixed = true;
  });
  EXPECT_FALSE(mixed);
  std::vector<int> path;
  min_logical_weight(L, &path);
  Bits w = path_modes(L, path);
  EXPECT_EQ(w.count(), 9u);
  EXPECT_TRUE(syndrome_of(L, w).empty());
}

TEST(Distance, MutatedLayoutChangesDistance) {
  // Dropping the blue squares lets single-mode strings pass through them.
  CodeLayout L = build_code(5);
  std::vector<Plaquette> kept;
  for (auto& p : L.plaquettes)
    if (p.color != Color::blue) kept.push_back(p);
  for (size_t i = 0; i < kept.size(); ++i) kept[i].id = int(i);
  L.plaquettes = kept;
  EXPECT_FALSE(all_ok(validate_code(L)));
  int best = 1 << 20;
  for_subsets(L.num_vertices(), 5, [&](const std::vector<int>& s) {
    if (s.size() % 2 == 1 && syndrome_key(L, s) == 0) best = std::min(best, int(s.size()));
  });
  EXPECT_LT(best, 5);
}
