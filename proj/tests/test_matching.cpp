#include <gtest/gtest.h>

#include <limits>
#include <queue>
#include <random>

#include "mcc/decoder.hpp"
#include "mcc/matching.hpp"

using namespace mcc;

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

// Exhaustive maximum-weight matching; with max_cardinality, cardinality is compared first.
std::pair<int, int64_t> brute_matching(int n, const std::vector<WeightedEdge>& edges, bool max_card) {
  std::vector<char> used(n, 0);
  std::pair<int, int64_t> best{0, 0};
  std::function<void(size_t, int, int64_t)> rec = [&](size_t k, int card, int64_t w) {
    std::pair<int, int64_t> cur{max_card ? card : 0, w};
    if (cur > best) best = cur;
    for (size_t e = k; e < edges.size(); ++e) {
      auto& E = edges[e];
      if (used[E.u] || used[E.v]) continue;
      used[E.u] = used[E.v] = 1;
      rec(e + 1, card + 1, w + E.w);
      used[E.u] = used[E.v] = 0;
    }
  };
  rec(0, 0, 0);
  return best;
}

std::pair<int, int64_t> score(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges,
                              bool max_card) {
  int card = 0;
  int64_t w = 0;
  for (auto& e : edges)
    if (mate[e.u] == e.v && mate[e.v] == e.u) ++card, w += e.w;
  return {max_card ? card : 0, w};
}

// Shortest-path metric from a random sparse graph, with a boundary vertex n.
void random_metric(std::mt19937_64& rng, int n, std::vector<std::vector<int64_t>>& dist,
                   std::vector<int64_t>& bdist) {
  int m = n + 1;
  std::vector<std::vector<int64_t>> w(m, std::vector<int64_t>(m, kInf));
  for (int i = 0; i < m; ++i) w[i][i] = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (rng() % 3 == 0 || j == i + 1) w[i][j] = w[j][i] = 1 + int64_t(rng() % 20);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) w[i][j] = std::min(w[i][j], w[i][k] + w[k][j]);
  dist.assign(n, std::vector<int64_t>(n));
  bdist.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist[i][j] = w[i][j];
    bdist[i] = w[i][n];
  }
}

std::vector<int64_t> dijkstra(const MatchingGraph& g, int src) {
  std::vector<int64_t> d(g.num_nodes(), kInf);
  using Item = std::pair<int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (int k = g.adj_start[u]; k < g.adj_start[u + 1]; ++k) {
      auto& e = g.edges[g.adj[k]];
      int v = e.u == u ? e.v : e.u;
      if (du + e.w < d[v]) d[v] = du + e.w, pq.push({d[v], v});
    }
  }
  return d;
}

}  // namespace

TEST(Blossom, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 + int(rng() % 9);
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 2) edges.push_back({i, j, int64_t(rng() % 50)});
    for (bool mc : {false, true}) {
      auto mate = max_weight_matching(n, edges, mc);
      ASSERT_EQ(int(mate.size()), n);
      EXPECT_EQ(score(mate, edges, mc), brute_matching(n, edges, mc)) << "trial " << trial << " mc " << mc;
    }
  }
}

TEST(Blossom, OddCycleNeedsBlossom) {
  // Triangle with a pendant: the optimum uses the pendant edge.
  std::vector<WeightedEdge> e{{0, 1, 10}, {1, 2, 10}, {0, 2, 10}, {2, 3, 9}};
  auto mate = max_weight_matching(4, e, true);
  EXPECT_EQ(mate[2], 3);
  EXPECT_EQ(mate[3], 2);
  EXPECT_NE(mate[0], -1);
}

TEST(BoundaryMatching, TwoCloseEventsPairUp) {
  std::vector<std::vector<int64_t>> dist{{0, 3}, {3, 0}};
  auto m = match_with_boundary(dist, {10, 10});
  EXPECT_EQ(m.partner[0], 1);
  EXPECT_EQ(m.weight, 3);
}

TEST(BoundaryMatching, EventNearBoundaryGoesThere) {
  std::vector<std::vector<int64_t>> dist{{0, 30}, {30, 0}};
  auto m = match_with_boundary(dist, {2, 5});
  EXPECT_EQ(m.partner[0], -1);
  EXPECT_EQ(m.partner[1], -1);
  EXPECT_EQ(m.weight, 7);
}

TEST(BoundaryMatching, AgreesWithSubsetOracleOn500Instances) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + int(rng() % 10);
    std::vector<std::vector<int64_t>> dist;
    std::vector<int64_t> bdist;
    random_metric(rng, n, dist, bdist);
    auto fast = match_with_boundary(dist, bdist);
    auto slow = match_with_boundary_brute(dist, bdist);
    ASSERT_EQ(fast.weight, slow.weight) << "trial " << trial;
    int64_t w = 0;
    for (int i = 0; i < n; ++i) {
      int j = fast.partner[i];
      if (j < 0) w += bdist[i];
      else {
        ASSERT_EQ(fast.partner[j], i);
        if (i < j) w += dist[i][j];
      }
    }
    EXPECT_EQ(w, fast.weight);
  }
}

TEST(BoundaryMatching, LargerInstancesAgree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 12 + int(rng() % 5);
    std::vector<std::vector<int64_t>> dist;
    std::vector<int64_t> bdist;
    random_metric(rng, n, dist, bdist);
    EXPECT_EQ(match_with_boundary(dist, bdist).weight, match_with_boundary_brute(dist, bdist).weight);
  }
}

// The decoder's matcher on its own space-time graph against an all-pairs oracle.
TEST(Mwpm, DecoderGraphAgreesWithOracle) {
  CodeLayout L = build_code(5);
  Decoder dec(L, 5, ErrorParams{0.001});
  const MatchingGraph& g = dec.graph();
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int k = 1 + int(rng() % 10);
    std::vector<int> events;
    while (int(events.size()) < k) {
      int v = int(rng() % g.boundary);
      if (std::find(events.begin(), events.end(), v) == events.end()) events.push_back(v);
    }
    std::vector<std::vector<int64_t>> dist(k, std::vector<int64_t>(k));
    std::vector<int64_t> bdist(k);
    for (int i = 0; i < k; ++i) {
      auto d = dijkstra(g, events[i]);
      for (int j = 0; j < k; ++j) dist[i][j] = d[events[j]];
      bdist[i] = d[g.boundary];
    }
    Pairing p = mwpm(g, events);
    ASSERT_EQ(p.weight, match_with_boundary_brute(dist, bdist).weight) << "trial " << trial;
    // Each path has odd degree exactly at its two ends, and the weights add up.
    int64_t total = 0;
    for (size_t q = 0; q < p.pairs.size(); ++q) {
      int a = events[p.pairs[q].first];
      int b = p.pairs[q].second < 0 ? g.boundary : events[p.pairs[q].second];
      Bits ends;
      for (int e : p.paths[q]) {
        ends.flip(g.edges[e].u);
        ends.flip(g.edges[e].v);
        total += g.edges[e].w;
      }
      EXPECT_EQ(ends, (Bits{a, b}));
    }
    EXPECT_EQ(total, p.weight);
    ++checked;
  }
  EXPECT_EQ(checked, 500);
}
