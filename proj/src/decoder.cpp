#include "mcc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "mcc/matching.hpp"

namespace mcc {

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 8;
constexpr double kWeightScale = 1000.0;

// Red/green plaquettes containing each mode.
std::vector<std::vector<int>> colour_incidence(const CodeLayout& L) {
  std::vector<std::vector<int>> inc(L.num_vertices());
  for (auto& p : L.plaquettes)
    if (p.color != Color::blue)
      for (int v : p.vertices) inc[v].push_back(p.id);
  return inc;
}

}  // namespace

std::pair<SyndromeHistory, Bits> blue_step(const SyndromeHistory& h, const CodeLayout& L) {
  SyndromeHistory out = h;
  Bits corr;
  auto inc = colour_incidence(L);
  for (auto& p : L.plaquettes) {
    if (p.color != Color::blue) continue;
    int ll = p.vertices[2];
    for (int r = 0; r <= h.rounds; ++r) {
      uint8_t prev = r ? h.at(r - 1, p.id) : 0;
      if (!(h.at(r, p.id) ^ prev)) continue;
      corr.flip(ll);
      for (int q : inc[ll])
        for (int t = r; t <= h.rounds; ++t) out.at(t, q) ^= 1;
    }
    for (int r = 0; r <= h.rounds; ++r) out.at(r, p.id) = 0;
  }
  return {out, corr};
}

MatchingGraph build_matching_graph(const CodeLayout& L, const Schedule& s, int rounds, const ErrorParams& params,
                                   Weighting weighting, FaultClassSummary* summary) {
  MatchingGraph g;
  g.unfolded = unfold(L);
  const UnfoldedGraph& u = g.unfolded;
  int n = u.num_nodes() - 2;  // boundaries are the last two unfolded nodes
  g.nodes_per_round = n;
  g.layers = rounds + 1;
  g.boundary = n * g.layers;

  auto is_bnd = [&](int x) { return x == u.left || x == u.right; };
  std::map<std::pair<int, int>, int> adjacent;  // unordered node pair -> any edge
  for (size_t e = 0; e < u.edges.size(); ++e) {
    auto [a, b] = std::minmax(u.edges[e].a, u.edges[e].b);
    adjacent.emplace(std::pair{a, b}, int(e));
  }

  std::vector<char> boundary_adjacent(n, 0);
  std::vector<int> boundary_edge(n, -1);
  for (size_t e = 0; e < u.edges.size(); ++e) {
    auto& ue = u.edges[e];
    if (is_bnd(ue.a) == is_bnd(ue.b)) continue;
    int a = is_bnd(ue.a) ? ue.b : ue.a;
    boundary_adjacent[a] = 1;
    boundary_edge[a] = int(e);
  }

  // First-order fault enumeration on a short experiment, fault in round 1.
  std::map<std::pair<int, int>, double> space, diag;  // diag key: (earlier, later)
  std::vector<double> time(n, 0), bnd(n, 0);
  FaultClassSummary sum;
  double eps = params.epsilon > 0 ? params.epsilon : 1e-3;
  const int probe_rounds = 3;
  for (int site = 0; site < s.num_sites(); ++site) {
    SiteKind kind = s.site_kind[site];
    int nb = kind == SiteKind::projection ? kProjectionBranches : 2;
    for (int b = 1; b < nb; ++b) {
      double p = kind == SiteKind::projection ? projection_branch_probability(b, eps) : eps;
      if (kind == SiteKind::measurement && !params.outcome_flips) continue;
      if (kind != SiteKind::measurement && kind != SiteKind::projection && !params.state_flips) continue;
      ScriptedSampler ss({{1, site, b}});
      SyndromeHistory h = run_memory_experiment(L, s, ss, probe_rounds);
      auto [hb, bcorr] = blue_step(h, L);
      Bits target = h.frame ^ bcorr;
      std::vector<std::pair<int, int>> ev;
      for (int r = 0; r <= probe_rounds; ++r)
        for (auto& pl : L.plaquettes) {
          if (pl.color == Color::blue) continue;
          uint8_t prev = r ? hb.at(r - 1, pl.id) : 0;
          if (hb.at(r, pl.id) ^ prev) ev.push_back({u.plaquette_node[pl.id], r});
        }
      if (ev.empty()) {
        sum.silent += p;
        continue;
      }
      // Split the events into graph-like pieces: boundary, time, space or
      // diagonal. Fewest pieces wins; among those, prefer a split whose data
      // correction matches the fault's own effect up to stabilisers.
      struct Piece {
        int kind, a, b;  // 0 boundary, 1 time, 2 space, 3 diagonal (a earlier)
      };
      auto classify = [&](std::pair<int, int> x, std::pair<int, int> y, Piece& pc) {
        auto [a, ra] = x;
        auto [b, rb] = y;
        if (ra > rb) std::swap(a, b), std::swap(ra, rb);
        bool adj = adjacent.count(std::minmax(a, b)) > 0;
        if (a == b && rb == ra + 1) pc = {1, a, a};
        else if (ra == rb && adj && a != b) pc = {2, std::min(a, b), std::max(a, b)};
        else if (rb == ra + 1 && adj && a != b) pc = {3, a, b};
        else return false;
        return true;
      };
      auto matches_fault = [&](const std::vector<Piece>& pcs) {
        Bits c = target;
        for (auto& pc : pcs) {
          if (pc.kind == 1) continue;
          int e = pc.kind == 0 ? boundary_edge[pc.a] : adjacent.at(std::minmax(pc.a, pc.b));
          for (int m : u.edges[e].correction) c.flip(m);
        }
        return c.count() % 2 == 0 && syndrome_of(L, c).empty();
      };
      std::vector<Piece> best, cur;
      bool best_ok = false;
      std::vector<char> used(ev.size(), 0);
      std::function<void()> search = [&]() {
        if (!best.empty() && (cur.size() > best.size() || (cur.size() == best.size() && best_ok))) return;
        size_t i = 0;
        while (i < ev.size() && used[i]) ++i;
        if (i == ev.size()) {
          bool ok = matches_fault(cur);
          if (best.empty() || cur.size() < best.size() || (ok && !best_ok)) best = cur, best_ok = ok;
          return;
        }
        used[i] = 1;
        for (size_t j = i + 1; j < ev.size(); ++j) {
          Piece pc;
          if (used[j] || !classify(ev[i], ev[j], pc)) continue;
          used[j] = 1;
          cur.push_back(pc);
          search();
          cur.pop_back();
          used[j] = 0;
        }
        if (boundary_adjacent[ev[i].first]) {
          cur.push_back({0, ev[i].first, -1});
          search();
          cur.pop_back();
        }
        used[i] = 0;
      };
      if (ev.size() <= 8) search();
      if (best.empty()) {
        sum.other += p;
        continue;
      }
      for (auto& pc : best) {
        switch (pc.kind) {
          case 0: bnd[pc.a] += p, sum.boundary += p; break;
          case 1: time[pc.a] += p, sum.time += p; break;
          case 2: space[{pc.a, pc.b}] += p, sum.space += p; break;
          default: diag[{pc.a, pc.b}] += p, sum.diagonal += p; break;
        }
      }
    }
  }
  if (summary) *summary = sum;

  double pmin = 1;
  for (auto& [k, p] : space) pmin = std::min(pmin, p);
  for (double p : time)
    if (p > 0) pmin = std::min(pmin, p);
  for (double p : bnd)
    if (p > 0) pmin = std::min(pmin, p);
  auto weight = [&](double p) -> int64_t {
    if (weighting == Weighting::unit) return int64_t(kWeightScale);
    if (p <= 0) p = pmin;
    return std::max<int64_t>(1, std::llround(-std::log(std::min(p, 0.5)) * kWeightScale));
  };

  for (int r = 0; r < g.layers; ++r) {
    for (size_t e = 0; e < u.edges.size(); ++e) {
      auto& ue = u.edges[e];
      if (is_bnd(ue.a) && is_bnd(ue.b)) continue;
      if (is_bnd(ue.a) || is_bnd(ue.b)) {
        int a = is_bnd(ue.a) ? ue.b : ue.a;
        g.edges.push_back({g.node(a, r), g.boundary, weight(bnd[a]), bnd[a], int(e)});
      } else {
        auto k = std::minmax(ue.a, ue.b);
        double p = space.count(k) ? space[k] : 0;
        g.edges.push_back({g.node(ue.a, r), g.node(ue.b, r), weight(p), p, int(e)});
      }
    }
    if (r + 1 == g.layers) continue;
    for (int a = 0; a < n; ++a) g.edges.push_back({g.node(a, r), g.node(a, r + 1), weight(time[a]), time[a], -1});
    if (weighting == Weighting::unit) continue;
    for (auto& [k, p] : diag) {
      int e = adjacent.at(std::minmax(k.first, k.second));
      g.edges.push_back({g.node(k.first, r), g.node(k.second, r + 1), weight(p), p, e});
    }
  }

  std::vector<int> deg(g.num_nodes() + 1, 0);
  for (auto& e : g.edges) ++deg[e.u + 1], ++deg[e.v + 1];
  for (int i = 0; i < g.num_nodes(); ++i) deg[i + 1] += deg[i];
  g.adj_start = deg;
  g.adj.assign(g.edges.size() * 2, 0);
  std::vector<int> fill(deg.begin(), deg.end() - 1);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    g.adj[fill[g.edges[e].u]++] = int(e);
    g.adj[fill[g.edges[e].v]++] = int(e);
  }
  return g;
}

namespace {

// Dijkstra from src, stopping beyond cutoff. pred holds the edge used to reach
// each node, -1 if unreached.
void dijkstra(const MatchingGraph& g, int src, int64_t cutoff, std::vector<int64_t>& dist, std::vector<int>& pred) {
  dist.assign(g.num_nodes(), kInf);
  pred.assign(g.num_nodes(), -1);
  using Item = std::pair<int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d != dist[x] || d > cutoff) continue;
    // The boundary is a sink: paths never pass through it.
    if (x == g.boundary && x != src) continue;
    for (int i = g.adj_start[x]; i < g.adj_start[x + 1]; ++i) {
      auto& e = g.edges[g.adj[i]];
      int y = e.u == x ? e.v : e.u;
      int64_t nd = d + e.w;
      if (nd < dist[y]) dist[y] = nd, pred[y] = g.adj[i], pq.push({nd, y});
    }
  }
}

std::vector<int> trace_path(const MatchingGraph& g, const std::vector<int>& pred, int from, int to) {
  std::vector<int> path;
  for (int x = to; x != from;) {
    int e = pred[x];
    if (e < 0) throw std::logic_error("mwpm: broken shortest-path tree");
    path.push_back(e);
    x = g.edges[e].u == x ? g.edges[e].v : g.edges[e].u;
  }
  return path;
}

}  // namespace

Pairing mwpm(const MatchingGraph& g, const std::vector<int>& events) {
  Pairing out;
  int k = int(events.size());
  if (k == 0) return out;
  std::vector<int64_t> bd;
  std::vector<int> bpred;
  dijkstra(g, g.boundary, kInf, bd, bpred);
  std::vector<int64_t> bdist(k);
  int64_t maxb = 0;
  for (int i = 0; i < k; ++i) {
    bdist[i] = bd[events[i]];
    if (bdist[i] >= kInf) throw std::runtime_error("mwpm: event with no path to the boundary");
    maxb = std::max(maxb, bdist[i]);
  }
  std::vector<std::vector<int64_t>> dist(k, std::vector<int64_t>(k, kInf));
  std::vector<std::vector<int>> preds(k);
  std::vector<int64_t> dd;
  for (int i = 0; i < k; ++i) {
    dijkstra(g, events[i], bdist[i] + maxb, dd, preds[i]);
    for (int j = 0; j < k; ++j) dist[i][j] = i == j ? 0 : dd[events[j]];
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) dist[i][j] = dist[j][i] = std::min(dist[i][j], dist[j][i]);

  BoundaryMatching m = match_with_boundary(dist, bdist);
  out.weight = m.weight;
  for (int i = 0; i < k; ++i) {
    int j = m.partner[i];
    if (j >= 0 && j < i) continue;
    out.pairs.push_back({i, j});
    if (j < 0) {
      out.paths.push_back(trace_path(g, bpred, g.boundary, events[i]));
    } else if (preds[i][events[j]] >= 0 || events[i] == events[j]) {
      out.paths.push_back(trace_path(g, preds[i], events[i], events[j]));
    } else {
      out.paths.push_back(trace_path(g, preds[j], events[j], events[i]));
    }
  }
  return out;
}

Decoder::Decoder(const CodeLayout& layout, int rounds, const ErrorParams& params, Weighting weighting)
    : layout_(layout), schedule_(build_schedule(layout)),
      graph_(build_matching_graph(layout, schedule_, rounds, params, weighting)) {}

DecodeOutcome Decoder::decode(const SyndromeHistory& h) const {
  if (h.rounds + 1 != graph_.layers) throw std::invalid_argument("decode: history rounds do not match the graph");
  DecodeOutcome out;
  auto [hb, corr] = blue_step(h, layout_);
  std::vector<int> events;
  for (int r = 0; r <= hb.rounds; ++r)
    for (auto& p : layout_.plaquettes) {
      if (p.color == Color::blue) continue;
      uint8_t prev = r ? hb.at(r - 1, p.id) : 0;
      if (hb.at(r, p.id) ^ prev) events.push_back(graph_.node(graph_.unfolded.plaquette_node[p.id], r));
    }
  Pairing pr = mwpm(graph_, events);
  out.matching_weight = pr.weight;
  for (auto& path : pr.paths)
    for (int e : path) {
      int c = graph_.edges[e].correction;
      if (c < 0) continue;
      for (int m : graph_.unfolded.edges[c].correction) corr.flip(m);
    }
  out.correction = corr;
  out.residual = h.frame ^ corr;
  out.syndrome_clean = syndrome_of(layout_, out.residual).empty();
  out.logical_failure = out.residual.count() % 2 == 1;
  return out;
}

DecodeOutcome decode(const SyndromeHistory& h, const CodeLayout& layout, const ErrorParams& params) {
  Decoder dec(layout, h.rounds, params);
  return dec.decode(h);
}

}  // namespace mcc
