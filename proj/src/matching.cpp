#include "mcc/matching.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcc {

namespace {

// Follows the structure of the classic primal-dual implementation: endpoints
// are numbered 2k, 2k+1 for edge k, labels are 0 free, 1 S, 2 T, and all duals
// are kept doubled so integer weights stay integral.
class Blossom {
 public:
  Blossom(int n, const std::vector<WeightedEdge>& edges, bool maxcard)
      : n_(n), e_(edges), maxcard_(maxcard) {
    int m = int(e_.size());
    endpoint_.resize(2 * m);
    neighbend_.assign(n_, {});
    int64_t maxw = 0;
    for (int k = 0; k < m; ++k) {
      endpoint_[2 * k] = e_[k].u;
      endpoint_[2 * k + 1] = e_[k].v;
      neighbend_[e_[k].u].push_back(2 * k + 1);
      neighbend_[e_[k].v].push_back(2 * k);
      maxw = std::max(maxw, e_[k].w);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    std::iota(inblossom_.begin(), inblossom_.end(), 0);
    parent_.assign(2 * n_, -1);
    childs_.assign(2 * n_, {});
    base_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) base_[v] = v;
    endps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    bbest_.assign(2 * n_, {});
    has_bbest_.assign(2 * n_, false);
    for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
    dual_.assign(2 * n_, 0);
    for (int v = 0; v < n_; ++v) dual_[v] = maxw;
    allow_.assign(m, false);
  }

  std::vector<int> run() {
    for (int stage = 0; stage < n_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = n_; b < 2 * n_; ++b) has_bbest_[b] = false, bbest_[b].clear();
      std::fill(allow_.begin(), allow_.end(), false);
      queue_.clear();
      for (int v = 0; v < n_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            int k = p / 2, w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            int64_t kslack = 0;
            if (!allow_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allow_[k] = true;
            }
            if (allow_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = -1, deltaedge = -1, deltablossom = -1;
        int64_t delta = 0;
        if (!maxcard_) {
          deltatype = 1;
          delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
        }
        for (int v = 0; v < n_; ++v)
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            int64_t d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) delta = d, deltatype = 2, deltaedge = bestedge_[v];
          }
        for (int b = 0; b < 2 * n_; ++b)
          if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            int64_t ks = slack(bestedge_[b]);
            assert(ks % 2 == 0);
            int64_t d = ks / 2;
            if (deltatype == -1 || d < delta) delta = d, deltatype = 3, deltaedge = bestedge_[b];
          }
        for (int b = n_; b < 2 * n_; ++b)
          if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 &&
              (deltatype == -1 || dual_[b] < delta))
            delta = dual_[b], deltatype = 4, deltablossom = b;
        if (deltatype == -1) {
          deltatype = 1;
          delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
        }
        for (int v = 0; v < n_; ++v) {
          int l = label_[inblossom_[v]];
          if (l == 1) dual_[v] -= delta;
          else if (l == 2) dual_[v] += delta;
        }
        for (int b = n_; b < 2 * n_; ++b)
          if (base_[b] >= 0 && parent_[b] == -1) {
            if (label_[b] == 1) dual_[b] += delta;
            else if (label_[b] == 2) dual_[b] -= delta;
          }
        if (deltatype == 1) break;
        if (deltatype == 2) {
          allow_[deltaedge] = true;
          int i = e_[deltaedge].u, j = e_[deltaedge].v;
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allow_[deltaedge] = true;
          queue_.push_back(e_[deltaedge].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (int b = n_; b < 2 * n_; ++b)
        if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0)
          expand_blossom(b, true);
    }
    std::vector<int> out(n_, -1);
    for (int v = 0; v < n_; ++v)
      if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
    return out;
  }

 private:
  int64_t slack(int k) const { return dual_[e_[k].u] + dual_[e_[k].v] - 2 * e_[k].w; }

  template <class F>
  void leaves(int b, F&& f) const {
    if (b < n_) {
      f(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, f);
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, [&](int v) { queue_.push_back(v); });
    } else {
      int base = base_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = base_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = e_[k].u, w = e_[k].v;
    int bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
    int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    auto& path = childs_[b];
    auto& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      parent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      parent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    leaves(b, [&](int x) {
      if (label_[inblossom_[x]] == 2) queue_.push_back(x);
      inblossom_[x] = b;
    });
    std::vector<int> bestto(2 * n_, -1);
    auto consider = [&](int kk) {
      int i = e_[kk].u, j = e_[kk].v;
      if (inblossom_[j] == b) std::swap(i, j);
      int bj = inblossom_[j];
      if (bj != b && label_[bj] == 1 && (bestto[bj] == -1 || slack(kk) < slack(bestto[bj])))
        bestto[bj] = kk;
    };
    for (int c : path) {
      if (!has_bbest_[c]) {
        leaves(c, [&](int x) {
          for (int p : neighbend_[x]) consider(p / 2);
        });
      } else {
        for (int kk : bbest_[c]) consider(kk);
      }
      has_bbest_[c] = false;
      bbest_[c].clear();
      bestedge_[c] = -1;
    }
    bbest_[b].clear();
    for (int kk : bestto)
      if (kk != -1) bbest_[b].push_back(kk);
    has_bbest_[b] = true;
    bestedge_[b] = -1;
    for (int kk : bbest_[b])
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }

  void expand_blossom(int b, bool endstage) {
    for (int s : childs_[b]) {
      parent_[s] = -1;
      if (s < n_) inblossom_[s] = s;
      else if (endstage && dual_[s] == 0) expand_blossom(s, endstage);
      else leaves(s, [&](int v) { inblossom_[v] = s; });
    }
    if (!endstage && label_[b] == 2) {
      auto& ch = childs_[b];
      auto& ep = endps_[b];
      int len = int(ch.size());
      int entry = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = int(std::find(ch.begin(), ch.end(), entry) - ch.begin());
      int jstep, trick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        trick = 0;
      } else {
        jstep = -1;
        trick = 1;
      }
      auto at = [&](const std::vector<int>& a, int i) { return a[((i % len) + len) % len]; };
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[at(ep, j - trick) ^ trick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allow_[at(ep, j - trick) / 2] = true;
        j += jstep;
        p = at(ep, j - trick) ^ trick;
        allow_[p / 2] = true;
        j += jstep;
      }
      int bv = at(ch, j);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (at(ch, j) != entry) {
        bv = at(ch, j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int found = -1;
        leaves(bv, [&](int v) {
          if (found == -1 && label_[v] != 0) found = v;
        });
        if (found != -1) {
          label_[found] = 0;
          label_[endpoint_[mate_[base_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    bbest_[b].clear();
    has_bbest_[b] = false;
    bestedge_[b] = -1;
    unused_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) t = parent_[t];
    if (t >= n_) augment_blossom(t, v);
    auto& ch = childs_[b];
    auto& ep = endps_[b];
    int len = int(ch.size());
    auto at = [&](const std::vector<int>& a, int i) { return a[((i % len) + len) % len]; };
    int i = int(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i, jstep, trick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      trick = 0;
    } else {
      jstep = -1;
      trick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = at(ch, j);
      int p = at(ep, j - trick) ^ trick;
      if (t >= n_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = at(ch, j);
      if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    base_[b] = base_[ch[0]];
  }

  void augment_matching(int k) {
    int v = e_[k].u, w = e_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
      while (true) {
        int bs = inblossom_[s];
        if (bs >= n_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= n_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int n_;
  const std::vector<WeightedEdge>& e_;
  bool maxcard_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, parent_, base_, bestedge_, unused_, queue_;
  std::vector<std::vector<int>> childs_, endps_, bbest_;
  std::vector<bool> has_bbest_, allow_;
  std::vector<int64_t> dual_;
};

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality) {
  if (n == 0) return {};
  for (auto& e : edges)
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("max_weight_matching: bad edge");
  Blossom b(n, edges, max_cardinality);
  return b.run();
}

BoundaryMatching match_with_boundary(const std::vector<std::vector<int64_t>>& dist,
                                     const std::vector<int64_t>& bdist) {
  int n = int(bdist.size());
  BoundaryMatching out;
  out.partner.assign(n, -1);
  // Pairs that cannot beat sending both ends to the boundary are dropped; the
  // rest split into independent components.
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist[i][j] < bdist[i] + bdist[j]) adj[i].push_back(j), adj[j].push_back(i);
  std::vector<int> comp(n, -1), local(n);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = s;
    for (size_t q = 0; q < members.size(); ++q)
      for (int v : adj[members[q]])
        if (comp[v] < 0) comp[v] = s, members.push_back(v);
    int m = int(members.size());
    if (m == 1) {
      out.weight += bdist[s];
      continue;
    }
    for (int k = 0; k < m; ++k) local[members[k]] = k;
    // Node k is event members[k], node m+k its boundary twin.
    std::vector<WeightedEdge> edges;
    int64_t big = 0;
    for (int v : members) big = std::max(big, bdist[v]);
    for (int v : members)
      for (int u : adj[v])
        if (u > v) big = std::max(big, dist[v][u]);
    big += 1;
    for (int k = 0; k < m; ++k) {
      int v = members[k];
      edges.push_back({k, m + k, big - bdist[v]});
      for (int u : adj[v])
        if (u > v) {
          edges.push_back({k, local[u], big - dist[v][u]});
          edges.push_back({m + k, m + local[u], big});
        }
    }
    auto mate = max_weight_matching(2 * m, edges, true);
    for (int k = 0; k < m; ++k) {
      int v = members[k], q = mate[k];
      if (q < 0) throw std::runtime_error("match_with_boundary: no perfect matching");
      if (q >= m) {
        out.partner[v] = -1;
        out.weight += bdist[v];
      } else {
        out.partner[v] = members[q];
        if (v < members[q]) out.weight += dist[v][members[q]];
      }
    }
  }
  return out;
}

BoundaryMatching match_with_boundary_brute(const std::vector<std::vector<int64_t>>& dist,
                                           const std::vector<int64_t>& bdist) {
  int n = int(bdist.size());
  if (n > 20) throw std::invalid_argument("match_with_boundary_brute: too many events");
  const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> f(size_t(1) << n, inf);
  std::vector<int> choice(size_t(1) << n, -2);
  f[0] = 0;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    int i = __builtin_ctz(mask);
    uint32_t rest = mask & ~(1u << i);
    f[mask] = f[rest] + bdist[i];
    choice[mask] = -1;
    for (int j = i + 1; j < n; ++j)
      if (rest >> j & 1) {
        int64_t c = f[rest & ~(1u << j)] + dist[i][j];
        if (c < f[mask]) f[mask] = c, choice[mask] = j;
      }
  }
  BoundaryMatching out;
  out.partner.assign(n, -1);
  out.weight = f[(1u << n) - 1];
  for (uint32_t mask = (1u << n) - 1; mask;) {
    int i = __builtin_ctz(mask), j = choice[mask];
    mask &= ~(1u << i);
    if (j >= 0) out.partner[i] = j, out.partner[j] = i, mask &= ~(1u << j);
  }
  return out;
}

}  // namespace mcc
