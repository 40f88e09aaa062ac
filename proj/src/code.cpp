#include "mcc/code.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mcc {

namespace {

int pmod(int a, int m) { return ((a % m) + m) % m; }

// Octagon vertices in quarter units, counter-clockwise from the lower corner
// of the right-hand square.
std::array<Point, 8> octagon_corners(int U, int V) {
  int x = 4 * U, y = 4 * V;
  return {{{x + 3, y - 1}, {x + 3, y + 1}, {x + 1, y + 3}, {x - 1, y + 3},
           {x - 3, y + 1}, {x - 3, y - 1}, {x - 1, y - 3}, {x + 1, y - 3}}};
}

std::array<Point, 4> square_corners(int U, int V) {
  int x = 4 * U, y = 4 * V;
  return {{{x + 1, y + 1}, {x - 1, y + 1}, {x - 1, y - 1}, {x + 1, y - 1}}};
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

const char* color_name(Color c) {
  switch (c) {
    case Color::red: return "red";
    case Color::green: return "green";
    default: return "blue";
  }
}

Monomial CodeLayout::stabilizer(int p) const { return hermitian(support(p)); }

bool all_ok(const Report& r) {
  return std::all_of(r.begin(), r.end(), [](const Check& c) { return c.ok; });
}

std::string format_report(const Report& r) {
  std::ostringstream os;
  for (auto& c : r) {
    os << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

std::vector<Point> patch_points(int d) {
  std::vector<Point> pts;
  for (int U = 1; U <= d; ++U)
    for (int V = 0; V <= d; ++V) {
      if ((U + V) % 2 == 0 || U + V > d) continue;
      auto c = square_corners(U, V);
      if (U + V < d) pts.insert(pts.end(), c.begin(), c.end());
      else pts.push_back(c[2]);
    }
  return pts;
}

std::vector<Plaquette> lattice_plaquettes(const std::vector<Point>& pts) {
  std::map<Point, int> index;
  for (size_t i = 0; i < pts.size(); ++i) index[pts[i]] = int(i);
  int x0 = 1 << 30, x1 = -(1 << 30), y0 = x0, y1 = x1;
  for (auto& p : pts) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  std::vector<Plaquette> out;
  auto keep = [&](auto corners, Color c, int U, int V) {
    Plaquette p{0, c, {}, 4 * U, 4 * V};
    for (auto& q : corners)
      if (auto it = index.find(q); it != index.end()) p.vertices.push_back(it->second);
    if (p.vertices.size() > 2) out.push_back(std::move(p));
  };
  for (int U = floor_div(x0, 4) - 1; U <= floor_div(x1, 4) + 1; ++U)
    for (int V = floor_div(y0, 4) - 1; V <= floor_div(y1, 4) + 1; ++V) {
      if (pmod(U + V, 2)) keep(square_corners(U, V), Color::blue, U, V);
      else keep(octagon_corners(U, V), pmod(U, 2) ? Color::green : Color::red, U, V);
    }
  std::stable_sort(out.begin(), out.end(), [](const Plaquette& a, const Plaquette& b) {
    if (a.color != b.color) {
      static const int rank[] = {1, 2, 0};
      return rank[int(a.color)] < rank[int(b.color)];
    }
    return std::pair(a.cy, a.cx) < std::pair(b.cy, b.cx);
  });
  for (size_t i = 0; i < out.size(); ++i) out[i].id = int(i);
  return out;
}

CodeLayout build_code(int d) {
  if (d < 5 || d % 2 == 0 || d % 4 != 1)
    throw std::invalid_argument("build_code: d must be >= 5 with d = 1 (mod 4), got " +
                                std::to_string(d));
  auto pts = patch_points(d);
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
  CodeLayout L;
  L.d = d;
  for (size_t i = 0; i < pts.size(); ++i) L.vertices.push_back({int(i), pts[i].x, pts[i].y});
  L.plaquettes = lattice_plaquettes(pts);
  for (size_t i = 0; i < pts.size(); ++i) L.logical_support.push_back(int(i));
  return L;
}

Monomial logical_operator(const CodeLayout& layout) {
  return hermitian(Bits::of(layout.logical_support));
}

std::vector<int> syndrome_of(const CodeLayout& layout, const Bits& modes) {
  std::vector<int> out;
  for (auto& p : layout.plaquettes) {
    int par = 0;
    for (int v : p.vertices) par ^= modes.get(v);
    if (par) out.push_back(p.id);
  }
  return out;
}

Report validate_code(const CodeLayout& L) {
  Report r;
  int n = L.num_vertices();
  r.push_back({"vertex count odd", n % 2 == 1, "V=" + std::to_string(n)});

  bool sizes = true;
  std::string bad;
  for (auto& p : L.plaquettes) {
    size_t s = p.vertices.size();
    if (s % 2 || s < 4 || s > 8) sizes = false, bad = "plaquette " + std::to_string(p.id);
  }
  r.push_back({"plaquette sizes even (4, 6 or 8)", sizes, bad});

  std::vector<Bits> sup;
  for (auto& p : L.plaquettes) sup.push_back(L.support(p.id));
  bool ov = true;
  bad.clear();
  for (size_t a = 0; a < sup.size() && ov; ++a)
    for (size_t b = a + 1; b < sup.size(); ++b)
      if (sup[a].and_count(sup[b]) % 2) {
        ov = false;
        bad = std::to_string(a) + "," + std::to_string(b);
        break;
      }
  r.push_back({"pairwise overlaps even", ov, bad});

  // Lattice edges are consecutive vertices at distance 2 or 2*sqrt(2).
  std::map<std::pair<int, int>, std::vector<int>> edge_owner;
  for (auto& p : L.plaquettes) {
    size_t s = p.vertices.size();
    for (size_t k = 0; k < s; ++k) {
      int a = p.vertices[k], b = p.vertices[(k + 1) % s];
      int dx = L.vertices[a].x - L.vertices[b].x, dy = L.vertices[a].y - L.vertices[b].y;
      int d2 = dx * dx + dy * dy;
      if (d2 != 4 && d2 != 8) continue;
      edge_owner[{std::min(a, b), std::max(a, b)}].push_back(p.id);
    }
  }
  bool colors = true;
  bad.clear();
  for (auto& [e, owners] : edge_owner)
    for (size_t i = 0; i < owners.size(); ++i)
      for (size_t j = i + 1; j < owners.size(); ++j)
        if (L.plaquettes[owners[i]].color == L.plaquettes[owners[j]].color)
          colors = false, bad = std::to_string(owners[i]) + "," + std::to_string(owners[j]);
  r.push_back({"neighbouring plaquettes differ in colour", colors, bad});

  std::vector<int> per_color(size_t(n) * 3, 0);
  for (auto& p : L.plaquettes)
    for (int v : p.vertices) ++per_color[size_t(v) * 3 + int(p.color)];
  bool once = std::all_of(per_color.begin(), per_color.end(), [](int c) { return c <= 1; });
  r.push_back({"each vertex in at most one plaquette per colour", once, ""});

  size_t rank = gf2_rank(sup);
  r.push_back({"independent generators = (V-1)/2", int(rank) * 2 == n - 1,
               "rank=" + std::to_string(rank)});

  Bits covered;
  for (auto& s : sup) covered |= s;
  r.push_back({"every vertex covered", int(covered.count()) == n, ""});

  Monomial lg = logical_operator(L);
  bool comm = true;
  for (auto& p : L.plaquettes) comm = comm && commutes(lg, L.stabilizer(p.id));
  bool odd = lg.weight() % 2 == 1;
  r.push_back({"logical operator odd and commutes with all generators", comm && odd, ""});
  return r;
}

UnfoldedGraph unfold(const CodeLayout& L) {
  UnfoldedGraph g;
  int n = L.num_vertices();
  g.plaquette_node.assign(L.plaquettes.size(), -1);
  std::vector<int> red(n, -1), green(n, -1), blue(n, -1);
  for (auto& p : L.plaquettes) {
    for (int v : p.vertices)
      (p.color == Color::red ? red : p.color == Color::green ? green : blue)[v] = p.id;
    if (p.color == Color::blue) continue;
    g.plaquette_node[p.id] = int(g.node_plaquette.size());
    g.node_plaquette.push_back(p.id);
  }
  g.left = int(g.node_plaquette.size());
  g.node_plaquette.push_back(-1);
  g.right = int(g.node_plaquette.size());
  g.node_plaquette.push_back(-1);

  auto rnode = [&](int v) { return red[v] < 0 ? g.left : g.plaquette_node[red[v]]; };
  auto gnode = [&](int v) { return green[v] < 0 ? g.right : g.plaquette_node[green[v]]; };

  for (auto& p : L.plaquettes) {
    if (p.color != Color::blue) continue;
    const auto& c = p.vertices;
    bool type_a = pmod(p.cx / 4, 2) == 1;  // reds left and right
    int er = type_a ? c[1] : c[3], eg = type_a ? c[3] : c[1];
    int id = int(g.edges.size());
    g.edges.push_back({rnode(c[0]), rnode(er), EdgeKind::e_red, {c[0], er}, id + 1});
    g.edges.push_back({gnode(c[0]), gnode(eg), EdgeKind::e_green, {c[0], eg}, id});
  }
  for (int v = 0; v < n; ++v) {
    if (blue[v] >= 0) continue;
    if (red[v] < 0 && green[v] < 0) throw std::logic_error("unfold: vertex with no red or green");
    int id = int(g.edges.size());
    g.edges.push_back({rnode(v), gnode(v), EdgeKind::single, {v}, id});
  }
  return g;
}

int min_logical_weight(const CodeLayout& L, std::vector<int>* path_edges) {
  UnfoldedGraph g = unfold(L);
  int nn = g.num_nodes();
  std::vector<std::vector<std::pair<int, int>>> adj(nn);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].a].push_back({g.edges[e].b, int(e)});
    adj[g.edges[e].b].push_back({g.edges[e].a, int(e)});
  }
  // Lower bound to the right boundary when every pair edge is free.
  std::vector<int> h(nn, 1 << 20);
  {
    h[g.right] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& e : g.edges) {
        int w = e.kind == EdgeKind::single ? 1 : 0;
        if (h[e.a] + w < h[e.b]) h[e.b] = h[e.a] + w, changed = true;
        if (h[e.b] + w < h[e.a]) h[e.a] = h[e.b] + w, changed = true;
      }
    }
  }
  std::vector<char> mode(L.num_vertices(), 0), on_path(nn, 0);
  std::vector<int> stack, best_path;
  int best = 1 << 20, cost = 0;
  std::function<void(int)> dfs = [&](int u) {
    if (u == g.right) {
      if (cost < best) best = cost, best_path = stack;
      return;
    }
    for (auto [v, e] : adj[u]) {
      if (on_path[v]) continue;
      int delta = 0;
      for (int m : g.edges[e].correction) delta += mode[m] ? -1 : 1;
      if (cost + delta + h[v] >= best) continue;
      for (int m : g.edges[e].correction) mode[m] ^= 1;
      cost += delta;
      on_path[v] = 1;
      stack.push_back(e);
      dfs(v);
      stack.pop_back();
      on_path[v] = 0;
      cost -= delta;
      for (int m : g.edges[e].correction) mode[m] ^= 1;
    }
  };
  on_path[g.left] = 1;
  dfs(g.left);
  if (path_edges) *path_edges = best_path;
  return best;
}

std::string layout_to_json(const CodeLayout& L) {
  nlohmann::json j;
  j["d"] = L.d;
  j["units"] = "quarter lattice spacing";
  for (auto& v : L.vertices) j["vertices"].push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
  for (auto& p : L.plaquettes)
    j["plaquettes"].push_back({{"id", p.id},
                               {"color", color_name(p.color)},
                               {"vertices", p.vertices},
                               {"center", {p.cx, p.cy}}});
  j["logical_support"] = L.logical_support;
  return j.dump(1);
}

CodeLayout layout_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  CodeLayout L;
  L.d = j.at("d").get<int>();
  for (auto& v : j.at("vertices")) L.vertices.push_back({v.at("id"), v.at("x"), v.at("y")});
  for (auto& p : j.at("plaquettes")) {
    std::string c = p.at("color");
    Color col = c == "red" ? Color::red : c == "green" ? Color::green : Color::blue;
    if (c != "red" && c != "green" && c != "blue") throw std::runtime_error("bad colour " + c);
    L.plaquettes.push_back({p.at("id"), col, p.at("vertices").get<std::vector<int>>(),
                            p.at("center")[0], p.at("center")[1]});
  }
  L.logical_support = j.at("logical_support").get<std::vector<int>>();
  for (size_t i = 0; i < L.vertices.size(); ++i)
    if (L.vertices[i].id != int(i)) throw std::runtime_error("vertex ids must be 0..V-1 in order");
  for (size_t i = 0; i < L.plaquettes.size(); ++i)
    if (L.plaquettes[i].id != int(i)) throw std::runtime_error("plaquette ids must be 0..P-1 in order");
  return L;
}

}  // namespace mcc
