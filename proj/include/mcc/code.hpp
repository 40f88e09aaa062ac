#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcc/algebra.hpp"

namespace mcc {

enum class Color { red, green, blue };
const char* color_name(Color c);

// Coordinates are stored in quarter units of the octagon lattice spacing.
struct Vertex {
  int id;
  int x, y;
};

struct Plaquette {
  int id;
  Color color;
  std::vector<int> vertices;  // cyclic order; squares as UR, UL, LL, LR
  int cx, cy;                 // centre, quarter units
};

struct CodeLayout {
  int d = 0;
  std::vector<Vertex> vertices;
  std::vector<Plaquette> plaquettes;
  std::vector<int> logical_support;

  int num_vertices() const { return int(vertices.size()); }
  Bits support(int plaquette) const { return Bits::of(plaquettes[plaquette].vertices); }
  Monomial stabilizer(int plaquette) const;
};

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};
using Report = std::vector<Check>;
bool all_ok(const Report& r);
std::string format_report(const Report& r);

// Vertex set of the patch with side length d, in quarter units. The patch
// occupies u >= 1, v >= 0 on the octagon lattice; mirrored copies are used by
// the lattice-surgery layouts.
struct Point {
  int x, y;
  auto operator<=>(const Point&) const = default;
};
std::vector<Point> patch_points(int d);
// Plaquettes of the (4,8^2) lattice restricted to a point set, fragments of
// size <= 2 dropped. Vertex ids index into pts (sorted by y, then x).
std::vector<Plaquette> lattice_plaquettes(const std::vector<Point>& pts);

CodeLayout build_code(int d);
Report validate_code(const CodeLayout& layout);
Monomial logical_operator(const CodeLayout& layout);

enum class EdgeKind { e_red, e_green, single };

struct UnfoldedEdge {
  int a, b;                 // node ids
  EdgeKind kind;
  std::vector<int> correction;
  int image;                // partner edge id, self for single-mode edges
};

// Nodes: one per red/green plaquette, then two boundary nodes.
struct UnfoldedGraph {
  std::vector<int> node_plaquette;  // -1 for boundaries
  std::vector<int> plaquette_node;  // -1 for blue plaquettes
  int left = -1, right = -1;
  std::vector<UnfoldedEdge> edges;
  int num_nodes() const { return int(node_plaquette.size()); }
};

UnfoldedGraph unfold(const CodeLayout& layout);

// Lightest logical string on the unfolded graph: simple left-to-right paths,
// cost equal to the weight of the combined correction.
int min_logical_weight(const CodeLayout& layout, std::vector<int>* path_edges = nullptr);

// Plaquette ids whose parity a mode set flips.
std::vector<int> syndrome_of(const CodeLayout& layout, const Bits& modes);

std::string layout_to_json(const CodeLayout& layout);
CodeLayout layout_from_json(const std::string& text);

}  // namespace mcc
