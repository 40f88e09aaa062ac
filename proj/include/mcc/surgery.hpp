#pragma once

#include <string>
#include <vector>

#include "mcc/code.hpp"

namespace mcc {

enum class MergeType { type_one, type_two, parity_projection };
const char* merge_type_name(MergeType t);

// Patches placed next to each other with an ancilla strip between them.
// type_one: the two legs without red plaquettes face each other.
// type_two: the two legs without green plaquettes face each other.
// parity_projection: four patches whose red-free legs all face one strip.
struct MergedLayout {
  MergeType type;
  int d = 0;
  CodeLayout merged;
  std::vector<std::vector<int>> patch_modes;  // merged id of each patch vertex, by patch vertex id
  std::vector<CodeLayout> patches;
  std::vector<int> ancilla;                   // merged ids of the strip, ascending
  Color measured;                             // colour whose product gives the logical outcome

  // Logical operator of patch k written on merged modes.
  Monomial logical(int k) const;
  // Pre-merge stabiliser of patch k, plaquette p, on merged modes.
  Monomial pre_stabilizer(int k, int p) const;
};

MergedLayout build_merge(const CodeLayout& a, const CodeLayout& b, MergeType type);

struct Bar {
  int i, j;  // the operator i c_i c_j
  bool operator==(const Bar&) const = default;
};
using BarPattern = std::vector<Bar>;
Monomial bar_operator(const Bar& b);

BarPattern construct_pattern(const MergedLayout& m);
Report verify_pattern(const MergedLayout& m, const BarPattern& p);

// Structural checks on the merged layout itself (evenness, restriction).
Report validate_merge(const MergedLayout& m);

Report verify_logical_phase(const CodeLayout& layout);

}  // namespace mcc
