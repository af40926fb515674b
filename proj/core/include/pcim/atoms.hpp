#pragma once

#include <cstddef>
#include <vector>

#include "pcim/errors.hpp"
#include "pcim/map_model.hpp"
#include "pcim/rational.hpp"
#include "pcim/symbolic.hpp"

namespace pcim {

struct Interval {
  Rational lo, hi;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational diam() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorts and merges closed intervals (touching endpoints merge) into a minimal
/// disjoint union.
std::vector<Interval> merge_intervals(std::vector<Interval> ivs);

/// Compact interval carved out by a branch-word: successive piece
/// intersections followed by branch images, all exact. The word lists pieces
/// in the order they are applied.
struct Atom {
  ItineraryWord word;
  Interval iv;
  bool degenerate = false;

  int generation() const { return static_cast<int>(word.size()); }
};

/// Generations 1..depth of atoms, each sorted by word. The union of a
/// generation's intervals shrinks toward the attractor with certified rate.
struct AtomTree {
  std::vector<std::vector<Atom>> generations;

  int depth() const { return static_cast<int>(generations.size()); }
  const std::vector<Atom>& generation(int n) const { return generations.at(static_cast<std::size_t>(n) - 1); }
  const Atom* find(const ItineraryWord& word) const;  // by word; generation = word length
  Rational max_diameter(int n) const;
};

struct DepthBudgetExceeded : Error {
  DepthBudgetExceeded(std::string what, AtomTree partial_tree)
      : Error(errc::depth_budget_exceeded, std::move(what)), partial(std::move(partial_tree)) {}
  AtomTree partial;
};

/// Breadth-first expansion to `depth` generations. Atom counts are capped per
/// run; hitting the cap raises DepthBudgetExceeded carrying the completed
/// generations.
AtomTree expand_atoms(const MapSpec& spec, int depth, std::size_t atom_cap = 1'000'000);

/// Minimal disjoint union of the deepest generation; encloses the attractor
/// with Hausdorff error <= lambda^depth * diam(X).
std::vector<Interval> attractor_enclosure(const AtomTree& tree);

/// All deepest-generation atoms whose interval contains x.
std::vector<ItineraryWord> locate_in_atoms(const AtomTree& tree, const Rational& x);

/// The union of generation-`depth` atoms computed as a plain interval set,
/// without tracking words. Much cheaper than expand_atoms for deep enclosures.
std::vector<Interval> enclosure_at_depth(const MapSpec& spec, int depth);

Rational enclosure_error(const MapSpec& spec, int depth);

}  // namespace pcim
