#include "pcim/atoms.hpp"

#include <algorithm>
#include <optional>

namespace pcim {

std::vector<Interval> merge_intervals(std::vector<Interval> ivs) {
  if (ivs.empty()) return ivs;
  std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  out.push_back(ivs.front());
  for (std::size_t k = 1; k < ivs.size(); ++k) {
    if (ivs[k].lo <= out.back().hi) {
      if (ivs[k].hi > out.back().hi) out.back().hi = ivs[k].hi;
    } else {
      out.push_back(ivs[k]);
    }
  }
  return out;
}

namespace {

// closure(f_piece(A ∩ X_piece)) for a closed interval A, or nothing when the
// intersection is empty. Single-point intersections count only when the point
// belongs to the piece (possible for degenerate A or at a closed domain end).
std::optional<Interval> branch_image(const MapSpec& spec, int piece, const Interval& a, bool& degenerate) {
  Rational lo = max(a.lo, spec.endpoint(piece - 1));
  Rational hi = min(a.hi, spec.endpoint(piece));
  if (lo > hi) return std::nullopt;
  if (lo == hi) {
    if (spec.piece_of(lo) != piece) return std::nullopt;
    degenerate = true;
    Rational v = spec.eval(piece, lo);
    return Interval{v, v};
  }
  degenerate = spec.slope(piece).is_zero();
  Rational u = spec.eval(piece, lo);
  Rational v = spec.eval(piece, hi);
  if (u <= v) return Interval{std::move(u), std::move(v)};
  return Interval{std::move(v), std::move(u)};
}

}  // namespace

const Atom* AtomTree::find(const ItineraryWord& word) const {
  int n = static_cast<int>(word.size());
  if (n < 1 || n > depth()) return nullptr;
  const auto& gen = generation(n);
  auto it = std::lower_bound(gen.begin(), gen.end(), word,
                             [](const Atom& a, const ItineraryWord& w) { return a.word < w; });
  if (it == gen.end() || !(it->word == word)) return nullptr;
  return &*it;
}

Rational AtomTree::max_diameter(int n) const {
  Rational m(0);
  for (const Atom& a : generation(n)) m = max(m, a.iv.diam());
  return m;
}

AtomTree expand_atoms(const MapSpec& spec, int depth, std::size_t atom_cap) {
  if (depth < 1) raise(errc::bad_spec, "expand_atoms: depth must be >= 1");
  AtomTree tree;
  std::size_t total = 0;
  Interval domain{spec.left_end(), spec.right_end()};

  std::vector<Atom> root;
  root.push_back(Atom{ItineraryWord{}, domain, false});
  for (int n = 1; n <= depth; ++n) {
    const std::vector<Atom>& parents = (n == 1) ? root : tree.generations.back();
    std::vector<Atom> gen;
    gen.reserve(parents.size());
    for (const Atom& parent : parents) {
      for (int i = 1; i <= spec.pieces(); ++i) {
        bool degenerate = false;
        auto iv = branch_image(spec, i, parent.iv, degenerate);
        if (!iv) continue;
        if (++total > atom_cap)
          throw DepthBudgetExceeded("atom count cap " + std::to_string(atom_cap) +
                                        " exceeded at generation " + std::to_string(n),
                                    std::move(tree));
        Atom child;
        child.word = parent.word;
        child.word.symbols.push_back(i);
        child.iv = std::move(*iv);
        child.degenerate = degenerate;
        gen.push_back(std::move(child));
      }
    }
    // Parents are sorted by word and children append one symbol, so the
    // generation is already in word order.
    tree.generations.push_back(std::move(gen));
  }
  return tree;
}

std::vector<Interval> attractor_enclosure(const AtomTree& tree) {
  if (tree.depth() < 1) raise(errc::bad_spec, "attractor_enclosure: empty tree");
  std::vector<Interval> ivs;
  for (const Atom& a : tree.generation(tree.depth())) ivs.push_back(a.iv);
  return merge_intervals(std::move(ivs));
}

std::vector<ItineraryWord> locate_in_atoms(const AtomTree& tree, const Rational& x) {
  std::vector<ItineraryWord> words;
  if (tree.depth() < 1) return words;
  for (const Atom& a : tree.generation(tree.depth()))
    if (a.iv.contains(x)) words.push_back(a.word);
  return words;
}

std::vector<Interval> enclosure_at_depth(const MapSpec& spec, int depth) {
  if (depth < 1) raise(errc::bad_spec, "enclosure_at_depth: depth must be >= 1");
  std::vector<Interval> cur;
  cur.push_back(Interval{spec.left_end(), spec.right_end()});
  for (int n = 1; n <= depth; ++n) {
    std::vector<Interval> next;
    for (const Interval& iv : cur) {
      for (int i = 1; i <= spec.pieces(); ++i) {
        bool degenerate = false;
        if (auto img = branch_image(spec, i, iv, degenerate)) next.push_back(std::move(*img));
      }
    }
    cur = merge_intervals(std::move(next));
  }
  return cur;
}

Rational enclosure_error(const MapSpec& spec, int depth) {
  return pow(spec.lambda(), static_cast<unsigned long>(depth)) * spec.diam();
}

}  // namespace pcim
