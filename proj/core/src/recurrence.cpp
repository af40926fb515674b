#include "pcim/recurrence.hpp"

#include <algorithm>
#include <numeric>

#include "pcim/errors.hpp"
#include "pcim/orbit.hpp"

namespace pcim {

const char* to_string(VisitStatus s) {
  switch (s) {
    case VisitStatus::lr_witnessed: return "lr-witnessed";
    case VisitStatus::one_sided_only: return "one-sided-only";
    case VisitStatus::never_near: return "never-near";
  }
  return "?";
}

void DetectionConfig::validate() const {
  if (horizon < 1) raise(errc::bad_spec, "detection horizon must be >= 1");
  if (epsilon_schedule.empty()) raise(errc::bad_spec, "epsilon schedule is empty");
  for (std::size_t k = 0; k < epsilon_schedule.size(); ++k) {
    if (!(epsilon_schedule[k] > Rational(0))) raise(errc::bad_spec, "epsilon schedule values must be positive");
    if (k > 0 && !(epsilon_schedule[k] < epsilon_schedule[k - 1]))
      raise(errc::bad_spec, "epsilon schedule must be strictly decreasing");
  }
  if (min_witnesses < 2) raise(errc::bad_spec, "min_witnesses must be >= 2");
}

DetectionConfig default_detection_config(const MapSpec& spec, long horizon) {
  DetectionConfig cfg;
  cfg.horizon = horizon;
  Rational eps = spec.diam();
  for (int level = 0; level < 6; ++level) {
    eps = eps / Rational(8);
    cfg.epsilon_schedule.push_back(eps);
  }
  return cfg;
}

bool LrRecurrenceReport::lr_at_finest(int boundary) const {
  const BoundaryVisits& bv = at(boundary);
  if (bv.status != VisitStatus::lr_witnessed) return false;
  return bv.finest_both_level == static_cast<int>(bv.per_level.size()) - 1;
}

std::vector<int> LrRecurrenceReport::lr_witnessed_at_finest() const {
  std::vector<int> out;
  for (const auto& bv : boundaries)
    if (lr_at_finest(bv.boundary)) out.push_back(bv.boundary);
  return out;
}

LrRecorder::LrRecorder(const MapSpec& spec, const DetectionConfig& cfg, const Rational& start,
                       std::string subject_label)
    : spec_(spec), cfg_(cfg) {
  const int n_pieces = spec.pieces();
  const int levels = static_cast<int>(cfg.epsilon_schedule.size());
  report_.subject = std::move(subject_label);
  report_.start = start;
  report_.boundaries.resize(static_cast<std::size_t>(n_pieces - 1));
  left_thresholds_.resize(static_cast<std::size_t>(n_pieces - 1));
  right_thresholds_.resize(static_cast<std::size_t>(n_pieces - 1));
  for (int i = 1; i < n_pieces; ++i) {
    report_.boundaries[static_cast<std::size_t>(i - 1)].boundary = i;
    report_.boundaries[static_cast<std::size_t>(i - 1)].per_level.resize(static_cast<std::size_t>(levels));
    for (const Rational& eps : cfg.epsilon_schedule) {
      left_thresholds_[static_cast<std::size_t>(i - 1)].push_back(spec.endpoint(i) - eps);
      right_thresholds_[static_cast<std::size_t>(i - 1)].push_back(spec.endpoint(i) + eps);
    }
  }
}

void LrRecorder::record(int boundary, Side side, long step, const Rational& state) {
  // Deepest level whose threshold the state crosses; one comparison when far.
  const auto& thresholds = side == Side::left ? left_thresholds_[static_cast<std::size_t>(boundary - 1)]
                                              : right_thresholds_[static_cast<std::size_t>(boundary - 1)];
  const int levels = static_cast<int>(thresholds.size());
  int level = -1;
  for (int l = 0; l < levels; ++l) {
    const bool within = side == Side::left ? state > thresholds[static_cast<std::size_t>(l)]
                                           : state < thresholds[static_cast<std::size_t>(l)];
    if (!within) break;
    level = l;
  }
  if (level < 0) return;
  BoundaryVisits& bv = report_.boundaries[static_cast<std::size_t>(boundary - 1)];
  for (int l = 0; l <= level; ++l) {
    SideLevelStats& st = bv.per_level[static_cast<std::size_t>(l)][static_cast<std::size_t>(side)];
    if (st.count == 0) st.first_step = step;
    st.last_step = step;
    ++st.count;
  }
  if (bv.log.size() < cfg_.max_logged_witnesses) {
    Rational dist = side == Side::left ? spec_.endpoint(boundary) - state : state - spec_.endpoint(boundary);
    bv.log.push_back(Witness{step, side, level, dist.round_up_magnitude()});
  }
}

void LrRecorder::observe(long step, const Rational& state, int piece) {
  if (piece == 0) return;
  // A state in piece i can only approach its adjacent boundaries from the
  // matching side: c_{i-1} from the right, c_i from the left.
  if (piece > 1) record(piece - 1, Side::right, step, state);
  if (piece < spec_.pieces()) record(piece, Side::left, step, state);
}

LrRecurrenceReport LrRecorder::finalize(long steps, std::optional<long> hit_delta_at) const {
  LrRecurrenceReport report = report_;
  report.steps = steps;
  report.hit_delta_at = hit_delta_at;
  const int levels = static_cast<int>(cfg_.epsilon_schedule.size());
  for (auto& bv : report.boundaries) {
    bool any_visit = false;
    bv.finest_both_level = -1;
    for (int l = 0; l < levels; ++l) {
      const auto& pair = bv.per_level[static_cast<std::size_t>(l)];
      if (pair[0].count > 0 || pair[1].count > 0) any_visit = true;
      if (pair[0].count >= cfg_.min_witnesses && pair[1].count >= cfg_.min_witnesses) bv.finest_both_level = l;
    }
    if (bv.finest_both_level >= 0)
      bv.status = VisitStatus::lr_witnessed;
    else
      bv.status = any_visit ? VisitStatus::one_sided_only : VisitStatus::never_near;
  }
  return report;
}

LrRecurrenceReport detect_lr(const MapSpec& spec, const Rational& x, const DetectionConfig& cfg,
                             std::string subject_label) {
  cfg.validate();
  if (spec.piece_of(x) == 0) raise(errc::start_on_delta, "subject " + x.str() + " lies on the boundary set");
  LrRecorder recorder(spec, cfg, x, std::move(subject_label));
  auto end = detail::stream_orbit(spec, x, cfg.horizon, [&](long step, const Rational& state, int piece) {
    recorder.observe(step, state, piece);
    return true;
  });
  return recorder.finalize(end.steps, end.hit_delta_at);
}

int ClassGraph::node_of(int boundary) const {
  for (std::size_t n = 0; n < nodes.size(); ++n)
    if (std::binary_search(nodes[n].members.begin(), nodes[n].members.end(), boundary)) return static_cast<int>(n);
  return -1;
}

std::vector<int> ClassGraph::minimal_node_ids() const {
  std::vector<int> ids;
  for (std::size_t n = 0; n < nodes.size(); ++n)
    if (nodes[n].minimal) ids.push_back(static_cast<int>(n));
  return ids;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]); }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

ClassGraph build_class_graph_from_relation(std::vector<int> witnessed, std::vector<std::vector<bool>> relation) {
  const std::size_t m = witnessed.size();
  if (relation.size() != m) raise(errc::bad_spec, "relation size mismatch");
  for (const auto& row : relation)
    if (row.size() != m) raise(errc::bad_spec, "relation size mismatch");

  ClassGraph g;
  g.witnessed = std::move(witnessed);
  g.relation = std::move(relation);
  if (m == 0) return g;

  // Classes: mutual pairs are identified.
  UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (g.relation[a][b] && g.relation[b][a]) uf.unite(static_cast<int>(a), static_cast<int>(b));

  std::vector<int> node_of(m, -1);
  for (std::size_t a = 0; a < m; ++a) {
    int root = uf.find(static_cast<int>(a));
    if (node_of[static_cast<std::size_t>(root)] == -1) {
      node_of[static_cast<std::size_t>(root)] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({});
    }
    node_of[a] = node_of[static_cast<std::size_t>(root)];
    g.nodes[static_cast<std::size_t>(node_of[a])].members.push_back(g.witnessed[a]);
  }
  for (auto& node : g.nodes) std::sort(node.members.begin(), node.members.end());

  const std::size_t k = g.nodes.size();
  std::vector<std::vector<bool>> below(k, std::vector<bool>(k, false));  // below[a][b]: node a <= node b
  for (std::size_t i = 0; i < k; ++i) below[i][i] = true;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (g.relation[a][b]) below[static_cast<std::size_t>(node_of[a])][static_cast<std::size_t>(node_of[b])] = true;

  // Antisymmetry at class level: a two-way strict pair would have merged.
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (below[a][b] && below[b][a])
        raise(errc::order_violation,
              "classes " + std::to_string(a) + " and " + std::to_string(b) +
                  " compare both ways without a mutual witness pair; horizon too small");
  // Transitivity of the witnessed order.
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (!below[a][b]) continue;
      for (std::size_t c = 0; c < k; ++c)
        if (below[b][c] && !below[a][c])
          raise(errc::order_violation, "witnessed order is not transitive; horizon too small");
    }

  // Representative independence: a class-level relation should be witnessed by
  // every member pair; misses are recorded, not fatal.
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (node_of[a] == node_of[b]) continue;
      if (below[static_cast<std::size_t>(node_of[a])][static_cast<std::size_t>(node_of[b])] && !g.relation[a][b])
        g.inconsistencies.emplace_back(g.witnessed[a], g.witnessed[b]);
    }

  // Hasse reduction of the strict order.
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b || !below[a][b]) continue;
      bool direct = true;
      for (std::size_t c = 0; c < k && direct; ++c)
        if (c != a && c != b && below[a][c] && below[c][b]) direct = false;
      if (direct) g.hasse_edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  std::sort(g.hasse_edges.begin(), g.hasse_edges.end());

  // Minimal nodes: no strict predecessor.
  for (std::size_t b = 0; b < k; ++b) {
    bool minimal = true;
    for (std::size_t a = 0; a < k; ++a)
      if (a != b && below[a][b]) minimal = false;
    g.nodes[b].minimal = minimal;
  }

  // Two-sided matching on minimal nodes: every witnessed incoming visit of a
  // member must be answered. A miss downgrades confirmation only.
  std::vector<std::size_t> pos(static_cast<std::size_t>(*std::max_element(g.witnessed.begin(), g.witnessed.end())) + 1);
  for (std::size_t a = 0; a < m; ++a) pos[static_cast<std::size_t>(g.witnessed[a])] = a;
  for (auto& node : g.nodes) {
    if (!node.minimal) continue;
    for (int i : node.members) {
      std::size_t ia = pos[static_cast<std::size_t>(i)];
      for (std::size_t ja = 0; ja < m; ++ja) {
        if (g.relation[ja][ia] && !g.relation[ia][ja]) {
          node.minimality_confirmed = false;
          break;
        }
      }
      if (!node.minimality_confirmed) break;
    }
  }
  return g;
}

ClassGraph build_class_graph(const MapSpec& spec, const std::vector<LrRecurrenceReport>& reports,
                             const std::vector<int>& certified_empty) {
  // Witnessed boundaries: anything any subject saw two-sidedly at the finest
  // epsilon.
  std::vector<int> witnessed;
  for (const auto& rep : reports)
    for (int b : rep.lr_witnessed_at_finest())
      if (std::find(witnessed.begin(), witnessed.end(), b) == witnessed.end()) witnessed.push_back(b);
  std::sort(witnessed.begin(), witnessed.end());

  const std::size_t m = witnessed.size();
  std::vector<const LrRecurrenceReport*> column(m, nullptr);
  std::vector<bool> empty_column(m, false);
  for (std::size_t a = 0; a < m; ++a) {
    std::string want = "d" + std::to_string(witnessed[a]) + "+";
    for (const auto& rep : reports)
      if (rep.subject == want) column[a] = &rep;
    if (!column[a] && std::find(certified_empty.begin(), certified_empty.end(), witnessed[a]) != certified_empty.end())
      empty_column[a] = true;
    if (!column[a] && !empty_column[a])
      raise(errc::bad_spec, "missing recurrence report for subject " + want);
  }

  std::vector<std::vector<bool>> relation(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (column[b]) relation[a][b] = column[b]->lr_at_finest(witnessed[a]);
  (void)spec;
  return build_class_graph_from_relation(std::move(witnessed), std::move(relation));
}

std::vector<const ClassNode*> minimal_classes(const ClassGraph& graph) {
  std::vector<const ClassNode*> out;
  for (const auto& node : graph.nodes)
    if (node.minimal) out.push_back(&node);
  return out;
}

}  // namespace pcim
