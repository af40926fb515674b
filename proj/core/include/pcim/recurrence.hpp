#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcim/map_model.hpp"
#include "pcim/rational.hpp"

namespace pcim {

/// Budget for two-sided recurrence detection. The epsilon schedule replaces
/// the existence-only threshold of the underlying dichotomy with explicit,
/// user-visible evidence levels.
struct DetectionConfig {
  long horizon = 10000;
  std::vector<Rational> epsilon_schedule;  // strictly decreasing, positive
  int min_witnesses = 2;                   // per side, at one level
  std::size_t max_logged_witnesses = 48;   // sample log cap per boundary/side/level

  void validate() const;
};

/// Geometric ladder diam/8, diam/64, ..., six levels deep.
DetectionConfig default_detection_config(const MapSpec& spec, long horizon);

enum class Side { left = 0, right = 1 };
enum class VisitStatus { lr_witnessed, one_sided_only, never_near };
const char* to_string(VisitStatus s);

struct Witness {
  long step;
  Side side;
  int level;
  Rational distance;  // rounded up to a dyadic, never understated
};

struct SideLevelStats {
  long count = 0;
  long first_step = -1;
  long last_step = -1;
};

struct BoundaryVisits {
  int boundary = 0;  // index i of c_i, 1..N-1
  VisitStatus status = VisitStatus::never_near;
  int finest_both_level = -1;  // smallest epsilon level with both sides witnessed
  std::vector<std::array<SideLevelStats, 2>> per_level;
  std::vector<Witness> log;
};

/// Evidence record for one subject: which internal boundaries its orbit
/// approaches from both sides, graded by the epsilon schedule.
struct LrRecurrenceReport {
  std::string subject;
  Rational start;
  long steps = 0;
  std::optional<long> hit_delta_at;
  std::vector<BoundaryVisits> boundaries;  // size N-1, boundary i at index i-1

  const BoundaryVisits& at(int boundary) const { return boundaries.at(static_cast<std::size_t>(boundary) - 1); }
  /// Witnessed at the finest scheduled epsilon — the level used for
  /// classification and for the class graph.
  bool lr_at_finest(int boundary) const;
  std::vector<int> lr_witnessed_at_finest() const;
};

LrRecurrenceReport detect_lr(const MapSpec& spec, const Rational& x, const DetectionConfig& cfg,
                             std::string subject_label = "");

/// Incremental form of detect_lr for callers that already stream the orbit.
class LrRecorder {
public:
  LrRecorder(const MapSpec& spec, const DetectionConfig& cfg, const Rational& start, std::string subject_label);
  void observe(long step, const Rational& state, int piece);
  /// Assigns statuses; the recorder can keep observing afterwards.
  LrRecurrenceReport finalize(long steps, std::optional<long> hit_delta_at) const;

private:
  void record(int boundary, Side side, long step, const Rational& state);

  const MapSpec& spec_;
  const DetectionConfig& cfg_;
  LrRecurrenceReport report_;
  // thresholds c_i -+ eps per level, so a far state costs one comparison
  std::vector<std::vector<Rational>> left_thresholds_;   // [boundary-1][level] = c - eps
  std::vector<std::vector<Rational>> right_thresholds_;  // [boundary-1][level] = c + eps
};

struct ClassNode {
  std::vector<int> members;  // boundary indices, ascending
  bool minimal = false;
  bool minimality_confirmed = true;  // two-sided witness matching on every member
};

/// Equivalence classes of witnessed boundaries under the mutual-visit
/// relation, partially ordered by one-directional visits; poset laws are
/// checked on the witnessed data, never assumed.
struct ClassGraph {
  std::vector<int> witnessed;              // ground set, ascending boundary indices
  std::vector<std::vector<bool>> relation;  // R[a][b]: c_{witnessed[a]} visited by orbit of d_{witnessed[b]}^+
  std::vector<ClassNode> nodes;
  std::vector<std::pair<int, int>> hasse_edges;       // (below, above) node indices
  std::vector<std::pair<int, int>> inconsistencies;   // boundary pairs where representative independence failed

  int node_of(int boundary) const;  // -1 if not witnessed
  std::vector<int> minimal_node_ids() const;
};

/// Builds the graph from an explicit witnessed relation. Throws OrderViolation
/// when the data breaks antisymmetry or transitivity at class level (a sign of
/// insufficient horizon, not of a structural contradiction).
ClassGraph build_class_graph_from_relation(std::vector<int> witnessed, std::vector<std::vector<bool>> relation);

/// Derives the witnessed set and relation from subject reports. Reports for
/// subjects labeled "d<i>+" provide the columns; every witnessed boundary must
/// have its right-limit subject present (absent columns are allowed only via
/// `certified_empty`, the boundaries whose right-limit orbit is certified
/// periodic and therefore visits nothing two-sidedly).
ClassGraph build_class_graph(const MapSpec& spec, const std::vector<LrRecurrenceReport>& reports,
                             const std::vector<int>& certified_empty = {});

std::vector<const ClassNode*> minimal_classes(const ClassGraph& graph);

}  // namespace pcim
