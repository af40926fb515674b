#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcim/atoms.hpp"
#include "pcim/map_model.hpp"
#include "pcim/orbit.hpp"
#include "pcim/recurrence.hpp"

namespace pcim {

/// Budgets for the classification pipeline. The horizon bounds both the
/// periodicity search and the recurrence scan; epsilon levels grade the
/// Cantor-side evidence.
struct Budget {
  long horizon = 10000;
  std::optional<DetectionConfig> lr;  // defaulted from the map when absent
  int enclosure_depth = 12;
  std::size_t atom_cap = 1'000'000;

  DetectionConfig detection_for(const MapSpec& spec) const;
};

enum class ComponentKind { periodic, cantor_evidence, undetermined };
const char* to_string(ComponentKind k);

struct ComponentRecord {
  ComponentKind kind = ComponentKind::undetermined;

  // periodic
  std::optional<PeriodicOrbitCert> cert;

  // cantor evidence
  int generator_boundary = 0;              // c_k of the minimal class
  std::vector<int> generator_class;        // all boundaries of the class
  std::optional<Rational> generator_plus;  // d_k^+
  std::optional<Rational> generator_minus; // d_k^-
  std::vector<Interval> enclosure;         // attractor intervals visited by the generator orbit
  std::string evidence;                    // finest epsilon, witness counts, horizon

  std::vector<std::string> members;  // labels of the one-sided limits with this limit set
  std::string note;                  // undetermined reason / caveats
};

struct BoundAudit {
  std::string name;
  bool applicable = true;   // hypothesis flags allow the bound
  bool conditional = false; // undetermined members remain
  bool pass = true;
  std::string detail;
};

struct DecompositionReport {
  std::vector<ComponentRecord> components;
  int n_periodic = 0;       // N1
  int n_cantor = 0;         // N2
  int n_undetermined = 0;
  std::vector<BoundAudit> audits;
  HypothesisFlags flags;
  std::size_t d_count = 0;  // #D after dedup

  std::vector<Interval> global_enclosure;  // generation `enclosure_depth` cover
  Rational enclosure_error;
  int enclosure_depth = 0;

  ClassGraph classes;
  std::string class_graph_note;  // set when the witnessed order was rejected

  bool fully_determined() const { return n_undetermined == 0; }
};

/// Orchestrates classification of every one-sided limit against one budget,
/// caching orbit scans so repeated queries stay cheap. Instances are not
/// thread-safe; the internal per-subject work is parallel.
class Decomposer {
public:
  Decomposer(MapSpec spec, Budget budget);

  const MapSpec& spec() const { return spec_; }
  const BoundaryData& boundary() const { return boundary_; }

  /// Classification fragment for one point of D (by label, e.g. "d1+").
  ComponentRecord classify_limit(const std::string& label);

  /// Full pipeline: classify every d in D, merge coinciding limit sets, audit
  /// the counting bounds, attach the attractor enclosure.
  DecompositionReport decompose();

private:
  void run_subjects();
  ComponentRecord fragment_for(std::size_t subject_index);
  long report_steps(std::size_t subject_index) const;

  MapSpec spec_;
  Budget budget_;
  DetectionConfig detection_;
  BoundaryData boundary_;

  bool subjects_done_ = false;
  std::vector<DetectOutcome> outcomes_;                     // per distinct d
  std::vector<std::optional<LrRecurrenceReport>> reports_;  // per distinct d, when scanned
  ClassGraph graph_;
  bool graph_ok_ = false;
  std::string graph_note_;
};

DecompositionReport decompose(const MapSpec& spec, const Budget& budget);

/// Brute-force check of a report against a start grid: after burn_in steps,
/// every remaining state must sit in a separation tube of a periodic component
/// or inside a Cantor component's enclosure intervals. By default a start is
/// settled as soon as its orbit enters a tube (the contraction keeps it there);
/// exhaustive mode scans the whole tail and records the largest distance to
/// the certified orbits.
struct CrossValidation {
  long grid = 0;
  long tail = 0;
  long burn_in = 0;
  int depth = 0;
  long delta_hits = 0;  // starts excluded for reaching the boundary set
  long covered = 0;
  long uncovered = 0;
  Rational coverage;  // covered / (grid - delta_hits)
  Rational worst_distance;  // max shortfall over all checked states (0 when fully covered)
  std::optional<Rational> worst_start;
  long worst_step = -1;
  std::optional<Rational> max_distance_to_periodic;  // exhaustive runs with only periodic components
};

CrossValidation cross_validate(const MapSpec& spec, const DecompositionReport& report, long grid, long tail,
                               long burn_in, int depth, bool exhaustive = false);

}  // namespace pcim
