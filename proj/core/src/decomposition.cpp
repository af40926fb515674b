#include "pcim/decomposition.hpp"

#include <algorithm>
#include <map>

#include "pcim/errors.hpp"
#include "pcim/parallel.hpp"

namespace pcim {

const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::periodic: return "periodic";
    case ComponentKind::cantor_evidence: return "cantor-evidence";
    case ComponentKind::undetermined: return "undetermined";
  }
  return "?";
}

DetectionConfig Budget::detection_for(const MapSpec& spec) const {
  DetectionConfig cfg = lr ? *lr : default_detection_config(spec, horizon);
  if (!lr) cfg.horizon = horizon;
  cfg.validate();
  return cfg;
}

Decomposer::Decomposer(MapSpec spec, Budget budget)
    : spec_(std::move(spec)), budget_(budget), detection_(budget_.detection_for(spec_)), boundary_(boundary_data(spec_)) {}

namespace {

// Index of the interval containing x, or -1. Intervals are disjoint and
// sorted.
int interval_index(const std::vector<Interval>& ivs, const Rational& x) {
  auto it = std::upper_bound(ivs.begin(), ivs.end(), x,
                             [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  if (it == ivs.begin()) return -1;
  --it;
  return it->contains(x) ? static_cast<int>(it - ivs.begin()) : -1;
}

// Distance from x to the nearest interval of a sorted disjoint family.
Rational interval_distance(const std::vector<Interval>& ivs, const Rational& x) {
  Rational best(-1);
  for (const Interval& iv : ivs) {
    Rational d = iv.contains(x) ? Rational(0) : (x < iv.lo ? iv.lo - x : x - iv.hi);
    if (best.sign() < 0 || d < best) best = d;
  }
  return best;
}

}  // namespace

void Decomposer::run_subjects() {
  if (subjects_done_) return;
  const auto& subjects = boundary_.distinct;
  const std::size_t m = subjects.size();
  outcomes_.resize(m);
  reports_.resize(m);

  const bool combined = detection_.horizon == budget_.horizon;
  parallel_for(m, [&](std::size_t i) {
    const Rational& d = subjects[i].value;
    if (spec_.piece_of(d) == 0) {
      outcomes_[i].hit_delta_at = 0;
      outcomes_[i].final_state = d;
      return;
    }
    if (combined) {
      // One pass feeds both the periodicity scan and the recurrence record.
      LrRecorder recorder(spec_, detection_, d, subjects[i].label);
      outcomes_[i] = detect_eventual_periodicity_ex(
          spec_, d, budget_.horizon,
          [&recorder](long step, const Rational& state, int piece) { recorder.observe(step, state, piece); });
      if (!outcomes_[i].cert && !outcomes_[i].hit_delta_at)
        reports_[i] = recorder.finalize(outcomes_[i].steps, outcomes_[i].hit_delta_at);
    } else {
      outcomes_[i] = detect_eventual_periodicity_ex(spec_, d, budget_.horizon);
      if (!outcomes_[i].cert && !outcomes_[i].hit_delta_at)
        reports_[i] = detect_lr(spec_, d, detection_, subjects[i].label);
    }
  });

  // Relation columns come from the right-limit subjects; a certified-periodic
  // right limit contributes an empty column.
  auto subject_of_label = [&](const std::string& want) -> int {
    for (std::size_t i = 0; i < m; ++i) {
      if (subjects[i].label == want) return static_cast<int>(i);
      for (const auto& alias : subjects[i].aliases)
        if (alias == want) return static_cast<int>(i);
    }
    return -1;
  };

  std::vector<int> witnessed;
  for (const auto& rep : reports_) {
    if (!rep) continue;
    for (int b : rep->lr_witnessed_at_finest())
      if (std::find(witnessed.begin(), witnessed.end(), b) == witnessed.end()) witnessed.push_back(b);
  }
  std::sort(witnessed.begin(), witnessed.end());

  const std::size_t w = witnessed.size();
  std::vector<std::vector<bool>> relation(w, std::vector<bool>(w, false));
  std::string missing_columns;
  for (std::size_t b = 0; b < w; ++b) {
    int si = subject_of_label("d" + std::to_string(witnessed[b]) + "+");
    if (si < 0 || (!reports_[static_cast<std::size_t>(si)] && !outcomes_[static_cast<std::size_t>(si)].cert)) {
      missing_columns += (missing_columns.empty() ? "" : ", ");
      missing_columns += "d" + std::to_string(witnessed[b]) + "+";
      continue;
    }
    const auto& rep = reports_[static_cast<std::size_t>(si)];
    if (!rep) continue;  // certified periodic: column stays empty
    for (std::size_t a = 0; a < w; ++a) relation[a][b] = rep->lr_at_finest(witnessed[a]);
  }

  try {
    graph_ = build_class_graph_from_relation(witnessed, std::move(relation));
    graph_ok_ = true;
    if (!missing_columns.empty())
      graph_note_ = "relation columns unavailable for " + missing_columns + " (orbit leaves the admissible set)";
  } catch (const Error& e) {
    if (e.code() != errc::order_violation) throw;
    graph_ok_ = false;
    graph_note_ = e.what();
  }
  subjects_done_ = true;
}

ComponentRecord Decomposer::fragment_for(std::size_t i) {
  const auto& subject = boundary_.distinct[i];
  const DetectOutcome& outcome = outcomes_[i];

  ComponentRecord rec;
  rec.members.push_back(subject.label);
  for (const auto& alias : subject.aliases) rec.members.push_back(alias);

  if (outcome.cert) {
    rec.kind = ComponentKind::periodic;
    rec.cert = outcome.cert;
    return rec;
  }
  if (outcome.hit_delta_at) {
    rec.kind = ComponentKind::undetermined;
    rec.note = "orbit reaches the boundary set at step " + std::to_string(*outcome.hit_delta_at);
    return rec;
  }

  const auto& rep = reports_[i];
  std::vector<int> witnessed = rep ? rep->lr_witnessed_at_finest() : std::vector<int>{};
  if (witnessed.empty()) {
    rec.kind = ComponentKind::undetermined;
    rec.note = "horizon " + std::to_string(budget_.horizon) +
               " exhausted: no periodicity certificate and no two-sided recurrence at the finest epsilon";
    return rec;
  }
  if (!graph_ok_) {
    rec.kind = ComponentKind::undetermined;
    rec.note = "witnessed relation rejected: " + graph_note_;
    return rec;
  }

  // Generator: a minimal class among (or below) the witnessed boundaries.
  std::vector<int> witnessed_nodes;
  for (int b : witnessed) {
    int node = graph_.node_of(b);
    if (node >= 0 && std::find(witnessed_nodes.begin(), witnessed_nodes.end(), node) == witnessed_nodes.end())
      witnessed_nodes.push_back(node);
  }
  int chosen = -1;
  for (int node : witnessed_nodes)
    if (graph_.nodes[static_cast<std::size_t>(node)].minimal && (chosen < 0 || node < chosen)) chosen = node;
  bool inferred_below = false;
  if (chosen < 0) {
    // Walk down the order from the witnessed classes.
    std::vector<bool> reach(graph_.nodes.size(), false);
    std::vector<int> stack = witnessed_nodes;
    for (int node : witnessed_nodes) reach[static_cast<std::size_t>(node)] = true;
    while (!stack.empty()) {
      int top = stack.back();
      stack.pop_back();
      for (const auto& [below, above] : graph_.hasse_edges) {
        if (above == top && !reach[static_cast<std::size_t>(below)]) {
          reach[static_cast<std::size_t>(below)] = true;
          stack.push_back(below);
        }
      }
    }
    for (std::size_t n = 0; n < graph_.nodes.size(); ++n)
      if (reach[n] && graph_.nodes[n].minimal && chosen < 0) chosen = static_cast<int>(n);
    inferred_below = true;
  }
  if (chosen < 0) {
    rec.kind = ComponentKind::undetermined;
    rec.note = "no minimal class reachable from the witnessed boundaries";
    return rec;
  }

  const ClassNode& node = graph_.nodes[static_cast<std::size_t>(chosen)];
  const int k = node.members.front();

  // The generating right limit must not itself be certified periodic; that
  // would contradict the witnessed recurrence and flags stale evidence.
  for (std::size_t s = 0; s < boundary_.distinct.size(); ++s) {
    bool is_gen = boundary_.distinct[s].label == "d" + std::to_string(k) + "+";
    for (const auto& alias : boundary_.distinct[s].aliases) is_gen = is_gen || alias == "d" + std::to_string(k) + "+";
    if (is_gen && outcomes_[s].cert) {
      rec.kind = ComponentKind::undetermined;
      rec.note = "witnessed boundary c" + std::to_string(k) + " has a certified periodic right limit; evidence conflict";
      return rec;
    }
  }

  rec.kind = ComponentKind::cantor_evidence;
  rec.generator_boundary = k;
  rec.generator_class = node.members;
  rec.generator_plus = spec_.eval(std::min(k + 1, spec_.pieces()), spec_.endpoint(k));
  rec.generator_minus = spec_.eval(k, spec_.endpoint(k));

  const BoundaryVisits& bv = rep->at(k);
  std::string eps = detection_.epsilon_schedule.back().str();
  const auto& stats = bv.per_level.back();
  rec.evidence = "finest epsilon " + eps + "; c" + std::to_string(k) + " visited left x" +
                 std::to_string(stats[0].count) + " right x" + std::to_string(stats[1].count) + " by " +
                 subject.label + "; horizon " + std::to_string(report_steps(i));
  if (inferred_below) rec.note = "generator class inferred strictly below the witnessed classes";
  if (!node.minimality_confirmed)
    rec.note += (rec.note.empty() ? "" : "; ") + std::string("minimality unconfirmed on the witnessed data");
  if (!graph_note_.empty()) rec.note += (rec.note.empty() ? "" : "; ") + graph_note_;
  return rec;
}

ComponentRecord Decomposer::classify_limit(const std::string& label) {
  run_subjects();
  for (std::size_t i = 0; i < boundary_.distinct.size(); ++i) {
    if (boundary_.distinct[i].label == label) return fragment_for(i);
    for (const auto& alias : boundary_.distinct[i].aliases)
      if (alias == label) return fragment_for(i);
  }
  raise(errc::bad_spec, "unknown one-sided limit label: " + label);
}

DecompositionReport Decomposer::decompose() {
  run_subjects();
  const auto& subjects = boundary_.distinct;

  DecompositionReport report;
  report.flags = spec_.flags();
  report.d_count = subjects.size();
  report.classes = graph_;
  report.class_graph_note = graph_note_;

  // Merge fragments with coinciding limit sets.
  std::map<std::pair<Rational, long>, std::size_t> periodic_slot;  // (min orbit point, period)
  std::map<int, std::size_t> cantor_slot;                          // class node id
  std::vector<ComponentRecord> periodic, cantor, undetermined;

  for (std::size_t i = 0; i < subjects.size(); ++i) {
    ComponentRecord frag = fragment_for(i);
    if (frag.kind == ComponentKind::periodic) {
      Rational lo = *std::min_element(frag.cert->orbit.begin(), frag.cert->orbit.end());
      auto key = std::make_pair(lo, frag.cert->period);
      auto [it, inserted] = periodic_slot.try_emplace(key, periodic.size());
      if (inserted) {
        periodic.push_back(std::move(frag));
      } else {
        ComponentRecord& dst = periodic[it->second];
        for (auto& mlabel : frag.members) dst.members.push_back(mlabel);
        if (frag.cert->preperiod < dst.cert->preperiod) dst.cert->preperiod = frag.cert->preperiod;
      }
    } else if (frag.kind == ComponentKind::cantor_evidence) {
      int node = graph_.node_of(frag.generator_boundary);
      auto [it, inserted] = cantor_slot.try_emplace(node, cantor.size());
      if (inserted) {
        cantor.push_back(std::move(frag));
      } else {
        ComponentRecord& dst = cantor[it->second];
        for (auto& mlabel : frag.members) dst.members.push_back(mlabel);
      }
    } else {
      undetermined.push_back(std::move(frag));
    }
  }

  // Certified orbits are genuinely disjoint or identical; overlap means a
  // merge bug.
  for (std::size_t a = 0; a < periodic.size(); ++a)
    for (std::size_t b = a + 1; b < periodic.size(); ++b)
      for (const Rational& pa : periodic[a].cert->orbit)
        for (const Rational& pb : periodic[b].cert->orbit)
          if (pa == pb) raise(errc::bound_violation, "distinct periodic components share an orbit point");

  std::sort(periodic.begin(), periodic.end(), [](const ComponentRecord& a, const ComponentRecord& b) {
    return *std::min_element(a.cert->orbit.begin(), a.cert->orbit.end()) <
           *std::min_element(b.cert->orbit.begin(), b.cert->orbit.end());
  });
  std::sort(cantor.begin(), cantor.end(), [](const ComponentRecord& a, const ComponentRecord& b) {
    return a.generator_boundary < b.generator_boundary;
  });

  report.n_periodic = static_cast<int>(periodic.size());
  report.n_cantor = static_cast<int>(cantor.size());
  report.n_undetermined = static_cast<int>(undetermined.size());

  // The attractor cover at the configured depth, and the slice each Cantor
  // component's generator orbit actually visits.
  report.enclosure_depth = budget_.enclosure_depth;
  report.global_enclosure = enclosure_at_depth(spec_, budget_.enclosure_depth);
  report.enclosure_error = pcim::enclosure_error(spec_, budget_.enclosure_depth);
  for (ComponentRecord& comp : cantor) {
    std::vector<bool> visited(report.global_enclosure.size(), false);
    detail::stream_orbit(spec_, *comp.generator_plus, budget_.horizon, [&](long step, const Rational& state, int piece) {
      if (piece == 0) return false;
      if (step >= budget_.enclosure_depth) {
        int idx = interval_index(report.global_enclosure, state);
        if (idx >= 0) visited[static_cast<std::size_t>(idx)] = true;
      }
      return true;
    });
    for (std::size_t idx = 0; idx < visited.size(); ++idx)
      if (visited[idx]) comp.enclosure.push_back(report.global_enclosure[idx]);
  }

  for (auto& c : periodic) report.components.push_back(std::move(c));
  for (auto& c : cantor) report.components.push_back(std::move(c));
  for (auto& c : undetermined) report.components.push_back(std::move(c));

  // D within the admissible set: certified by an all-periodic decomposition,
  // refuted by any boundary hit, otherwise open.
  bool any_hit = false;
  bool all_certified = true;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (outcomes_[i].hit_delta_at) any_hit = true;
    if (!outcomes_[i].cert) all_certified = false;
  }
  report.flags.d_in_xtilde =
      any_hit ? TriState::refuted : (all_certified ? TriState::verified : TriState::unknown_at_horizon);

  const long n1 = report.n_periodic;
  const long n2 = report.n_cantor;
  const long n = spec_.pieces();
  const bool conditional = !report.fully_determined();
  auto audit = [&](const std::string& name, bool applicable, long lhs, long rhs, const std::string& why_na) {
    BoundAudit a;
    a.name = name;
    a.applicable = applicable;
    a.conditional = conditional;
    a.pass = !applicable || lhs <= rhs;
    a.detail = applicable ? std::to_string(lhs) + " <= " + std::to_string(rhs) : why_na;
    report.audits.push_back(std::move(a));
  };
  audit("N1+N2 <= #D", true, n1 + n2, static_cast<long>(report.d_count), "");
  audit("N1+2N2 <= 2(N-1)", report.flags.injective_per_piece, n1 + 2 * n2, 2 * (n - 1),
        "injectivity per piece not established");
  audit("N1+N2 <= N (increasing)", report.flags.injective_per_piece && report.flags.increasing_per_piece, n1 + n2, n,
        report.flags.increasing_per_piece ? "injectivity per piece not established" : "map not increasing per piece");

  if (report.fully_determined()) {
    for (const BoundAudit& a : report.audits)
      if (a.applicable && !a.pass)
        raise(errc::bound_violation, "fully determined decomposition violates " + a.name + " (" + a.detail + ")");
  }
  return report;
}

long Decomposer::report_steps(std::size_t i) const {
  return reports_[i] ? reports_[i]->steps : 0;
}

DecompositionReport decompose(const MapSpec& spec, const Budget& budget) {
  Decomposer d(spec, budget);
  return d.decompose();
}

CrossValidation cross_validate(const MapSpec& spec, const DecompositionReport& report, long grid, long tail,
                               long burn_in, int depth, bool exhaustive) {
  if (grid < 1) raise(errc::bad_spec, "cross_validate: grid must be >= 1");
  if (tail < 1 || burn_in < 0 || burn_in >= tail) raise(errc::bad_spec, "cross_validate: need 0 <= burn_in < tail");

  CrossValidation cv;
  cv.grid = grid;
  cv.tail = tail;
  cv.burn_in = burn_in;
  cv.depth = depth;

  // Regions: separation tubes around certified orbit points (sorted for
  // lookup) and the deep-enclosure intervals each Cantor generator orbit
  // visits.
  struct TubePoint {
    Rational point;
    Rational separation;
  };
  std::vector<TubePoint> points;
  bool all_periodic = true;
  bool any_cantor = false;
  for (const auto& comp : report.components) {
    if (comp.kind == ComponentKind::periodic) {
      for (const Rational& y : comp.cert->orbit) points.push_back(TubePoint{y, comp.cert->separation});
    } else {
      all_periodic = false;
      if (comp.kind == ComponentKind::cantor_evidence) any_cantor = true;
    }
  }
  std::sort(points.begin(), points.end(),
            [](const TubePoint& a, const TubePoint& b) { return a.point < b.point; });
  Rational max_sep(0);
  for (const auto& tp : points) max_sep = max(max_sep, tp.separation);

  // Nearest certified point and whether some tube covers the state.
  auto probe_tubes = [&](const Rational& state, Rational& nearest, Rational& shortfall) -> bool {
    nearest = Rational(-1);
    shortfall = Rational(-1);
    if (points.empty()) return false;
    auto it = std::lower_bound(points.begin(), points.end(), state,
                               [](const TubePoint& tp, const Rational& v) { return tp.point < v; });
    bool ok = false;
    auto consider = [&](const TubePoint& tp) {
      Rational d = (state - tp.point).abs();
      if (nearest.sign() < 0 || d < nearest) nearest = d;
      if (d < tp.separation) ok = true;
      Rational s = d - tp.separation;
      if (shortfall.sign() < 0 || s < shortfall) shortfall = s;
    };
    // Immediate neighbors give the nearest point; anything within the widest
    // separation can still cover.
    if (it != points.end()) consider(*it);
    if (it != points.begin()) consider(*std::prev(it));
    for (auto fwd = it; fwd != points.end() && fwd->point - state <= max_sep; ++fwd) consider(*fwd);
    for (auto rev = it; rev != points.begin();) {
      --rev;
      if (state - rev->point > max_sep) break;
      consider(*rev);
    }
    return ok;
  };

  std::vector<Interval> cantor_regions;
  if (any_cantor) {
    std::vector<Interval> enclosure = enclosure_at_depth(spec, depth);
    for (const auto& comp : report.components) {
      if (comp.kind != ComponentKind::cantor_evidence) continue;
      std::vector<bool> visited(enclosure.size(), false);
      detail::stream_orbit(spec, *comp.generator_plus, burn_in + tail,
                           [&](long step, const Rational& state, int piece) {
                             if (piece == 0) return false;
                             if (step >= depth) {
                               int idx = interval_index(enclosure, state);
                               if (idx >= 0) visited[static_cast<std::size_t>(idx)] = true;
                             }
                             return true;
                           });
      for (std::size_t idx = 0; idx < visited.size(); ++idx)
        if (visited[idx]) cantor_regions.push_back(enclosure[idx]);
    }
    cantor_regions = merge_intervals(std::move(cantor_regions));
  }

  struct StartResult {
    bool delta_hit = false;
    bool covered = true;
    Rational worst_distance;
    long worst_step = -1;
    std::optional<Rational> max_periodic_distance;
  };
  std::vector<StartResult> results(static_cast<std::size_t>(grid));
  std::vector<Rational> starts;
  for (long g = 0; g < grid; ++g) {
    if (grid == 1) {
      starts.push_back(spec.left_end());
    } else {
      starts.push_back(spec.left_end() + Rational(g) * spec.diam() / Rational(grid - 1));
    }
  }

  parallel_for(static_cast<std::size_t>(grid), [&](std::size_t g) {
    StartResult& res = results[g];
    const Rational& x0 = starts[g];
    if (spec.piece_of(x0) == 0) {
      res.delta_hit = true;
      return;
    }
    bool settled = false;
    auto end = detail::stream_orbit(spec, x0, tail, [&](long step, const Rational& state, int piece) {
      if (piece == 0) return true;
      Rational nearest, shortfall;
      bool in_tube = probe_tubes(state, nearest, shortfall);
      if (!exhaustive && in_tube) {
        // contraction keeps the orbit inside the tubes from here on
        settled = true;
        return false;
      }
      if (step < burn_in) return true;
      if (exhaustive && all_periodic && nearest.sign() >= 0) {
        if (!res.max_periodic_distance || nearest > *res.max_periodic_distance) res.max_periodic_distance = nearest;
      }
      bool ok = in_tube;
      if (!ok && !cantor_regions.empty()) {
        if (interval_index(cantor_regions, state) >= 0) {
          ok = true;
        } else {
          Rational d = interval_distance(cantor_regions, state);
          if (points.empty() || d < shortfall) shortfall = d;
        }
      }
      if (!ok) {
        res.covered = false;
        if (points.empty() && cantor_regions.empty()) shortfall = spec.diam();
        if (res.worst_step < 0 || shortfall > res.worst_distance) {
          res.worst_distance = shortfall;
          res.worst_step = step;
        }
      }
      return true;
    });
    if (!settled && end.hit_delta_at) res.delta_hit = true;
  });

  cv.worst_distance = Rational(0);
  for (std::size_t g = 0; g < results.size(); ++g) {
    const StartResult& res = results[g];
    if (res.delta_hit) {
      ++cv.delta_hits;
      continue;
    }
    if (res.covered) {
      ++cv.covered;
    } else {
      ++cv.uncovered;
      if (res.worst_distance > cv.worst_distance) {
        cv.worst_distance = res.worst_distance;
        cv.worst_start = starts[g];
        cv.worst_step = res.worst_step;
      }
    }
    if (all_periodic && res.max_periodic_distance) {
      if (!cv.max_distance_to_periodic || *res.max_periodic_distance > *cv.max_distance_to_periodic)
        cv.max_distance_to_periodic = res.max_periodic_distance;
    }
  }
  long checked = grid - cv.delta_hits;
  cv.coverage = checked > 0 ? Rational(cv.covered) / Rational(checked) : Rational(0);
  return cv;
}

}  // namespace pcim
