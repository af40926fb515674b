#include "pcim/exports.hpp"

#include <algorithm>
#include <cstdio>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

void orbit_csv(const OrbitSample& sample, std::ostream& os) {
  os << "step,state,piece\n";
  for (std::size_t k = 0; k < sample.states.size(); ++k) {
    os << k << ',' << sample.states[k].str() << ',';
    if (k < sample.itinerary.size())
      os << sample.itinerary[k];
    else if (sample.hit_delta_at && static_cast<std::size_t>(*sample.hit_delta_at) == k)
      os << 0;
    os << '\n';
  }
}

void orbit_csv_stream(const MapSpec& spec, const Rational& start, long steps, std::ostream& os) {
  if (spec.piece_of(start) == 0) raise(errc::start_on_delta, "start point lies on the boundary set");
  os << "step,state,piece\n";
  detail::stream_orbit(spec, start, steps, [&](long step, const Rational& state, int piece) {
    os << step << ',' << state.str() << ',' << piece << '\n';
    return true;
  });
}

void atoms_csv(const AtomTree& tree, std::ostream& os) {
  os << "generation,word,left,right\n";
  for (int n = 1; n <= tree.depth(); ++n)
    for (const Atom& a : tree.generation(n))
      os << n << ',' << a.word.str() << ',' << a.iv.lo.str() << ',' << a.iv.hi.str() << '\n';
}

namespace {

constexpr double kSvgW = 800.0;
constexpr double kSvgPad = 40.0;

double svg_x(const MapSpec& spec, const Rational& v) {
  double lo = spec.left_end().to_double();
  double hi = spec.right_end().to_double();
  return kSvgPad + (v.to_double() - lo) / (hi - lo) * (kSvgW - 2 * kSvgPad);
}

void svg_open(std::ostream& os, double h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kSvgW) << "\" height=\"" << fixed(h)
     << "\" viewBox=\"0 0 " << fixed(kSvgW) << ' ' << fixed(h) << "\">\n";
}

}  // namespace

void atoms_svg(const MapSpec& spec, const AtomTree& tree, std::ostream& os) {
  const int depth = tree.depth();
  const double row = 26.0;
  const double h = kSvgPad * 2 + row * depth;
  svg_open(os, h);
  for (const Rational& c : spec.delta()) {
    double x = svg_x(spec, c);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kSvgPad - 10) << "\" x2=\"" << fixed(x) << "\" y2=\""
       << fixed(h - kSvgPad + 10) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (int n = 1; n <= depth; ++n) {
    double y = kSvgPad + row * (n - 1);
    os << "<text x=\"6\" y=\"" << fixed(y + 12) << "\" font-size=\"11\" fill=\"#444444\">n=" << n << "</text>\n";
    for (const Atom& a : tree.generation(n)) {
      double x0 = svg_x(spec, a.iv.lo);
      double x1 = svg_x(spec, a.iv.hi);
      if (x1 - x0 < 1.0) x1 = x0 + 1.0;
      os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(x1 - x0)
         << "\" height=\"16\" fill=\"#3b6fb6\"/>\n";
    }
  }
  os << "</svg>\n";
}

void complexity_csv(const ComplexityProfile& profile, std::ostream& os) {
  os << "n,p\n";
  for (int n = 1; n <= profile.n_max(); ++n) os << n << ',' << profile.p(n) << '\n';
}

void complexity_svg(const MapSpec& spec, const ComplexityProfile& profile, std::ostream& os) {
  const double h = 400.0;
  const int n_max = profile.n_max();
  double p_max = static_cast<double>(profile.p(n_max));
  for (int n = 1; n <= n_max; ++n) p_max = std::max(p_max, static_cast<double>(profile.p(n)));
  p_max = std::max(p_max, static_cast<double>(n_max + 1));
  auto px = [&](double n) { return kSvgPad + (n - 1) / std::max(1.0, n_max - 1.0) * (kSvgW - 2 * kSvgPad); };
  auto py = [&](double p) { return h - kSvgPad - p / p_max * (h - 2 * kSvgPad); };

  svg_open(os, h);
  os << "<line x1=\"" << fixed(px(1)) << "\" y1=\"" << fixed(py(0)) << "\" x2=\"" << fixed(px(n_max)) << "\" y2=\""
     << fixed(py(0)) << "\" stroke=\"#444444\"/>\n";
  if (spec.pieces() == 2) {
    os << "<polyline fill=\"none\" stroke=\"#cc5555\" stroke-dasharray=\"5 4\" points=\"";
    for (int n = 1; n <= n_max; ++n) os << fixed(px(n)) << ',' << fixed(py(n + 1.0)) << ' ';
    os << "\"/>\n";  // the n+1 line separating bounded from sturmian growth
  }
  os << "<polyline fill=\"none\" stroke=\"#3b6fb6\" stroke-width=\"2\" points=\"";
  for (int n = 1; n <= n_max; ++n) os << fixed(px(n)) << ',' << fixed(py(static_cast<double>(profile.p(n)))) << ' ';
  os << "\"/>\n";
  os << "<text x=\"" << fixed(kSvgPad) << "\" y=\"20\" font-size=\"12\" fill=\"#444444\">p(n), classification: "
     << to_string(profile.classification) << "</text>\n";
  os << "</svg>\n";
}

void relation_csv(const ClassGraph& graph, std::ostream& os) {
  os << "visited\\subject";
  for (int j : graph.witnessed) os << ",d" << j << "+";
  os << '\n';
  for (std::size_t a = 0; a < graph.witnessed.size(); ++a) {
    os << 'c' << graph.witnessed[a];
    for (std::size_t b = 0; b < graph.witnessed.size(); ++b) os << ',' << (graph.relation[a][b] ? 1 : 0);
    os << '\n';
  }
}

void hasse_dot(const ClassGraph& graph, std::ostream& os) {
  os << "digraph classes {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
    const ClassNode& node = graph.nodes[n];
    os << "  n" << n << " [label=\"{";
    for (std::size_t k = 0; k < node.members.size(); ++k) os << (k ? "," : "") << 'c' << node.members[k];
    os << "}\"";
    if (node.minimal) os << ", peripheries=2, style=bold";
    if (node.minimal && !node.minimality_confirmed) os << ", color=orange";
    os << "];\n";
  }
  for (const auto& [below, above] : graph.hasse_edges) os << "  n" << below << " -> n" << above << ";\n";
  os << "}\n";
}

nlohmann::ordered_json lr_report_to_json(const LrRecurrenceReport& report, const DetectionConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["subject"] = report.subject;
  doc["start"] = report.start.str();
  doc["steps"] = report.steps;
  if (report.hit_delta_at) doc["hit_delta_at"] = *report.hit_delta_at;
  doc["epsilon_schedule"] = nlohmann::ordered_json::array();
  for (const auto& e : cfg.epsilon_schedule) doc["epsilon_schedule"].push_back(e.str());
  doc["boundaries"] = nlohmann::ordered_json::array();
  for (const auto& bv : report.boundaries) {
    nlohmann::ordered_json b;
    b["boundary"] = "c" + std::to_string(bv.boundary);
    b["status"] = to_string(bv.status);
    b["finest_both_level"] = bv.finest_both_level;
    b["levels"] = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < bv.per_level.size(); ++l) {
      const auto& pair = bv.per_level[l];
      b["levels"].push_back({{"epsilon", cfg.epsilon_schedule[l].str()},
                             {"left", {{"count", pair[0].count}, {"first", pair[0].first_step}, {"last", pair[0].last_step}}},
                             {"right", {{"count", pair[1].count}, {"first", pair[1].first_step}, {"last", pair[1].last_step}}}});
    }
    b["witness_log"] = nlohmann::ordered_json::array();
    for (const auto& w : bv.log)
      b["witness_log"].push_back({{"step", w.step},
                                  {"side", w.side == Side::left ? "left" : "right"},
                                  {"level", w.level},
                                  {"distance_le", w.distance.str()}});
    doc["boundaries"].push_back(std::move(b));
  }
  return doc;
}

nlohmann::ordered_json class_graph_to_json(const ClassGraph& graph) {
  nlohmann::ordered_json doc;
  doc["witnessed"] = nlohmann::ordered_json::array();
  for (int b : graph.witnessed) doc["witnessed"].push_back("c" + std::to_string(b));
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : graph.nodes) {
    nlohmann::ordered_json n;
    n["members"] = nlohmann::ordered_json::array();
    for (int b : node.members) n["members"].push_back("c" + std::to_string(b));
    n["minimal"] = node.minimal;
    n["minimality_confirmed"] = node.minimality_confirmed;
    doc["nodes"].push_back(std::move(n));
  }
  doc["hasse_edges"] = nlohmann::ordered_json::array();
  for (const auto& [below, above] : graph.hasse_edges) doc["hasse_edges"].push_back({below, above});
  doc["inconsistencies"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : graph.inconsistencies)
    doc["inconsistencies"].push_back({"c" + std::to_string(a), "c" + std::to_string(b)});
  return doc;
}

nlohmann::ordered_json cert_to_json(const PeriodicOrbitCert& cert) {
  nlohmann::ordered_json doc;
  doc["point"] = cert.point.str();
  doc["period"] = cert.period;
  doc["preperiod"] = cert.preperiod;
  doc["word"] = cert.word.symbols;
  doc["separation"] = cert.separation.str();
  doc["orbit"] = nlohmann::ordered_json::array();
  for (const auto& y : cert.orbit) doc["orbit"].push_back(y.str());
  return doc;
}

nlohmann::ordered_json report_to_json(const MapSpec& spec, const DecompositionReport& report) {
  nlohmann::ordered_json doc;
  doc["map"] = {{"pieces", spec.pieces()},
                {"lambda", spec.lambda().str()},
                {"injective_per_piece", report.flags.injective_per_piece},
                {"increasing_per_piece", report.flags.increasing_per_piece},
                {"d_in_xtilde", to_string(report.flags.d_in_xtilde)},
                {"d_count", report.d_count}};
  doc["counts"] = {{"N1", report.n_periodic}, {"N2", report.n_cantor}, {"undetermined", report.n_undetermined}};

  doc["components"] = nlohmann::ordered_json::array();
  for (const auto& comp : report.components) {
    nlohmann::ordered_json c;
    c["kind"] = to_string(comp.kind);
    c["members"] = comp.members;
    if (comp.kind == ComponentKind::periodic) c["certificate"] = cert_to_json(*comp.cert);
    if (comp.kind == ComponentKind::cantor_evidence) {
      c["generator_boundary"] = "c" + std::to_string(comp.generator_boundary);
      nlohmann::ordered_json cls = nlohmann::ordered_json::array();
      for (int b : comp.generator_class) cls.push_back("c" + std::to_string(b));
      c["generator_class"] = std::move(cls);
      c["generator_plus"] = comp.generator_plus->str();
      c["generator_minus"] = comp.generator_minus->str();
      c["evidence"] = comp.evidence;
      c["enclosure"] = nlohmann::ordered_json::array();
      for (const auto& iv : comp.enclosure) c["enclosure"].push_back({iv.lo.str(), iv.hi.str()});
      c["one_sided_symmetry"] =
          "the left-sided order is not built; the same class generates the closure of both one-sided orbits";
    }
    if (!comp.note.empty()) c["note"] = comp.note;
    doc["components"].push_back(std::move(c));
  }

  doc["audits"] = nlohmann::ordered_json::array();
  for (const auto& a : report.audits)
    doc["audits"].push_back({{"name", a.name},
                             {"applicable", a.applicable},
                             {"conditional", a.conditional},
                             {"pass", a.pass},
                             {"detail", a.detail}});

  doc["enclosure"] = {{"depth", report.enclosure_depth},
                      {"hausdorff_error_le", report.enclosure_error.str()},
                      {"intervals", nlohmann::ordered_json::array()}};
  for (const auto& iv : report.global_enclosure) doc["enclosure"]["intervals"].push_back({iv.lo.str(), iv.hi.str()});

  doc["classes"] = class_graph_to_json(report.classes);
  if (!report.class_graph_note.empty()) doc["classes"]["note"] = report.class_graph_note;
  return doc;
}

nlohmann::ordered_json cross_validation_to_json(const CrossValidation& cv) {
  nlohmann::ordered_json doc;
  doc["grid"] = cv.grid;
  doc["tail"] = cv.tail;
  doc["burn_in"] = cv.burn_in;
  doc["enclosure_depth"] = cv.depth;
  doc["delta_hits"] = cv.delta_hits;
  doc["covered"] = cv.covered;
  doc["uncovered"] = cv.uncovered;
  doc["coverage"] = cv.coverage.str();
  doc["worst_shortfall_le"] = cv.worst_distance.round_up_magnitude().str();
  if (cv.worst_start) {
    doc["worst_start"] = cv.worst_start->str();
    doc["worst_step"] = cv.worst_step;
  }
  if (cv.max_distance_to_periodic)
    doc["max_distance_to_periodic_le"] = cv.max_distance_to_periodic->round_up_magnitude().str();
  return doc;
}

nlohmann::ordered_json xtilde_to_json(const XtildeReport& report) {
  nlohmann::ordered_json doc;
  doc["horizon"] = report.horizon;
  doc["overall"] = to_string(report.overall);
  doc["points"] = nlohmann::ordered_json::array();
  for (const auto& pt : report.points) {
    nlohmann::ordered_json p;
    p["label"] = pt.label;
    p["value"] = pt.value.str();
    p["status"] = to_string(pt.status);
    if (pt.refuted_step) p["refuted_step"] = *pt.refuted_step;
    doc["points"].push_back(std::move(p));
  }
  return doc;
}

void spectral_svg(const MapSpec& spec, const DecompositionReport& report, std::ostream& os) {
  const double h = 180.0;
  const double axis_y = 110.0;
  svg_open(os, h);
  os << "<line x1=\"" << fixed(kSvgPad) << "\" y1=\"" << fixed(axis_y) << "\" x2=\"" << fixed(kSvgW - kSvgPad)
     << "\" y2=\"" << fixed(axis_y) << "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
  for (const Rational& c : spec.delta()) {
    double x = svg_x(spec, c);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(axis_y - 8) << "\" x2=\"" << fixed(x) << "\" y2=\""
       << fixed(axis_y + 8) << "\" stroke=\"#444444\"/>\n";
  }
  for (const auto& iv : report.global_enclosure) {
    double x0 = svg_x(spec, iv.lo);
    double x1 = svg_x(spec, iv.hi);
    if (x1 - x0 < 1.0) x1 = x0 + 1.0;
    os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(axis_y + 22) << "\" width=\"" << fixed(x1 - x0)
       << "\" height=\"10\" fill=\"#cccccc\"/>\n";
  }
  for (const auto& comp : report.components) {
    if (comp.kind == ComponentKind::periodic) {
      for (const auto& y : comp.cert->orbit) {
        double x = svg_x(spec, y);
        os << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(axis_y) << "\" r=\"5\" fill=\"#2e8b57\"/>\n";
      }
    } else if (comp.kind == ComponentKind::cantor_evidence) {
      for (const auto& iv : comp.enclosure) {
        double x0 = svg_x(spec, iv.lo);
        double x1 = svg_x(spec, iv.hi);
        if (x1 - x0 < 1.5) x1 = x0 + 1.5;
        os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(axis_y - 16) << "\" width=\"" << fixed(x1 - x0)
           << "\" height=\"12\" fill=\"#b6443b\"/>\n";
      }
    }
  }
  os << "<text x=\"" << fixed(kSvgPad) << "\" y=\"24\" font-size=\"12\" fill=\"#444444\">N1=" << report.n_periodic
     << " N2=" << report.n_cantor << " undetermined=" << report.n_undetermined << "</text>\n";
  os << "</svg>\n";
}

}  // namespace pcim
