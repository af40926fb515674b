#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "pcim/decomposition.hpp"
#include "pcim/exports.hpp"
#include "pcim/map_io.hpp"

namespace fs = std::filesystem;
using namespace pcim;

namespace {

struct CommonOpts {
  std::string input;
  std::string out_dir;
  std::vector<std::string> formats;

  bool wants(const std::string& fmt, const std::string& def) const {
    if (formats.empty()) return def.find(fmt) != std::string::npos;
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
  }
  fs::path target(const std::string& name) const { return fs::path(out_dir) / name; }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_input = true) {
  if (with_input) cmd->add_option("input", opts.input, "map spec JSON file")->required();
  const char* env_out = std::getenv("PCIM_OUT");
  opts.out_dir = env_out ? env_out : ".";
  cmd->add_option("--out", opts.out_dir, "output directory (default: $PCIM_OUT or .)");
  cmd->add_option("--format", opts.formats, "artifact formats (csv,json,svg,dot)")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg", "dot"}));
}

MapSpec load(const CommonOpts& opts) { return MapSpec::validate(load_map_spec(opts.input)); }

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) raise(errc::bad_spec, "cannot write " + path.string());
  out << content;
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) raise(errc::bad_spec, "cannot write " + path.string());
  fn(out);
  std::cerr << "wrote " << path.string() << "\n";
}

Rational parse_rat_arg(const std::string& s, const std::string& what) {
  auto r = Rational::parse(s);
  if (!r) raise(errc::bad_spec, what + ": cannot parse rational '" + s + "'");
  return *r;
}

std::optional<DetectionConfig> make_detection(const MapSpec& spec, long horizon, const std::string& eps_csv,
                                              int min_witnesses) {
  DetectionConfig cfg = default_detection_config(spec, horizon);
  cfg.min_witnesses = min_witnesses;
  if (!eps_csv.empty()) {
    cfg.epsilon_schedule.clear();
    std::stringstream ss(eps_csv);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.epsilon_schedule.push_back(parse_rat_arg(item, "--eps"));
  }
  cfg.validate();
  return cfg;
}

Rational subject_value(const MapSpec& spec, const std::string& start, const std::string& subject) {
  if (!start.empty()) return parse_rat_arg(start, "--start");
  const BoundaryData bd = boundary_data(spec);
  for (const auto& pt : bd.distinct) {
    if (pt.label == subject) return pt.value;
    for (const auto& alias : pt.aliases)
      if (alias == subject) return pt.value;
  }
  raise(errc::bad_spec, "unknown subject label '" + subject + "' (use d0, dN, d<i>+ or d<i>-)");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::depth_budget_exceeded:
    case errc::order_violation:
      return 3;
    case errc::bound_violation:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis of piecewise contracting interval maps with affine branches"};
  app.require_subcommand(1);

  // validate
  CommonOpts v_opts;
  long v_horizon = 1000;
  auto* v_cmd = app.add_subcommand("validate", "validate a map spec and report hypothesis flags");
  add_common(v_cmd, v_opts);
  v_cmd->add_option("--horizon", v_horizon, "iteration budget for the boundary-orbit scan")->check(CLI::PositiveNumber);

  // orbit
  CommonOpts o_opts;
  std::string o_start;
  long o_steps = 100;
  auto* o_cmd = app.add_subcommand("orbit", "exact orbit as CSV");
  add_common(o_cmd, o_opts);
  o_cmd->add_option("--start", o_start, "start point p/q")->required();
  o_cmd->add_option("--steps", o_steps, "number of iterations")->check(CLI::PositiveNumber);

  // atoms
  CommonOpts a_opts;
  int a_depth = 8;
  std::size_t a_cap = 1'000'000;
  auto* a_cmd = app.add_subcommand("atoms", "atom generations and attractor cover");
  add_common(a_cmd, a_opts);
  a_cmd->add_option("--depth", a_depth, "generations to expand")->check(CLI::PositiveNumber);
  a_cmd->add_option("--cap", a_cap, "atom count budget")->check(CLI::PositiveNumber);

  // complexity
  CommonOpts c_opts;
  std::string c_start, c_subject = "d0";
  long c_horizon = 100000;
  int c_nmax = 30, c_window = 8;
  auto* c_cmd = app.add_subcommand("complexity", "word complexity of an orbit itinerary");
  add_common(c_cmd, c_opts);
  c_cmd->add_option("--start", c_start, "start point p/q (overrides --subject)");
  c_cmd->add_option("--subject", c_subject, "one-sided limit label (default d0)");
  c_cmd->add_option("--horizon", c_horizon, "itinerary length")->check(CLI::PositiveNumber);
  c_cmd->add_option("--nmax", c_nmax, "largest factor length")->check(CLI::PositiveNumber);
  c_cmd->add_option("--window", c_window, "confirmation window")->check(CLI::PositiveNumber);

  // classes
  CommonOpts k_opts;
  long k_horizon = 10000;
  std::string k_eps;
  int k_minw = 2;
  auto* k_cmd = app.add_subcommand("classes", "recurrence relation, class order and minimal classes");
  add_common(k_cmd, k_opts);
  k_cmd->add_option("--horizon", k_horizon, "iteration budget per subject")->check(CLI::PositiveNumber);
  k_cmd->add_option("--eps", k_eps, "comma-separated decreasing epsilon schedule");
  k_cmd->add_option("--min-witnesses", k_minw, "required visits per side")->check(CLI::PositiveNumber);

  // decompose
  CommonOpts d_opts;
  long d_horizon = 10000;
  int d_depth = 12, d_minw = 2;
  std::string d_eps;
  std::size_t d_cap = 1'000'000;
  auto* d_cmd = app.add_subcommand("decompose", "classify every one-sided limit and audit the counting bounds");
  add_common(d_cmd, d_opts);
  d_cmd->add_option("--horizon", d_horizon, "iteration budget per subject")->check(CLI::PositiveNumber);
  d_cmd->add_option("--depth", d_depth, "enclosure depth")->check(CLI::PositiveNumber);
  d_cmd->add_option("--eps", d_eps, "comma-separated decreasing epsilon schedule");
  d_cmd->add_option("--min-witnesses", d_minw, "required visits per side")->check(CLI::PositiveNumber);
  d_cmd->add_option("--cap", d_cap, "atom count budget")->check(CLI::PositiveNumber);

  // cross-validate
  CommonOpts x_opts;
  long x_horizon = 10000, x_grid = 101, x_tail = 10000, x_burn = -1;
  int x_depth = 12, x_cvdepth = 20, x_minw = 2;
  std::string x_eps;
  auto* x_cmd = app.add_subcommand("cross-validate", "grid-orbit check of a decomposition");
  add_common(x_cmd, x_opts);
  x_cmd->add_option("--horizon", x_horizon, "iteration budget per subject")->check(CLI::PositiveNumber);
  x_cmd->add_option("--depth", x_depth, "report enclosure depth")->check(CLI::PositiveNumber);
  x_cmd->add_option("--grid", x_grid, "number of start points")->check(CLI::PositiveNumber);
  x_cmd->add_option("--tail", x_tail, "iterations per start point")->check(CLI::PositiveNumber);
  x_cmd->add_option("--burn-in", x_burn, "steps dropped before checking (default tail/10)");
  x_cmd->add_option("--cv-depth", x_cvdepth, "enclosure depth for the coverage regions")->check(CLI::PositiveNumber);
  x_cmd->add_option("--eps", x_eps, "comma-separated decreasing epsilon schedule");
  x_cmd->add_option("--min-witnesses", x_minw, "required visits per side")->check(CLI::PositiveNumber);
  bool x_exhaustive = false;
  x_cmd->add_flag("--exhaustive", x_exhaustive, "scan whole tails instead of stopping at tube entry");

  // gallery
  CommonOpts g_opts;
  auto* g_cmd = app.add_subcommand("gallery", "write the bundled example maps");
  add_common(g_cmd, g_opts, /*with_input=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*v_cmd) {
      MapSpec spec = load(v_opts);
      XtildeReport xt = check_d_in_xtilde(spec, v_horizon);
      nlohmann::ordered_json doc;
      doc["pieces"] = spec.pieces();
      doc["lambda"] = spec.lambda().str();
      doc["delta"] = nlohmann::ordered_json::array();
      for (const auto& c : spec.delta()) doc["delta"].push_back(c.str());
      doc["injective_per_piece"] = spec.flags().injective_per_piece;
      doc["increasing_per_piece"] = spec.flags().increasing_per_piece;
      doc["d_in_xtilde"] = xtilde_to_json(xt);
      std::cout << doc.dump(2) << "\n";
    } else if (*o_cmd) {
      MapSpec spec = load(o_opts);
      Rational start = parse_rat_arg(o_start, "--start");
      if (o_opts.wants("csv", "csv"))
        write_stream(o_opts.target("orbit.csv"), [&](std::ostream& os) { orbit_csv_stream(spec, start, o_steps, os); });
    } else if (*a_cmd) {
      MapSpec spec = load(a_opts);
      AtomTree tree;
      int exit_code = 0;
      try {
        tree = expand_atoms(spec, a_depth, a_cap);
      } catch (DepthBudgetExceeded& e) {
        std::cerr << to_string(e.code()) << ": " << e.what() << " (partial artifacts written)\n";
        tree = std::move(e.partial);
        exit_code = 3;
      }
      if (a_opts.wants("csv", "csv,svg"))
        write_stream(a_opts.target("atoms.csv"), [&](std::ostream& os) { atoms_csv(tree, os); });
      if (tree.depth() >= 1 && a_opts.wants("svg", "csv,svg"))
        write_stream(a_opts.target("lambda_n.svg"), [&](std::ostream& os) { atoms_svg(spec, tree, os); });
      if (exit_code != 0) return exit_code;
    } else if (*c_cmd) {
      MapSpec spec = load(c_opts);
      Rational start = subject_value(spec, c_start, c_subject);
      if (spec.piece_of(start) == 0) raise(errc::start_on_delta, "start lies on the boundary set");
      ItineraryWord word;
      detail::stream_orbit(spec, start, c_horizon, [&](long step, const Rational&, int piece) {
        if (piece != 0 && step < c_horizon) word.symbols.push_back(piece);
        return true;
      });
      ComplexityProfile profile = complexity(word, c_nmax, c_window);
      if (c_opts.wants("csv", "csv,svg"))
        write_stream(c_opts.target("complexity.csv"), [&](std::ostream& os) { complexity_csv(profile, os); });
      if (c_opts.wants("svg", "csv,svg"))
        write_stream(c_opts.target("complexity.svg"), [&](std::ostream& os) { complexity_svg(spec, profile, os); });
      nlohmann::ordered_json doc;
      doc["classification"] = to_string(profile.classification);
      if (profile.stable_value) doc["stable_value"] = *profile.stable_value;
      if (profile.growth_rate) doc["growth_rate"] = *profile.growth_rate;
      if (auto bound = morse_hedlund_certify(profile)) doc["eventual_period_bound"] = *bound;
      std::cout << doc.dump(2) << "\n";
    } else if (*k_cmd) {
      MapSpec spec = load(k_opts);
      DetectionConfig cfg = *make_detection(spec, k_horizon, k_eps, k_minw);
      BoundaryData bd = boundary_data(spec);
      std::vector<LrRecurrenceReport> reports;
      std::vector<int> certified_empty;
      for (const auto& pt : bd.distinct) {
        if (spec.piece_of(pt.value) == 0) continue;
        LrRecurrenceReport rep = detect_lr(spec, pt.value, cfg, pt.label);
        for (const auto& alias : pt.aliases) {
          LrRecurrenceReport copy = rep;
          copy.subject = alias;
          reports.push_back(std::move(copy));
        }
        reports.push_back(std::move(rep));
      }
      ClassGraph graph = build_class_graph(spec, reports, certified_empty);
      if (k_opts.wants("dot", "csv,dot,json"))
        write_stream(k_opts.target("classes.dot"), [&](std::ostream& os) { hasse_dot(graph, os); });
      if (k_opts.wants("csv", "csv,dot,json"))
        write_stream(k_opts.target("relation.csv"), [&](std::ostream& os) { relation_csv(graph, os); });
      if (k_opts.wants("json", "csv,dot,json")) {
        nlohmann::ordered_json doc = class_graph_to_json(graph);
        doc["reports"] = nlohmann::ordered_json::array();
        for (const auto& rep : reports) doc["reports"].push_back(lr_report_to_json(rep, cfg));
        write_file(k_opts.target("classes.json"), doc.dump(2) + "\n");
      }
      std::cout << "minimal classes: " << minimal_classes(graph).size() << "\n";
    } else if (*d_cmd) {
      MapSpec spec = load(d_opts);
      Budget budget;
      budget.horizon = d_horizon;
      budget.enclosure_depth = d_depth;
      budget.atom_cap = d_cap;
      budget.lr = make_detection(spec, d_horizon, d_eps, d_minw);
      DecompositionReport report = decompose(spec, budget);
      if (d_opts.wants("json", "json,svg"))
        write_file(d_opts.target("report.json"), report_to_json(spec, report).dump(2) + "\n");
      if (d_opts.wants("svg", "json,svg"))
        write_stream(d_opts.target("spectral.svg"), [&](std::ostream& os) { spectral_svg(spec, report, os); });
      for (const auto& a : report.audits)
        std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << (a.applicable ? "" : " [n/a]")
                  << (a.conditional ? " [conditional]" : "") << ": " << a.detail << "\n";
      std::cout << "N1=" << report.n_periodic << " N2=" << report.n_cantor
                << " undetermined=" << report.n_undetermined << "\n";
    } else if (*x_cmd) {
      MapSpec spec = load(x_opts);
      Budget budget;
      budget.horizon = x_horizon;
      budget.enclosure_depth = x_depth;
      budget.lr = make_detection(spec, x_horizon, x_eps, x_minw);
      DecompositionReport report = decompose(spec, budget);
      long burn = x_burn >= 0 ? x_burn : x_tail / 10;
      CrossValidation cv = cross_validate(spec, report, x_grid, x_tail, burn, x_cvdepth, x_exhaustive);
      if (x_opts.wants("json", "json")) {
        nlohmann::ordered_json doc;
        doc["report"] = report_to_json(spec, report);
        doc["cross_validation"] = cross_validation_to_json(cv);
        write_file(x_opts.target("crossval.json"), doc.dump(2) + "\n");
      }
      std::cout << "coverage " << cv.covered << "/" << (cv.grid - cv.delta_hits) << " (delta hits " << cv.delta_hits
                << ")\n";
    } else if (*g_cmd) {
      fs::create_directories(g_opts.out_dir);
      for (const auto& [name, raw] : gallery()) {
        MapSpec::validate(raw);  // every bundled spec must pass
        fs::path path = g_opts.target(name + ".json");
        save_map_spec(raw, path.string());
        std::cout << path.string() << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
