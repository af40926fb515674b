#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "pcim/atoms.hpp"
#include "pcim/decomposition.hpp"
#include "pcim/map_model.hpp"
#include "pcim/orbit.hpp"
#include "pcim/recurrence.hpp"
#include "pcim/symbolic.hpp"

namespace pcim {

/// All writers are deterministic: fixed ordering, no clocks, no addresses.

void orbit_csv(const OrbitSample& sample, std::ostream& os);
/// Streams an orbit straight to CSV without storing states.
void orbit_csv_stream(const MapSpec& spec, const Rational& start, long steps, std::ostream& os);

void atoms_csv(const AtomTree& tree, std::ostream& os);
void atoms_svg(const MapSpec& spec, const AtomTree& tree, std::ostream& os);

void complexity_csv(const ComplexityProfile& profile, std::ostream& os);
void complexity_svg(const MapSpec& spec, const ComplexityProfile& profile, std::ostream& os);

void relation_csv(const ClassGraph& graph, std::ostream& os);
void hasse_dot(const ClassGraph& graph, std::ostream& os);

nlohmann::ordered_json lr_report_to_json(const LrRecurrenceReport& report, const DetectionConfig& cfg);
nlohmann::ordered_json class_graph_to_json(const ClassGraph& graph);
nlohmann::ordered_json cert_to_json(const PeriodicOrbitCert& cert);
nlohmann::ordered_json report_to_json(const MapSpec& spec, const DecompositionReport& report);
nlohmann::ordered_json cross_validation_to_json(const CrossValidation& cv);
nlohmann::ordered_json xtilde_to_json(const XtildeReport& report);

void spectral_svg(const MapSpec& spec, const DecompositionReport& report, std::ostream& os);

}  // namespace pcim
