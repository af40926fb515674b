#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcim/map_model.hpp"
#include "pcim/rational.hpp"
#include "pcim/symbolic.hpp"

namespace pcim {

/// A stored orbit prefix. states[k+1] = f_{itinerary[k]}(states[k]) exactly;
/// iteration stops at the first state lying on the boundary set.
struct OrbitSample {
  Rational start;
  std::vector<Rational> states;
  ItineraryWord itinerary;
  std::optional<long> hit_delta_at;  // 0-based index into states
};

/// Exact orbit of length <= n+1. Throws StartOnDelta when x is a boundary
/// point.
OrbitSample iterate(const MapSpec& spec, const Rational& x, long n);

/// Certificate for a periodic orbit: the composition of the branches named by
/// `word` has the exact fixed point `point`, whose orbit realizes `word` and
/// keeps distance `separation` > 0 from the boundary set.
struct PeriodicOrbitCert {
  ItineraryWord word;
  Rational point;               // x*, fixed point of the composed branch
  long period = 0;              // = word.size()
  long preperiod = 0;           // first step of the witnessing orbit within separation
  Rational separation;          // rho = min distance of the orbit to the boundary set
  std::vector<Rational> orbit;  // x*, f(x*), ..., f^{p-1}(x*)
};

/// Composes the branches of `word` into g(x) = s*x + b, takes x* = b/(1-s) and
/// checks exactly that the orbit of x* realizes `word` off the boundary set
/// and returns to x*. Absence of a certificate is a normal outcome.
std::optional<PeriodicOrbitCert> word_fixed_point(const MapSpec& spec, const ItineraryWord& word);

/// Extended detection result; `detect_eventual_periodicity` is the plain view.
struct DetectOutcome {
  std::optional<PeriodicOrbitCert> cert;  // preperiod filled in
  std::optional<long> hit_delta_at;       // orbit reached the boundary set (0-based step)
  long steps = 0;                         // symbols recorded
  ItineraryWord itinerary;                // full itinerary up to the stop point
  Rational final_state;
};

DetectOutcome detect_eventual_periodicity_ex(const MapSpec& spec, const Rational& x, long horizon);

/// Same scan with a per-step observer (step, state, piece) riding along on the
/// main pass, so callers can collect recurrence data without a second orbit
/// run. The observer does not see the preperiod replay.
DetectOutcome detect_eventual_periodicity_ex(const MapSpec& spec, const Rational& x, long horizon,
                                             const std::function<void(long, const Rational&, int)>& observer);

/// Streams the orbit, watching for an exactly repeated state or a repeated
/// itinerary block whose affine fixed point certifies; a current state within
/// the certificate's separation of the certified orbit pins the limit set.
/// Returns nothing at horizon exhaustion (reported as undetermined, never as
/// evidence of a Cantor limit).
std::optional<PeriodicOrbitCert> detect_eventual_periodicity(const MapSpec& spec, const Rational& x, long horizon);

namespace detail {

struct StreamEnd {
  long steps = 0;                    // number of map applications performed
  std::optional<long> hit_delta_at;  // 0-based step index of the boundary hit
  Rational final_state;
};

/// Calls visit(step, state, piece) for step = 0.., state = f^step(x); piece is
/// 0 exactly when the state lies on the boundary set (iteration then stops).
/// visit returning false stops the stream early.
StreamEnd stream_orbit(const MapSpec& spec, const Rational& x, long max_steps,
                       const std::function<bool(long, const Rational&, int)>& visit);

}  // namespace detail

}  // namespace pcim
