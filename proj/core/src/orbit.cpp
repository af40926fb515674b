#include "pcim/orbit.hpp"

#include <unordered_map>

#include "pcim/errors.hpp"

namespace pcim {

namespace detail {

StreamEnd stream_orbit(const MapSpec& spec, const Rational& x, long max_steps,
                       const std::function<bool(long, const Rational&, int)>& visit) {
  StreamEnd end;
  Rational state = x;
  for (long step = 0;; ++step) {
    int piece = spec.piece_of(state);
    if (!visit(step, state, piece)) {
      end.steps = step;
      end.final_state = state;
      return end;
    }
    if (piece == 0) {
      end.steps = step;
      end.hit_delta_at = step;
      end.final_state = state;
      return end;
    }
    if (step == max_steps) {
      end.steps = step;
      end.final_state = state;
      return end;
    }
    state = spec.eval(piece, state);
  }
}

}  // namespace detail

OrbitSample iterate(const MapSpec& spec, const Rational& x, long n) {
  if (n < 0) raise(errc::bad_spec, "iterate: negative step count");
  if (spec.piece_of(x) == 0) raise(errc::start_on_delta, "start point " + x.str() + " lies on the boundary set");
  OrbitSample sample;
  sample.start = x;
  sample.states.reserve(static_cast<std::size_t>(n) + 1);
  auto end = detail::stream_orbit(spec, x, n, [&](long step, const Rational& state, int piece) {
    sample.states.push_back(state);
    if (piece != 0 && step < n) sample.itinerary.symbols.push_back(piece);
    return true;
  });
  sample.hit_delta_at = end.hit_delta_at;
  return sample;
}

std::optional<PeriodicOrbitCert> word_fixed_point(const MapSpec& spec, const ItineraryWord& word) {
  if (word.empty()) raise(errc::bad_spec, "word_fixed_point: empty word");
  const int n = spec.pieces();
  Rational s(1), b(0);
  for (int sym : word.symbols) {
    if (sym < 1 || sym > n) raise(errc::bad_spec, "word symbol out of range");
    // g <- f_sym o g
    s = spec.slope(sym) * s;
    b = spec.slope(sym) * b + spec.intercept(sym);
  }
  // |s| <= lambda^p < 1, so 1-s never vanishes.
  Rational fixed = b / (Rational(1) - s);
  if (fixed < spec.left_end() || fixed > spec.right_end()) return std::nullopt;

  PeriodicOrbitCert cert;
  cert.word = word;
  cert.period = static_cast<long>(word.size());
  cert.point = fixed;
  cert.orbit.reserve(word.size());
  Rational x = fixed;
  for (int sym : word.symbols) {
    if (spec.piece_of(x) != sym) return std::nullopt;
    cert.orbit.push_back(x);
    x = spec.eval(sym, x);
  }
  if (!(x == fixed)) return std::nullopt;  // cannot happen for the affine fixed point

  bool first = true;
  for (const Rational& y : cert.orbit) {
    for (const Rational& c : spec.delta()) {
      Rational d = (y - c).abs();
      if (first || d < cert.separation) cert.separation = d;
      first = false;
    }
  }
  if (!(cert.separation > Rational(0))) return std::nullopt;
  return cert;
}

namespace {

// Rotates a certificate so that cert.point becomes the k-th orbit point.
PeriodicOrbitCert rotate_cert(const PeriodicOrbitCert& cert, std::size_t k) {
  if (k == 0) return cert;
  PeriodicOrbitCert out = cert;
  out.word = cert.word.rotated(k);
  out.orbit.assign(cert.orbit.begin() + static_cast<std::ptrdiff_t>(k), cert.orbit.end());
  out.orbit.insert(out.orbit.end(), cert.orbit.begin(), cert.orbit.begin() + static_cast<std::ptrdiff_t>(k));
  out.point = out.orbit.front();
  return out;
}

// Index of the nearest orbit point if the state is strictly within the
// separation radius of the orbit.
std::optional<std::size_t> within_separation(const PeriodicOrbitCert& cert, const Rational& state) {
  std::optional<std::size_t> best;
  Rational best_d;
  for (std::size_t k = 0; k < cert.orbit.size(); ++k) {
    Rational d = (state - cert.orbit[k]).abs();
    if (d < cert.separation && (!best || d < best_d)) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

DetectOutcome detect_eventual_periodicity_ex(const MapSpec& spec, const Rational& x, long horizon) {
  return detect_eventual_periodicity_ex(spec, x, horizon, nullptr);
}

DetectOutcome detect_eventual_periodicity_ex(const MapSpec& spec, const Rational& x, long horizon,
                                             const std::function<void(long, const Rational&, int)>& observer) {
  if (horizon < 1) raise(errc::bad_spec, "detect: horizon must be >= 1");
  DetectOutcome out;

  // Exact-repetition table, kept only while states stay small.
  std::unordered_map<Rational, long, RationalHash> seen;
  constexpr std::size_t kSmallLimbs = 32;
  constexpr std::size_t kMaxSeen = 200000;

  std::optional<PeriodicOrbitCert> found;
  long next_checkpoint = 32;

  auto try_block = [&](const std::vector<int>& itin, const Rational& state) -> bool {
    const std::size_t len = itin.size();
    if (len < 8) return false;
    const std::size_t begin = len / 2;
    std::size_t p = smallest_period(itin, begin, len);
    if (p == 0 || 3 * p > len - begin) return false;
    ItineraryWord w;
    w.symbols.assign(itin.end() - static_cast<std::ptrdiff_t>(p), itin.end());
    auto cert = word_fixed_point(spec, w);
    if (!cert) return false;
    if (!within_separation(*cert, state)) return false;
    found = std::move(cert);
    return true;
  };

  auto try_word = [&](const std::vector<int>& itin, long from, long to, const Rational& state) -> bool {
    ItineraryWord w;
    w.symbols.assign(itin.begin() + from, itin.begin() + to);
    auto cert = word_fixed_point(spec, w);
    if (!cert) return false;
    if (!within_separation(*cert, state)) return false;
    found = std::move(cert);
    return true;
  };

  auto end = detail::stream_orbit(spec, x, horizon, [&](long step, const Rational& state, int piece) {
    if (observer) observer(step, state, piece);
    if (piece == 0) return true;  // stream reports the boundary hit itself
    if (step > 0 && step == next_checkpoint) {
      next_checkpoint *= 2;
      if (try_block(out.itinerary.symbols, state)) return false;
    }
    if (state.limbs() <= kSmallLimbs && seen.size() < kMaxSeen) {
      auto [it, inserted] = seen.try_emplace(state, step);
      if (!inserted) {
        if (try_word(out.itinerary.symbols, it->second, step, state)) return false;
      }
    }
    if (step < horizon) out.itinerary.symbols.push_back(piece);
    return true;
  });

  out.hit_delta_at = end.hit_delta_at;
  out.steps = static_cast<long>(out.itinerary.size());
  out.final_state = end.final_state;

  if (!found && !end.hit_delta_at && end.steps == horizon) {
    // Final attempt over the full recorded itinerary.
    try_block(out.itinerary.symbols, end.final_state);
  }

  if (found) {
    // First witnessing step: earliest orbit state within the separation
    // radius. Once inside, the orbit stays inside, so a forward scan finds it.
    long preperiod = -1;
    std::size_t phase = 0;
    detail::stream_orbit(spec, x, horizon, [&](long step, const Rational& state, int piece) {
      if (piece == 0) return false;
      if (auto k = within_separation(*found, state)) {
        preperiod = step;
        phase = *k;
        return false;
      }
      return true;
    });
    PeriodicOrbitCert cert = rotate_cert(*found, phase);
    cert.preperiod = preperiod;
    out.cert = std::move(cert);
  }
  return out;
}

std::optional<PeriodicOrbitCert> detect_eventual_periodicity(const MapSpec& spec, const Rational& x, long horizon) {
  if (spec.piece_of(x) == 0) raise(errc::start_on_delta, "start point " + x.str() + " lies on the boundary set");
  return detect_eventual_periodicity_ex(spec, x, horizon).cert;
}

}  // namespace pcim
