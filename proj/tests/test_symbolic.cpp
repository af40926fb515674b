#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "pcim/errors.hpp"
#include "pcim/map_io.hpp"
#include "pcim/orbit.hpp"
#include "pcim/symbolic.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace pcim;
using namespace pcim::testsupport;

namespace {

ItineraryWord constant_word(int symbol, std::size_t len) {
  ItineraryWord w;
  w.symbols.assign(len, symbol);
  return w;
}

ItineraryWord alternating_word(std::size_t len) {
  ItineraryWord w;
  for (std::size_t k = 0; k < len; ++k) w.symbols.push_back(1 + static_cast<int>(k % 2));
  return w;
}

}  // namespace

TEST_CASE("constant word: p == 1, eventually constant, period bound 1") {
  ComplexityProfile p = complexity(constant_word(1, 64), 10);
  for (int n = 1; n <= 10; ++n) CHECK(p.p(n) == 1);
  CHECK(p.classification == ComplexityClass::eventually_constant);
  CHECK(morse_hedlund_certify(p) == 1);
}

TEST_CASE("alternating word: p == 2, period bound 2") {
  ComplexityProfile p = complexity(alternating_word(64), 10);
  for (int n = 1; n <= 10; ++n) CHECK(p.p(n) == 2);
  CHECK(p.classification == ComplexityClass::eventually_constant);
  CHECK(morse_hedlund_certify(p) == 2);
}

TEST_CASE("word too short for the window") {
  CHECK_THROWS_AS(complexity(constant_word(1, 10), 10, 8), Error);
  try {
    complexity(constant_word(1, 10), 10, 8);
  } catch (const Error& e) {
    CHECK(e.code() == errc::word_too_short);
  }
}

TEST_CASE("sturmian-consistent profiles certify nothing") {
  // golden-rotation prefix via the three-distance construction
  ItineraryWord w;
  double tau = 0.6180339887498949;
  for (int n = 0; n < 2000; ++n)
    w.symbols.push_back(static_cast<int>(std::floor((n + 1) * tau) - std::floor(n * tau)) + 1);
  ComplexityProfile p = complexity(w, 20);
  CHECK(p.classification == ComplexityClass::sturmian_consistent);
  for (int n = 1; n <= 20; ++n) CHECK(p.p(n) == static_cast<std::uint64_t>(n) + 1);
  CHECK(!morse_hedlund_certify(p));
}

TEST_CASE("complexity agrees with the set-based factor oracle") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 10; ++k) {
    MapSpec spec = random_map(rng);
    Rational x = random_rational(rng, spec.left_end(), spec.right_end(), 61);
    if (spec.piece_of(x) == 0) continue;
    OrbitSample s = iterate(spec, x, 400);
    if (s.itinerary.size() < 28) continue;
    ComplexityProfile p = complexity(s.itinerary, 20, 8);
    auto oracle = factor_count_oracle(s.itinerary, 20);
    for (int n = 1; n <= 20; ++n) CHECK(p.p(n) == oracle[static_cast<std::size_t>(n) - 1]);
  }
}

TEST_CASE("monotone and submultiplicative on orbit words") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 10; ++k) {
    MapSpec spec = random_map(rng);
    Rational x = random_rational(rng, spec.left_end(), spec.right_end(), 67);
    if (spec.piece_of(x) == 0) continue;
    OrbitSample s = iterate(spec, x, 600);
    if (s.itinerary.size() < 40) continue;
    ComplexityProfile p = complexity(s.itinerary, 30, 8);
    for (int n = 1; n < 30; ++n) {
      CHECK(p.p(n) >= 1);
      CHECK(p.p(n) <= p.p(n + 1));
      CHECK(p.p(n + 1) <= static_cast<std::uint64_t>(spec.pieces()) * p.p(n));
    }
  }
}

TEST_CASE("factor sets project by prefix removal") {
  std::mt19937_64 rng(37);
  MapSpec spec = random_map(rng);
  Rational x = random_rational(rng, spec.left_end(), spec.right_end(), 71);
  if (spec.piece_of(x) != 0) {
    OrbitSample s = iterate(spec, x, 500);
    if (s.itinerary.size() >= 40) {
      // every (n+1)-factor's length-n suffix is an n-factor
      for (int n = 1; n <= 10; ++n) {
        std::set<std::vector<int>> shorter;
        for (std::size_t t = 0; t + static_cast<std::size_t>(n) <= s.itinerary.size(); ++t)
          shorter.insert(std::vector<int>(s.itinerary.symbols.begin() + static_cast<std::ptrdiff_t>(t),
                                          s.itinerary.symbols.begin() + static_cast<std::ptrdiff_t>(t) + n));
        for (std::size_t t = 0; t + static_cast<std::size_t>(n) + 1 <= s.itinerary.size(); ++t) {
          std::vector<int> suffix(s.itinerary.symbols.begin() + static_cast<std::ptrdiff_t>(t) + 1,
                                  s.itinerary.symbols.begin() + static_cast<std::ptrdiff_t>(t) + 1 + n);
          CHECK(shorter.count(suffix) == 1);
        }
      }
    }
  }
}

TEST_CASE("periodic certificates give eventually-constant complexity bounded by the period") {
  std::mt19937_64 rng(47);
  int checked = 0;
  for (int k = 0; k < 30 && checked < 5; ++k) {
    MapSpec spec = random_map(rng);
    Rational x = random_rational(rng, spec.left_end(), spec.right_end(), 83);
    if (spec.piece_of(x) == 0) continue;
    auto cert = detect_eventual_periodicity(spec, x, 3000);
    if (!cert || cert->period > 8) continue;
    ++checked;
    OrbitSample s = iterate(spec, cert->point, 40 * cert->period + 60);
    REQUIRE(!s.hit_delta_at);
    ComplexityProfile p = complexity(s.itinerary, 3 * static_cast<int>(cert->period) + 12, 8);
    CHECK(p.classification == ComplexityClass::eventually_constant);
    REQUIRE(p.stable_value);
    CHECK(*p.stable_value <= static_cast<std::uint64_t>(cert->period));
  }
  CHECK(checked > 0);
}

TEST_CASE("smallest_period finds the primitive block") {
  std::vector<int> s{1, 2, 1, 1, 2, 1, 1, 2, 1};
  CHECK(smallest_period(s, 0, s.size()) == 3);
  std::vector<int> t{1, 1, 1, 1};
  CHECK(smallest_period(t, 0, t.size()) == 1);
  std::vector<int> u{1, 2, 3, 4};
  CHECK(smallest_period(u, 0, u.size()) == 4);
  CHECK(smallest_period(u, 1, 3) == 2);
}

TEST_CASE("affine-consistent tail with rate 2") {
  ComplexityProfile p;
  p.window = 8;
  // synthetic profile: p(n) = 2n + 3 for the whole tail
  for (int n = 1; n <= 16; ++n) p.values.push_back(static_cast<std::uint64_t>(2 * n + 3));
  // classify via the public entry: rebuild through a word is impractical here,
  // so check the tail rule directly on a crafted word instead
  ItineraryWord w;
  double a1 = 0.6180339887498949, a2 = 0.41421356237309515;
  for (int n = 0; n < 4000; ++n) {
    int s1 = static_cast<int>(std::floor((n + 1) * a1) - std::floor(n * a1));
    int s2 = static_cast<int>(std::floor((n + 1) * a2) - std::floor(n * a2));
    w.symbols.push_back(1 + s1 + 2 * s2);  // product of two rotations over 4 symbols
  }
  ComplexityProfile q = complexity(w, 24, 8);
  if (q.classification == ComplexityClass::affine_consistent) {
    REQUIRE(q.growth_rate);
    CHECK(*q.growth_rate >= 1);
  } else {
    CHECK(q.classification != ComplexityClass::eventually_constant);
  }
}

TEST_CASE("wrap-map one-sided limit: factor counts look sturmian below the period") {
  // the orbit is exactly periodic with period 32 from step 0, so the factor
  // sets stabilize early and p(n) = n+1 holds right up to n = 30
  MapSpec spec = MapSpec::validate(gallery()[1].second);
  Rational d0 = boundary_data(spec).d0;
  OrbitSample s = iterate(spec, d0, 4000);
  REQUIRE(!s.hit_delta_at);
  ComplexityProfile p = complexity(s.itinerary, 30, 8);
  CHECK(p.classification == ComplexityClass::sturmian_consistent);
  auto oracle = factor_count_oracle(s.itinerary, 30);
  for (int n = 1; n <= 30; ++n) {
    CHECK(p.p(n) == static_cast<std::uint64_t>(n) + 1);
    CHECK(oracle[static_cast<std::size_t>(n) - 1] == p.p(n));
  }
}
