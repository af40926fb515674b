#include <doctest.h>

#include <random>

#include "pcim/errors.hpp"
#include "pcim/map_io.hpp"
#include "pcim/map_model.hpp"
#include "support/generators.hpp"

using namespace pcim;
using namespace pcim::testsupport;

namespace {

Rational rat(const char* s) { return *Rational::parse(s); }

RawMapSpec e1_raw() {
  RawMapSpec raw;
  raw.endpoints = {rat("0"), rat("1/2"), rat("1")};
  raw.branches = {{rat("1/2"), rat("0")}, {rat("1/2"), rat("1/2")}};
  return raw;
}

RawMapSpec e2_raw() {
  RawMapSpec raw;
  raw.endpoints = {rat("0"), rat("2/3"), rat("1")};
  raw.branches = {{rat("9/10"), rat("2/5")}, {rat("9/10"), rat("-3/5")}};
  return raw;
}

}  // namespace

TEST_CASE("E1 validates with lambda 1/2, injective, increasing") {
  MapSpec spec = MapSpec::validate(e1_raw());
  CHECK(spec.pieces() == 2);
  CHECK(spec.lambda() == rat("1/2"));
  CHECK(spec.flags().injective_per_piece);
  CHECK(spec.flags().increasing_per_piece);
  CHECK(spec.flags().d_in_xtilde == TriState::unknown_at_horizon);
  CHECK(spec.delta().size() == 1);
}

TEST_CASE("slope 1 is rejected as non-contracting") {
  RawMapSpec raw = e1_raw();
  raw.branches[0].slope = rat("1");
  raw.branches[0].intercept = rat("0");
  CHECK_THROWS_WITH_AS(MapSpec::validate(raw), doctest::Contains("|slope| >= 1"), Error);
  try {
    MapSpec::validate(raw);
  } catch (const Error& e) {
    CHECK(e.code() == errc::non_contracting);
  }
}

TEST_CASE("E2 validates with lambda 9/10 via exact endpoint images") {
  MapSpec spec = MapSpec::validate(e2_raw());
  CHECK(spec.lambda() == rat("9/10"));
  CHECK(spec.eval(1, rat("2/3")) == rat("1"));   // image endpoint reaches the right end
  CHECK(spec.eval(2, rat("1")) == rat("3/10"));
  CHECK(spec.flags().injective_per_piece);
}

TEST_CASE("bad partitions and escaping branches are rejected") {
  RawMapSpec raw = e1_raw();
  raw.endpoints = {rat("0"), rat("1/2"), rat("1/2")};
  CHECK_THROWS_AS(MapSpec::validate(raw), Error);

  raw = e1_raw();
  raw.endpoints = {rat("0")};
  CHECK_THROWS_AS(MapSpec::validate(raw), Error);

  raw = e1_raw();
  raw.branches[1].intercept = rat("3/4");  // f2(1) = 5/4 > 1
  try {
    MapSpec::validate(raw);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::escapes_domain);
  }
}

TEST_CASE("declared lambda must dominate the slopes") {
  RawMapSpec raw = e1_raw();
  raw.lambda = rat("3/4");
  CHECK(MapSpec::validate(raw).lambda() == rat("3/4"));
  raw.lambda = rat("1/4");
  CHECK_THROWS_AS(MapSpec::validate(raw), Error);
  raw.lambda = rat("1");
  CHECK_THROWS_AS(MapSpec::validate(raw), Error);
}

TEST_CASE("zero slopes clear the injectivity flag") {
  RawMapSpec raw = e1_raw();
  raw.branches[0].slope = rat("0");
  raw.branches[0].intercept = rat("1/4");
  MapSpec spec = MapSpec::validate(raw);
  CHECK(!spec.flags().injective_per_piece);
  CHECK(!spec.flags().increasing_per_piece);
}

TEST_CASE("piece_of handles interior, boundaries and open ends") {
  MapSpec spec = MapSpec::validate(e1_raw());
  CHECK(spec.piece_of(rat("1/4")) == 1);
  CHECK(spec.piece_of(rat("3/4")) == 2);
  CHECK(spec.piece_of(rat("1/2")) == 0);
  CHECK(spec.piece_of(rat("0")) == 1);
  CHECK(spec.piece_of(rat("1")) == 2);

  RawMapSpec raw = e1_raw();
  raw.open_ends = {true, false};
  MapSpec open_spec = MapSpec::validate(raw);
  CHECK(open_spec.piece_of(rat("0")) == 0);
  CHECK(open_spec.delta().size() == 2);
}

TEST_CASE("boundary_data: E1 and E2 one-sided limits") {
  BoundaryData bd1 = boundary_data(MapSpec::validate(e1_raw()));
  CHECK(bd1.d0 == rat("0"));
  CHECK(bd1.d_minus[0] == rat("1/4"));
  CHECK(bd1.d_plus[0] == rat("3/4"));
  CHECK(bd1.dN == rat("1"));
  CHECK(bd1.distinct.size() == 4);

  BoundaryData bd2 = boundary_data(MapSpec::validate(e2_raw()));
  CHECK(bd2.d0 == rat("2/5"));
  CHECK(bd2.d_minus[0] == rat("1"));
  CHECK(bd2.d_plus[0] == rat("0"));
  CHECK(bd2.dN == rat("3/10"));
}

TEST_CASE("boundary_data is deterministic and #D <= 2N") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 30; ++k) {
    MapSpec spec = random_map(rng);
    BoundaryData a = boundary_data(spec);
    BoundaryData b = boundary_data(spec);
    REQUIRE(a.distinct.size() == b.distinct.size());
    for (std::size_t i = 0; i < a.distinct.size(); ++i) {
      CHECK(a.distinct[i].value == b.distinct[i].value);
      CHECK(a.distinct[i].label == b.distinct[i].label);
    }
    CHECK(a.distinct.size() <= 2 * static_cast<std::size_t>(spec.pieces()));
    for (const auto& pt : a.distinct) {
      CHECK(pt.value >= spec.left_end());
      CHECK(pt.value <= spec.right_end());
    }
  }
}

TEST_CASE("contraction inequality holds exactly on random pairs") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    MapSpec spec = random_map(rng);
    for (int i = 1; i <= spec.pieces(); ++i) {
      const Rational& l = spec.endpoint(i - 1);
      const Rational& r = spec.endpoint(i);
      for (int t = 0; t < 10; ++t) {
        Rational x = random_rational(rng, l, r);
        Rational y = random_rational(rng, l, r);
        CHECK((spec.eval(i, x) - spec.eval(i, y)).abs() <= spec.lambda() * (x - y).abs());
      }
    }
  }
}

TEST_CASE("check_d_in_xtilde: E1 monotone orbits stay unresolved, never verified") {
  XtildeReport report = check_d_in_xtilde(MapSpec::validate(e1_raw()), 100);
  CHECK(report.overall == TriState::unknown_at_horizon);
  for (const auto& pt : report.points) {
    CHECK(pt.status == TriState::unknown_at_horizon);  // verified needs a certificate
    CHECK(!pt.refuted_step);
  }
}

TEST_CASE("check_d_in_xtilde: exact boundary hit refutes at step 1") {
  RawMapSpec raw = e1_raw();
  raw.branches[0].intercept = rat("1/2");  // f1(c_0) = 1/2 = c_1
  raw.branches[0].slope = rat("1/4");      // keep the image inside
  XtildeReport report = check_d_in_xtilde(MapSpec::validate(raw), 50);
  CHECK(report.overall == TriState::refuted);
  bool found = false;
  for (const auto& pt : report.points) {
    if (pt.label == "d0") {
      found = true;
      CHECK(pt.status == TriState::refuted);
      CHECK(pt.refuted_step == 1);
    }
  }
  CHECK(found);
}

TEST_CASE("check_d_in_xtilde: E2 at horizon 1e4 stays unknown") {
  XtildeReport report = check_d_in_xtilde(MapSpec::validate(e2_raw()), 10000);
  for (const auto& pt : report.points) CHECK(pt.status == TriState::unknown_at_horizon);
}

TEST_CASE("map spec JSON round-trips and rejects decimals") {
  RawMapSpec raw = e2_raw();
  nlohmann::ordered_json doc = map_spec_to_json(raw);
  RawMapSpec back = parse_map_spec(doc);
  CHECK(back.endpoints == std::vector<Rational>{raw.endpoints});
  CHECK(back.branches.size() == raw.branches.size());
  for (std::size_t i = 0; i < raw.branches.size(); ++i) {
    CHECK(back.branches[i].slope == raw.branches[i].slope);
    CHECK(back.branches[i].intercept == raw.branches[i].intercept);
  }

  nlohmann::json bad = {{"endpoints", {"0", 0.5, "1"}}, {"branches", nlohmann::json::array()}};
  CHECK_THROWS_AS(parse_map_spec(bad), Error);
  nlohmann::json bad2 = doc;
  bad2["endpoints"][1] = "0.5";
  CHECK_THROWS_AS(parse_map_spec(bad2), Error);
}

TEST_CASE("gallery maps all validate; six-piece split is injective per piece") {
  auto maps = gallery();
  REQUIRE(maps.size() >= 4);
  for (const auto& [name, raw] : maps) {
    MapSpec spec = MapSpec::validate(raw);
    CHECK(spec.pieces() >= 2);
  }
  MapSpec six = MapSpec::validate(maps[3].second);
  CHECK(six.pieces() == 6);
  CHECK(six.flags().injective_per_piece);
  CHECK(!six.flags().increasing_per_piece);
  // extremum split: neighboring branches agree at the split points
  for (int i = 1; i < six.pieces(); ++i) {
    if (six.slope(i).sign() != six.slope(i + 1).sign())
      CHECK(six.eval(i, six.endpoint(i)) == six.eval(i + 1, six.endpoint(i)));
  }
}
