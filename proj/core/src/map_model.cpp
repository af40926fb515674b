#include "pcim/map_model.hpp"

#include <algorithm>

#include "pcim/errors.hpp"

namespace pcim {

const char* to_string(TriState t) {
  switch (t) {
    case TriState::verified: return "verified";
    case TriState::refuted: return "refuted";
    case TriState::unknown_at_horizon: return "unknown-at-horizon";
  }
  return "?";
}

MapSpec MapSpec::validate(const RawMapSpec& raw) {
  const std::size_t n_endpoints = raw.endpoints.size();
  if (n_endpoints < 3)
    raise(errc::bad_partition, "need at least 3 endpoints (N >= 2 pieces), got " + std::to_string(n_endpoints));
  for (std::size_t i = 0; i + 1 < n_endpoints; ++i)
    if (!(raw.endpoints[i] < raw.endpoints[i + 1]))
      raise(errc::bad_partition, "endpoints not strictly increasing at index " + std::to_string(i));
  if (raw.branches.size() != n_endpoints - 1)
    raise(errc::bad_spec, "expected " + std::to_string(n_endpoints - 1) + " branches, got " +
                              std::to_string(raw.branches.size()));

  MapSpec spec;
  spec.endpoints_ = raw.endpoints;
  spec.branches_ = raw.branches;
  spec.open_ends_ = raw.open_ends;

  Rational max_abs_slope(0);
  bool injective = true;
  bool increasing = true;
  for (const RawBranch& b : spec.branches_) {
    Rational a = b.slope.abs();
    if (a >= Rational(1)) raise(errc::non_contracting, "branch slope " + b.slope.str() + " has |slope| >= 1");
    max_abs_slope = max(max_abs_slope, a);
    if (b.slope.is_zero()) injective = false;
    if (b.slope.sign() <= 0) increasing = false;
  }
  if (raw.lambda) {
    if (*raw.lambda >= Rational(1)) raise(errc::non_contracting, "declared lambda " + raw.lambda->str() + " >= 1");
    if (*raw.lambda < max_abs_slope)
      raise(errc::bad_spec, "declared lambda " + raw.lambda->str() + " below max |slope| = " + max_abs_slope.str());
    spec.lambda_ = *raw.lambda;
  } else {
    spec.lambda_ = max_abs_slope;
  }

  // Each branch must map the closure of its piece into [c_0, c_N].
  const Rational& lo = spec.left_end();
  const Rational& hi = spec.right_end();
  for (int i = 1; i <= spec.pieces(); ++i) {
    for (const Rational& e : {spec.eval(i, spec.endpoint(i - 1)), spec.eval(i, spec.endpoint(i))}) {
      if (e < lo || e > hi)
        raise(errc::escapes_domain,
              "branch " + std::to_string(i) + " maps its piece outside the interval (image endpoint " + e.str() + ")");
    }
  }

  spec.flags_.injective_per_piece = injective;
  spec.flags_.increasing_per_piece = increasing;
  spec.flags_.d_in_xtilde = TriState::unknown_at_horizon;

  spec.delta_.clear();
  if (spec.open_ends_[0]) spec.delta_.push_back(spec.left_end());
  for (std::size_t i = 1; i + 1 < spec.endpoints_.size(); ++i) spec.delta_.push_back(spec.endpoints_[i]);
  if (spec.open_ends_[1]) spec.delta_.push_back(spec.right_end());
  return spec;
}

MapSpec MapSpec::with_d_in_xtilde(TriState t) const {
  MapSpec copy = *this;
  copy.flags_.d_in_xtilde = t;
  return copy;
}

bool MapSpec::in_delta(const Rational& x) const {
  return std::binary_search(delta_.begin(), delta_.end(), x);
}

int MapSpec::piece_of(const Rational& x) const {
  if (x < left_end() || x > right_end()) raise(errc::bad_spec, "point " + x.str() + " outside the interval");
  if (x == left_end()) return open_ends_[0] ? 0 : 1;
  if (x == right_end()) return open_ends_[1] ? 0 : pieces();
  // c_{i-1} < x <= c_i  ->  piece i unless x == c_i exactly.
  auto it = std::lower_bound(endpoints_.begin() + 1, endpoints_.end(), x);
  int i = static_cast<int>(it - endpoints_.begin());
  if (*it == x) return 0;  // internal boundary
  return i;
}

RawMapSpec MapSpec::raw() const {
  RawMapSpec raw;
  raw.endpoints = endpoints_;
  raw.branches = branches_;
  raw.open_ends = open_ends_;
  raw.lambda = lambda_;
  return raw;
}

BoundaryData boundary_data(const MapSpec& spec) {
  const int n = spec.pieces();
  BoundaryData bd;
  bd.d0 = spec.eval(1, spec.endpoint(0));
  bd.dN = spec.eval(n, spec.endpoint(n));
  for (int i = 1; i < n; ++i) {
    bd.d_minus.push_back(spec.eval(i, spec.endpoint(i)));
    bd.d_plus.push_back(spec.eval(i + 1, spec.endpoint(i)));
  }

  auto add = [&bd](const std::string& label, const Rational& v) {
    for (auto& pt : bd.distinct) {
      if (pt.value == v) {
        pt.aliases.push_back(label);
        return;
      }
    }
    bd.distinct.push_back({label, v, {}});
  };
  add("d0", bd.d0);
  for (int i = 1; i < n; ++i) add("d" + std::to_string(i) + "-", bd.d_minus[static_cast<std::size_t>(i - 1)]);
  for (int i = 1; i < n; ++i) add("d" + std::to_string(i) + "+", bd.d_plus[static_cast<std::size_t>(i - 1)]);
  add("dN", bd.dN);
  return bd;
}

XtildeReport check_d_in_xtilde(const MapSpec& spec, long horizon) {
  if (horizon < 1) raise(errc::bad_spec, "horizon must be >= 1");
  XtildeReport report;
  report.horizon = horizon;
  report.overall = TriState::unknown_at_horizon;
  for (const auto& pt : boundary_data(spec).distinct) {
    XtildeReport::PointStatus st;
    st.label = pt.label;
    st.value = pt.value;
    Rational x = pt.value;
    for (long k = 0; k <= horizon; ++k) {
      int piece = spec.piece_of(x);
      if (piece == 0) {
        st.status = TriState::refuted;
        st.refuted_step = k + 1;  // 1-based over the orbit sequence
        report.overall = TriState::refuted;
        break;
      }
      if (k == horizon) break;
      x = spec.eval(piece, x);
    }
    report.points.push_back(std::move(st));
  }
  return report;
}

}  // namespace pcim
