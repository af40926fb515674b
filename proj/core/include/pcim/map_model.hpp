#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pcim/rational.hpp"

namespace pcim {

enum class TriState { verified, refuted, unknown_at_horizon };
const char* to_string(TriState t);

struct RawBranch {
  Rational slope;
  Rational intercept;
};

/// Unvalidated map description, as read from a spec file.
struct RawMapSpec {
  std::vector<Rational> endpoints;  // c_0 < c_1 < ... < c_N
  std::vector<RawBranch> branches;  // one per piece
  std::array<bool, 2> open_ends{false, false};
  std::optional<Rational> lambda;
};

struct HypothesisFlags {
  bool injective_per_piece = false;
  bool increasing_per_piece = false;
  TriState d_in_xtilde = TriState::unknown_at_horizon;
};

/// A validated piecewise contracting interval map with affine branches.
/// Immutable after validation; safe to share across threads.
class MapSpec {
public:
  /// Checks all invariants. Throws BadPartition, NonContracting or
  /// EscapesDomain. lambda defaults to max |slope_i|.
  static MapSpec validate(const RawMapSpec& raw);

  int pieces() const { return static_cast<int>(branches_.size()); }  // N
  const Rational& endpoint(int i) const { return endpoints_[static_cast<std::size_t>(i)]; }  // c_i, i=0..N
  const Rational& left_end() const { return endpoints_.front(); }
  const Rational& right_end() const { return endpoints_.back(); }
  Rational diam() const { return right_end() - left_end(); }

  const Rational& slope(int piece) const { return branches_[static_cast<std::size_t>(piece - 1)].slope; }
  const Rational& intercept(int piece) const { return branches_[static_cast<std::size_t>(piece - 1)].intercept; }
  const Rational& lambda() const { return lambda_; }
  const std::array<bool, 2>& open_ends() const { return open_ends_; }
  const HypothesisFlags& flags() const { return flags_; }
  MapSpec with_d_in_xtilde(TriState t) const;

  /// Continuous extension of branch `piece` evaluated at x (x may be a
  /// closure point of the piece).
  Rational eval(int piece, const Rational& x) const {
    return slope(piece) * x + intercept(piece);
  }

  /// The boundary set: c_1..c_{N-1}, plus c_0 / c_N for declared-open ends.
  const std::vector<Rational>& delta() const { return delta_; }
  bool in_delta(const Rational& x) const;

  /// Piece index in 1..N, or 0 when x lies in the boundary set. x must be in
  /// [c_0, c_N].
  int piece_of(const Rational& x) const;

  RawMapSpec raw() const;

private:
  MapSpec() = default;

  std::vector<Rational> endpoints_;
  std::vector<RawBranch> branches_;
  Rational lambda_;
  std::array<bool, 2> open_ends_{false, false};
  HypothesisFlags flags_;
  std::vector<Rational> delta_;
};

/// One-sided limits of the map at the piece boundaries.
struct BoundaryData {
  Rational d0;                    // f_1(c_0)
  Rational dN;                    // f_N(c_N)
  std::vector<Rational> d_minus;  // d_i^- = f_i(c_i),     i = 1..N-1
  std::vector<Rational> d_plus;   // d_i^+ = f_{i+1}(c_i), i = 1..N-1

  struct Point {
    std::string label;  // first label in d0, d1-, ..., d1+, ..., dN order
    Rational value;
    std::vector<std::string> aliases;  // further labels with the same value
  };
  std::vector<Point> distinct;  // deduplicated; #D = distinct.size()
};

BoundaryData boundary_data(const MapSpec& spec);

/// Exact-iteration evidence for membership of D in the set of points whose
/// forward orbit avoids the boundary set. Refuted when an orbit point lands on
/// a boundary exactly (step indices are 1-based over d, f(d), f^2(d), ...);
/// never "verified" from iteration alone — that upgrade needs a periodicity
/// certificate.
struct XtildeReport {
  struct PointStatus {
    std::string label;
    Rational value;
    TriState status = TriState::unknown_at_horizon;
    std::optional<long> refuted_step;
  };
  std::vector<PointStatus> points;
  TriState overall = TriState::unknown_at_horizon;
  long horizon = 0;
};

XtildeReport check_d_in_xtilde(const MapSpec& spec, long horizon);

}  // namespace pcim
