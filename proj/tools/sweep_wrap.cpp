// Oracle sweep for a two-piece wrap map whose itinerary shows Sturmian-type
// complexity at a long horizon.
//
// For x -> lambda*x + mu  mod 1 the attractor orbit satisfies
//   x_{n+1} = lambda*x_n + mu - s_n,  s_n = 1 on a wrap step,
// so on a bounded bi-infinite orbit  lambda*x_n + mu = mu/(1-lambda) - G_n
// with G_n = sum_{j>=1} lambda^j s_{n-j}, and the coding is consistent iff
//   sup{ G_n : s_n = 1 } <= mu/(1-lambda) - 1 < inf{ G_n : s_n = 0 }.
// Feeding the golden-ratio coding s_n = floor((n+1)t) - floor(nt),
// t = (sqrt(5)-1)/2, and picking mu inside that gap pins the rotation number
// between consecutive deep Fibonacci convergents: every admissible period
// exceeds what a 1e5-step scan can call periodic, while the itinerary stays
// Sturmian-consistent. The candidate is then verified exactly and frozen.

#include <fstream>
#include <iostream>
#include <string>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "pcim/decomposition.hpp"
#include "pcim/map_io.hpp"
#include "pcim/orbit.hpp"
#include "pcim/recurrence.hpp"
#include "pcim/symbolic.hpp"

using namespace pcim;

namespace {

// floor(n * (sqrt(5)-1)/2) by integer square root; valid for negative n.
long floor_ntau(long n) {
  mpz_class five_n2 = mpz_class(n) * n * 5;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), five_n2.get_mpz_t());
  mpz_class floor_sqrt5n = n >= 0 ? root : -root - 1;  // floor(n*sqrt(5)), irrational for n != 0
  mpz_class diff = floor_sqrt5n - n;
  mpz_class q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), diff.get_mpz_t(), 1);
  return q.get_si();
}

int golden_symbol(long n) { return static_cast<int>(floor_ntau(n + 1) - floor_ntau(n)); }

RawMapSpec wrap_map(const Rational& lambda, const Rational& mu) {
  RawMapSpec raw;
  Rational c = (Rational(1) - mu) / lambda;
  raw.endpoints = {Rational(0), c, Rational(1)};
  raw.branches = {{lambda, mu}, {lambda, mu - Rational(1)}};
  return raw;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_path = argc > 1 ? argv[1] : "sturmian_wrap.json";
  const long horizon = 100000;
  const int n_max = 30;
  const Rational lambda(9, 10);

  const long warmup = 160000;   // decay of the truncated memory: lambda^warmup
  const long window = 77000;    // just past the Fibonacci number 75025
  const mp_bitcnt_t prec = 16384;

  mpf_class lam(0, prec);
  lam = 9;
  lam /= 10;
  mpf_class g(0, prec);
  mpf_class sup_one(-1, prec), inf_zero(100, prec);
  for (long n = -warmup; n <= window; ++n) {
    int s = golden_symbol(n);
    if (n >= 0) {
      if (s == 1) {
        if (g > sup_one) sup_one = g;
      } else {
        if (g < inf_zero) inf_zero = g;
      }
    }
    g = lam * (g + s);
  }
  mpf_class gap(0, prec);
  gap = inf_zero - sup_one;
  if (gap <= 0) {
    std::cerr << "empty admissibility gap; construction failed\n";
    return 1;
  }
  long exp2;
  double mant = mpf_get_d_2exp(&exp2, gap.get_mpf_t());
  std::cerr << "admissibility gap ~ " << mant << " * 2^" << exp2 << "\n";

  // Dyadic midpoint of the gap, a bit finer than the gap itself.
  const long bits = -exp2 + 64;
  mpf_class mid(0, prec);
  mid = sup_one + gap / 2;
  mpf_class scaled(0, prec);
  mpf_mul_2exp(scaled.get_mpf_t(), mid.get_mpf_t(), static_cast<mp_bitcnt_t>(bits));
  mpz_class numer;
  mpz_set_f(numer.get_mpz_t(), scaled.get_mpf_t());
  mpz_class denom = 1;
  denom <<= static_cast<mp_bitcnt_t>(bits);
  Rational t_mid{numer, denom};

  Rational mu = (Rational(1) - lambda) * (Rational(1) + t_mid);
  std::cerr << "candidate mu with denominator of " << mu.den().get_str().size() << " digits (~" << mu.to_double()
            << ")\n";

  MapSpec spec = MapSpec::validate(wrap_map(lambda, mu));
  BoundaryData bd = boundary_data(spec);

  const Rational& d0 = bd.d0;
  std::cerr << "exact itinerary of d0 over " << horizon << " steps...\n";
  ItineraryWord word;
  auto end = detail::stream_orbit(spec, d0, horizon, [&](long step, const Rational&, int piece) {
    if (piece != 0 && step < horizon) word.symbols.push_back(piece);
    return true;
  });
  if (end.hit_delta_at) {
    std::cerr << "orbit hits the boundary set at step " << *end.hit_delta_at << "; rejecting candidate\n";
    return 1;
  }

  ComplexityProfile profile = complexity(word, n_max, 8);
  bool sturmian = profile.classification == ComplexityClass::sturmian_consistent;
  std::cerr << "complexity classification: " << to_string(profile.classification) << "\n";

  std::cerr << "periodicity scan...\n";
  auto detect = detect_eventual_periodicity_ex(spec, d0, horizon);
  bool no_cert = !detect.cert.has_value();
  std::cerr << (no_cert ? "no certificate (good)\n" : "certified periodic (bad)\n");

  DetectionConfig cfg = default_detection_config(spec, horizon);
  LrRecurrenceReport rep = detect_lr(spec, d0, cfg, "d0");
  bool lr = rep.lr_at_finest(1);
  std::cerr << "c1 lr-witnessed at finest epsilon: " << (lr ? "yes" : "no") << "\n";

  if (!sturmian || !no_cert || !lr) {
    std::cerr << "candidate failed exact verification\n";
    return 1;
  }

  nlohmann::ordered_json doc;
  doc["lambda"] = lambda.str();
  doc["mu"] = mu.str();
  doc["boundary"] = spec.endpoint(1).str();
  doc["horizon"] = horizon;
  doc["n_max"] = n_max;
  doc["p_values"] = profile.values;
  doc["classification"] = to_string(profile.classification);
  doc["map"] = map_spec_to_json(spec.raw());
  std::ofstream out(out_path);
  out << doc.dump(2) << "\n";
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}
