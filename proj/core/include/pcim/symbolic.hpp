#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcim {

/// Finite symbol sequence over {1..N}: the pieces visited by an orbit, in
/// order. A word ends early when the orbit lands exactly on a boundary.
struct ItineraryWord {
  std::vector<int> symbols;

  ItineraryWord() = default;
  explicit ItineraryWord(std::vector<int> s) : symbols(std::move(s)) {}
  ItineraryWord(std::initializer_list<int> s) : symbols(s) {}

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  int operator[](std::size_t k) const { return symbols[k]; }

  ItineraryWord sub(std::size_t start, std::size_t len) const;
  ItineraryWord rotated(std::size_t shift) const;

  /// Symbols joined by '.', e.g. "1.2.1".
  std::string str() const;

  friend bool operator==(const ItineraryWord&, const ItineraryWord&) = default;
  friend auto operator<=>(const ItineraryWord& a, const ItineraryWord& b) { return a.symbols <=> b.symbols; }
};

enum class ComplexityClass {
  eventually_constant,
  affine_consistent,
  sturmian_consistent,
  inconclusive,
};

const char* to_string(ComplexityClass c);

/// Word-complexity profile p(1..n_max) of a finite word, with a finite-evidence
/// classification. Constancy and affine growth are only ever *witnessed* over a
/// confirmation window; a finite word cannot prove them.
struct ComplexityProfile {
  std::vector<std::uint64_t> values;  // values[n-1] = p(n)
  ComplexityClass classification = ComplexityClass::inconclusive;
  std::optional<std::uint64_t> stable_value;  // set when eventually_constant
  std::optional<std::uint64_t> growth_rate;   // set when affine/sturmian consistent
  int window = 0;

  std::uint64_t p(int n) const { return values.at(static_cast<std::size_t>(n) - 1); }
  int n_max() const { return static_cast<int>(values.size()); }
};

/// p(n) = number of distinct length-n factors, n = 1..n_max.
/// Requires word length >= n_max + window (throws WordTooShort otherwise).
ComplexityProfile complexity(const ItineraryWord& word, int n_max, int window = 8);

/// Evidence-level Morse–Hedlund bound: a profile that stabilized at value C
/// over its full window yields "eventual period <= C". Not a certificate.
std::optional<std::uint64_t> morse_hedlund_certify(const ComplexityProfile& profile);

/// Smallest p with s[i] == s[i+p] for the whole span (the word's period).
std::size_t smallest_period(const std::vector<int>& symbols, std::size_t begin, std::size_t end);

}  // namespace pcim
