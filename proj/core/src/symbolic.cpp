#include "pcim/symbolic.hpp"

#include <algorithm>
#include <unordered_set>

#include "pcim/errors.hpp"

namespace pcim {

ItineraryWord ItineraryWord::sub(std::size_t start, std::size_t len) const {
  ItineraryWord w;
  w.symbols.assign(symbols.begin() + static_cast<std::ptrdiff_t>(start),
                   symbols.begin() + static_cast<std::ptrdiff_t>(start + len));
  return w;
}

ItineraryWord ItineraryWord::rotated(std::size_t shift) const {
  if (symbols.empty()) return *this;
  shift %= symbols.size();
  ItineraryWord w = *this;
  std::rotate(w.symbols.begin(), w.symbols.begin() + static_cast<std::ptrdiff_t>(shift), w.symbols.end());
  return w;
}

std::string ItineraryWord::str() const {
  std::string s;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (k) s += '.';
    s += std::to_string(symbols[k]);
  }
  return s;
}

const char* to_string(ComplexityClass c) {
  switch (c) {
    case ComplexityClass::eventually_constant: return "eventually-constant";
    case ComplexityClass::affine_consistent: return "affine-consistent";
    case ComplexityClass::sturmian_consistent: return "sturmian-consistent";
    case ComplexityClass::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct ViewHash {
  std::size_t operator()(std::string_view v) const { return std::hash<std::string_view>{}(v); }
};

}  // namespace

ComplexityProfile complexity(const ItineraryWord& word, int n_max, int window) {
  if (n_max < 1) raise(errc::bad_spec, "complexity: n_max must be >= 1");
  if (window < 2) raise(errc::bad_spec, "complexity: window must be >= 2");
  const std::size_t len = word.size();
  if (len < static_cast<std::size_t>(n_max) + static_cast<std::size_t>(window))
    raise(errc::word_too_short, "complexity: word of length " + std::to_string(len) +
                                    " is too short for n_max=" + std::to_string(n_max) +
                                    " with window=" + std::to_string(window));

  // Factors compared as byte strings; symbols are small so one byte each.
  std::string buf(len, '\0');
  for (std::size_t k = 0; k < len; ++k) buf[k] = static_cast<char>(word.symbols[k] & 0xFF);

  ComplexityProfile profile;
  profile.window = window;
  profile.values.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    std::unordered_set<std::string_view, ViewHash> factors;
    factors.reserve(len);
    const std::size_t count = len - static_cast<std::size_t>(n) + 1;
    for (std::size_t t = 0; t < count; ++t)
      factors.insert(std::string_view(buf).substr(t, static_cast<std::size_t>(n)));
    profile.values.push_back(factors.size());
  }

  const auto& p = profile.values;
  const std::size_t m = p.size();
  auto tail_constant = [&]() {
    if (m < static_cast<std::size_t>(window)) return false;
    for (std::size_t k = m - static_cast<std::size_t>(window); k + 1 < m; ++k)
      if (p[k] != p[k + 1]) return false;
    return true;
  };
  auto all_sturmian = [&]() {
    for (std::size_t k = 0; k < m; ++k)
      if (p[k] != k + 2) return false;
    return true;
  };
  auto tail_affine = [&](std::uint64_t& rate) {
    if (m < static_cast<std::size_t>(window) + 1) return false;
    const std::size_t first = m - 1 - static_cast<std::size_t>(window);
    if (p[first + 1] <= p[first]) return false;
    const std::uint64_t d = p[first + 1] - p[first];
    for (std::size_t k = first + 1; k + 1 < m; ++k) {
      if (p[k + 1] <= p[k] || p[k + 1] - p[k] != d) return false;
    }
    rate = d;
    return true;
  };

  std::uint64_t rate = 0;
  if (tail_constant()) {
    profile.classification = ComplexityClass::eventually_constant;
    profile.stable_value = p.back();
  } else if (all_sturmian()) {
    profile.classification = ComplexityClass::sturmian_consistent;
    profile.growth_rate = 1;
  } else if (tail_affine(rate)) {
    profile.classification = ComplexityClass::affine_consistent;
    profile.growth_rate = rate;
  } else {
    profile.classification = ComplexityClass::inconclusive;
  }
  return profile;
}

std::optional<std::uint64_t> morse_hedlund_certify(const ComplexityProfile& profile) {
  if (profile.classification != ComplexityClass::eventually_constant) return std::nullopt;
  return profile.stable_value;
}

std::size_t smallest_period(const std::vector<int>& symbols, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  if (n == 0) return 0;
  // KMP prefix function; period = n - pi[n-1].
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = pi[i - 1];
    while (j > 0 && symbols[begin + i] != symbols[begin + j]) j = pi[j - 1];
    if (symbols[begin + i] == symbols[begin + j]) ++j;
    pi[i] = j;
  }
  return n - pi[n - 1];
}

}  // namespace pcim
