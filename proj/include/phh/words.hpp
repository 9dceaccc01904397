#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "phh/errors.hpp"

namespace phh {

// Finite symbol strings over {0,1}. A word is admissible iff it contains no
// factor "11" (the induced subshift forbids symbol 1 twice in a row: the
// z-image of R1 is [0, beta1/6], disjoint from R1 since beta1 < 4).
using Word = std::string;

inline constexpr int kMaxEnumerationLength = 24;
inline constexpr int kMaxPeriodicLength = 20;

inline bool is_admissible(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const char c = w[i];
    if (c != '0' && c != '1') return false;
    if (c == '1' && w[i + 1] == '1') return false;
  }
  if (!w.empty()) {
    const char c = w.back();
    if (c != '0' && c != '1') return false;
  }
  return true;
}

// Admissible and still admissible when read cyclically (no "11" across the
// wrap; "1" alone wraps to "11").
inline bool is_cyclically_admissible(const Word& w) {
  if (!is_admissible(w)) return false;
  if (!w.empty() && w.front() == '1' && w.back() == '1') return false;
  return true;
}

inline void require_admissible(const Word& w) {
  if (!is_admissible(w)) throw NonAdmissible("word contains \"11\": " + w);
}

// A cylinder [i_0,...,i_k] named by its admissible block.
struct CylinderSpec {
  Word block;
};

inline std::uint64_t fibonacci(int n) {
  // Fib(1) = Fib(2) = 1
  std::uint64_t a = 1, b = 1;
  if (n <= 2) return 1;
  for (int i = 3; i <= n; ++i) {
    std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return b;
}

// All admissible words of length k in lexicographic order; |result| = Fib(k+2).
inline std::vector<Word> enumerate_words(int k) {
  if (k < 1) throw DomainError("enumerate_words: k must be >= 1");
  if (k > kMaxEnumerationLength)
    throw LimitExceeded("enumerate_words: k > " +
                        std::to_string(kMaxEnumerationLength));
  std::vector<Word> out;
  out.reserve(fibonacci(k + 2));
  Word w;
  w.reserve(k);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == k) {
      out.push_back(w);
      return;
    }
    w.push_back('0');
    self(self);
    w.pop_back();
    if (w.empty() || w.back() != '1') {
      w.push_back('1');
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return out;
}

// Admissible words of length n whose cyclic repetition is admissible.
// The count equals trace([[1,1],[1,0]]^n) (Lucas numbers).
inline std::vector<Word> enumerate_periodic(int n) {
  if (n < 1) throw DomainError("enumerate_periodic: n must be >= 1");
  if (n > kMaxPeriodicLength)
    throw LimitExceeded("enumerate_periodic: n > " +
                        std::to_string(kMaxPeriodicLength));
  std::vector<Word> out;
  for (const Word& w : enumerate_words(n))
    if (is_cyclically_admissible(w)) out.push_back(w);
  return out;
}

// Occurrence count / lower frequency of a block in a finite itinerary window.
struct FrequencyReport {
  long count;
  long horizon;
  double lower_frequency;  // count / horizon
};

// Overlapping occurrences at positions 0 .. |itinerary|-|block|.
inline FrequencyReport frequency(const Word& itinerary, const Word& block) {
  if (block.empty() || itinerary.size() < block.size())
    throw DomainError("frequency: need |itinerary| >= |block| >= 1");
  const long horizon =
      static_cast<long>(itinerary.size() - block.size()) + 1;
  long count = 0;
  for (long i = 0; i < horizon; ++i)
    if (itinerary.compare(i, block.size(), block) == 0) ++count;
  return {count, horizon, static_cast<double>(count) / horizon};
}

// Occurrences in the cyclic word (positions 0 .. |w|-1, wrapping).
inline long cyclic_occurrences(const Word& w, const Word& block) {
  if (w.empty() || block.empty() || block.size() > w.size()) return 0;
  const Word doubled = w + w.substr(0, block.size() - 1);
  long count = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (doubled.compare(i, block.size(), block) == 0) ++count;
  return count;
}

// Topological entropy of the subshift: log of the spectral radius of the
// transition matrix [[1,1],[1,0]], i.e. log((1+sqrt 5)/2).
inline double sft_entropy() { return std::log((1.0 + std::sqrt(5.0)) / 2.0); }

}  // namespace phh
