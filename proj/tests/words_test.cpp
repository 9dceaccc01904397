#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "phh/words.hpp"

using namespace phh;

TEST_CASE("admissibility") {
  CHECK(is_admissible("0101"));
  CHECK_FALSE(is_admissible("011"));
  CHECK(is_admissible(""));
  CHECK(is_admissible("0"));
  CHECK_FALSE(is_admissible("11"));
}

TEST_CASE("enumeration matches brute force and Fibonacci counts") {
  CHECK(enumerate_words(1) == std::vector<Word>{"0", "1"});
  CHECK(enumerate_words(2) == std::vector<Word>{"00", "01", "10"});
  for (int k = 1; k <= 14; ++k) {
    const auto ours = enumerate_words(k);
    const auto brute = oracle::brute_force_words(k);
    REQUIRE(ours == brute);  // also pins lexicographic order
    CHECK(ours.size() == fibonacci(k + 2));
  }
  CHECK(enumerate_words(10).size() == 144);
  for (int k = 2; k <= 22; ++k)
    CHECK(fibonacci(k + 3) == fibonacci(k + 2) + fibonacci(k + 1));
  CHECK_THROWS_AS(enumerate_words(25), LimitExceeded);
}

TEST_CASE("periodic words") {
  CHECK(enumerate_periodic(1) == std::vector<Word>{"0"});
  CHECK(enumerate_periodic(2) == std::vector<Word>{"00", "01", "10"});
  for (int n = 1; n <= 14; ++n) {
    const auto per = enumerate_periodic(n);
    CHECK(static_cast<long long>(per.size()) == oracle::transition_trace(n));
    // every periodic word appears among the words of the same length
    const auto all = enumerate_words(n);
    for (const auto& w : per)
      CHECK(std::binary_search(all.begin(), all.end(), w));
  }
  CHECK_THROWS_AS(enumerate_periodic(21), LimitExceeded);
}

TEST_CASE("frequency counting") {
  const FrequencyReport none = frequency("000000", "01");
  CHECK(none.count == 0);
  const FrequencyReport r = frequency("010101", "01");
  CHECK(r.count == 3);
  CHECK(r.horizon == 5);
  CHECK_THAT(r.lower_frequency, Catch::Matchers::WithinAbs(0.6, 1e-15));

  Word long_itin;
  for (int i = 0; i < 400; ++i) long_itin += "001";
  const FrequencyReport p = frequency(long_itin, "001");
  CHECK_THAT(p.lower_frequency, Catch::Matchers::WithinAbs(1.0 / 3.0, 2e-3));
}

TEST_CASE("frequency is shift-consistent over concatenated periods") {
  const Word unit = "00101";
  for (int m : {3, 7, 20}) {
    Word it;
    for (int i = 0; i < m; ++i) it += unit;
    const long per_period = cyclic_occurrences(unit, "01");
    const FrequencyReport r = frequency(it, "01");
    CHECK(std::llabs(r.count - per_period * m) <= m);
  }
}

TEST_CASE("factors of admissible words are admissible") {
  for (const Word& w : enumerate_words(9))
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t len = 1; i + len <= w.size(); ++len)
        CHECK(is_admissible(w.substr(i, len)));
}

TEST_CASE("subshift entropy") {
  const double h = sft_entropy();
  CHECK_THAT(h, Catch::Matchers::WithinAbs(0.4812118250596035, 1e-9));
  // growth-rate cross-check: log of the count ratio converges to h
  const double ratio =
      std::log(static_cast<double>(fibonacci(23)) / fibonacci(22));
  CHECK_THAT(ratio, Catch::Matchers::WithinAbs(h, 1e-8));
  // admissibility matters: strictly below log 2, above log(2)/2
  CHECK(h < std::log(2.0));
  CHECK(h > std::log(2.0) / 2.0);
}
