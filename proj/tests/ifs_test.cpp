#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "phh/ifs.hpp"

using namespace phh;

namespace {

const Params kP = kDefaultParams;

// independent fixed-point oracle: sign scan of Phi(y)-y plus bisection,
// built on the plain-double composition
double bisect_fixed_point(const Word& w, double sigma) {
  auto h = [&](double y) { return oracle::phi_plain(w, y, sigma) - y; };
  double lo = 0.0, hi = 1.0;
  // locate a sign change on a scan grid (unique interior fixed point)
  const int grid = 4096;
  double prev_y = 0.0, prev_h = h(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double y = static_cast<double>(i) / grid;
    const double hy = h(y);
    if ((prev_h > 0.0) != (hy > 0.0)) {
      lo = prev_y;
      hi = y;
      break;
    }
    prev_y = y;
    prev_h = hy;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("branch maps") {
  CHECK(apply_f1(1.0, kP) == 0.0);
  CHECK(apply_f1(0.0, kP) == kP.sigma);
  CHECK_THAT(apply_f1(0.5, kP), Catch::Matchers::WithinAbs(0.125, 1e-15));
  CHECK(apply_f0(0.0, kP) == 0.0);
}

TEST_CASE("compositions apply the oldest symbol first") {
  CHECK(compose_phi("", 0.37, kP) == 0.37);
  CHECK_THAT(compose_phi("1", 0.5, kP), Catch::Matchers::WithinAbs(0.125, 1e-15));
  const double expect = 0.125 / (0.125 + 0.875 * std::exp(-1.0));  // f(0.125)
  CHECK_THAT(compose_phi("10", 0.5, kP),
             Catch::Matchers::WithinAbs(expect, 1e-15));
  CHECK_THAT(expect, Catch::Matchers::WithinAbs(0.2796, 2e-4));
}

TEST_CASE("chain-rule derivative") {
  CHECK(dphi_chain("", 0.4, kP) == 1.0);
  for (double y : {0.1, 0.5, 0.9})
    CHECK_THAT(dphi_chain("1", y, kP),
               Catch::Matchers::WithinAbs(-kP.sigma, 1e-15));
  for (long n : {1L, 3L, 8L}) {
    const Word zeros(n, '0');
    CHECK_THAT(dphi_chain(zeros, 0.3, kP),
               Catch::Matchers::WithinRel(df_iter(0.3, n), 1e-12));
  }
  // sign is (-1)^{#1s}
  CHECK(dphi_chain("10", 0.3, kP) < 0.0);
  CHECK(dphi_chain("1010", 0.3, kP) > 0.0);
}

TEST_CASE("product formula equals the chain rule") {
  const double a = std::fabs(dphi_chain("01", 0.5, kP));
  CHECK_THAT(dphi_product("01", 0.5, kP), Catch::Matchers::WithinRel(a, 1e-12));

  std::mt19937 rng(5u);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  double worst = 0.0;
  for (int len = 1; len <= 16; ++len) {
    const auto words = enumerate_words(len);
    for (std::size_t wi = 0; wi < words.size(); wi += 7) {  // sample
      const Word& w = words[wi];
      if (w.back() != '1') continue;
      for (int rep = 0; rep < 10; ++rep) {
        const double y = unit(rng);
        const double c = std::fabs(dphi_chain(w, y, kP));
        const double p = dphi_product(w, y, kP);
        worst = std::max(worst, std::fabs(c - p) / c);
      }
    }
  }
  CHECK(worst <= 1e-10);

  CHECK_THROWS_AS(dphi_product("10", 0.5, kP), PatternError);
  CHECK_THROWS_AS(dphi_product("01", 0.0, kP), DomainError);
  CHECK_THROWS_AS(dphi_product("01", 1.0, kP), DomainError);
}

TEST_CASE("contraction factor") {
  double prev = 2.0;
  for (int i = 1; i <= 100; ++i) {
    const double w = kP.sigma * i / 100.0;
    const double g = contraction_factor(w, kP);
    CHECK(g < 1.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("fiber enclosures") {
  const CentralInterval full = fiber_enclosure("", kP);
  CHECK(full.lo == 0.0);
  CHECK(full.hi == 1.0);
  const CentralInterval one = fiber_enclosure("1", kP);
  CHECK(one.lo == 0.0);
  CHECK(one.hi == kP.sigma);

  // nesting: child equals the branch image of the parent
  std::mt19937 rng(17u);
  std::uniform_int_distribution<int> bit(0, 1);
  Word p;
  for (int i = 0; i < 40; ++i) {
    const char s = (p.size() && p.back() == '1') ? '0' : (bit(rng) ? '1' : '0');
    const CentralInterval parent = fiber_enclosure(p, kP);
    const CentralInterval child = fiber_enclosure(p + s, kP);
    double blo, bhi;
    if (s == '0') {
      blo = f_iter(parent.lo, 1);
      bhi = f_iter(parent.hi, 1);
    } else {
      blo = apply_f1(parent.hi, kP);
      bhi = apply_f1(parent.lo, kP);
    }
    CHECK(std::fabs(child.lo - blo) <= 1e-14);
    CHECK(std::fabs(child.hi - bhi) <= 1e-14);
    CHECK(child.lo >= 0.0);
    CHECK(child.hi <= 1.0);
    p += s;
  }
}

TEST_CASE("certificate for periodic words has constant deltas") {
  Word w;
  for (int i = 0; i < 5; ++i) w += "10";
  const ContractionCertificate c = contraction_certificate(w, kP, 1000);
  REQUIRE(c.deltas.size() == 3);  // five 1s: two in the prefix
  for (double d : c.deltas) {
    CHECK_THAT(d, Catch::Matchers::WithinAbs(c.deltas[0], 1e-15));
    CHECK(d > 0.0);
    CHECK(d <= kP.sigma);
  }
  CHECK(c.rate_a < 1.0);
  CHECK(c.bound_verified);
  CHECK(c.grid_points == 1000);
}

TEST_CASE("certificate bound holds for an aperiodic word") {
  const ContractionCertificate c = contraction_certificate("1001001", kP, 1000);
  CHECK(c.bound_verified);
  CHECK(c.C > 0.0);
}

TEST_CASE("C depends only on the prefix up to the second 1") {
  const ContractionCertificate a = contraction_certificate("1001001", kP, 500);
  const ContractionCertificate b = contraction_certificate("1001010010", kP, 500);
  CHECK(a.C == b.C);  // shared prefix "1001"
}

TEST_CASE("pattern errors") {
  CHECK_THROWS_AS(contraction_certificate("0101", kP), PatternError);
  CHECK_THROWS_AS(contraction_certificate("1000", kP), PatternError);
  CHECK_THROWS_AS(geometric_rate("101010", "11", kP), PatternError);
  CHECK_THROWS_AS(geometric_rate("101010", "1001", kP), PatternError);
}

TEST_CASE("geometric rate of the 101 block") {
  Word w;
  for (int i = 0; i < 20; ++i) w += "10";
  const GeometricRate g = geometric_rate(w, "101", kP, 1000);
  // delta = f1(f0(sigma)) = sigma (1 - f(sigma))
  const double fs = oracle::f_plain(kP.sigma);
  const double delta = kP.sigma * (1.0 - fs);
  CHECK_THAT(g.delta, Catch::Matchers::WithinRel(delta, 1e-13));
  CHECK_THAT(g.a, Catch::Matchers::WithinRel(
                      (1.0 - delta / kP.sigma) / (1.0 - delta), 1e-13));
  CHECK(g.a < 1.0);
  CHECK(g.bound_verified);
  // markers sit just past each occurrence
  REQUIRE_FALSE(g.marker_times.empty());
  CHECK(g.marker_times.front() == 3);
  CHECK(g.marker_times[1] == 5);
}

TEST_CASE("longer gaps weaken the rate") {
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const Word block = "1" + Word(k, '0') + "1";
    const Word host = block + "0" + block;
    const GeometricRate g = geometric_rate(host, block, kP, 200, 1e-9);
    CHECK(g.a > prev);
    prev = g.a;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("geometric decay of derivatives along (100)^10") {
  Word w;
  for (int i = 0; i < 10; ++i) w += "100";
  const GeometricRate g = geometric_rate(w, "1001", kP, 1000);
  CHECK(g.bound_verified);
}

TEST_CASE("fiber diameters collapse at the certified rate") {
  Word w;
  for (int i = 0; i < 12; ++i) w += "10";
  const GeometricRate g = geometric_rate(w, "101", kP, 200);
  const ContractionCertificate c = contraction_certificate(w, kP, 200);
  for (std::size_t j = 0; j < g.marker_times.size(); ++j) {
    const Word prefix = w.substr(0, g.marker_times[j]);
    const double diam = fiber_enclosure(prefix, kP).diameter();
    CHECK(std::log(diam) <= c.log_C + static_cast<double>(j) * std::log(g.a) +
                                1e-9);
  }
  // collapse below 1e-12 within the predicted number of markers
  const long j_pred =
      static_cast<long>(std::ceil((std::log(1e-12) - c.log_C) / std::log(g.a)));
  Word wlong;
  for (long i = 0; i < j_pred + 2; ++i) wlong += "10";
  CHECK(fiber_enclosure(wlong, kP).diameter() < 1e-12);
}

TEST_CASE("periodic fixed points") {
  const auto zero = periodic_fixed_point("0", kP);
  REQUIRE(zero.size() == 2);
  CHECK(zero[0].y == 0.0);
  CHECK_THAT(zero[0].multiplier, Catch::Matchers::WithinRel(std::exp(1.0), 1e-14));
  CHECK(zero[1].y == 1.0);
  CHECK_THAT(zero[1].multiplier, Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));

  for (const Word& w : {Word("10"), Word("100"), Word("10010")}) {
    const auto pts = periodic_fixed_point(w, kP);
    REQUIRE(pts.size() == 1);
    const double y_oracle = bisect_fixed_point(w, kP.sigma);
    CHECK_THAT(pts[0].y, Catch::Matchers::WithinAbs(y_oracle, 1e-9));
    CHECK(std::fabs(pts[0].multiplier) < 1.0);
    // fixed point property under the library composition
    CHECK_THAT(compose_phi(w, pts[0].y, kP),
               Catch::Matchers::WithinAbs(pts[0].y, 1e-12));
    // multiplier against the plain-double chain rule
    CHECK_THAT(pts[0].multiplier,
               Catch::Matchers::WithinRel(
                   oracle::dphi_plain(w, pts[0].y, kP.sigma), 1e-9));
  }

  CHECK_THROWS_AS(periodic_fixed_point("1", kP), NonAdmissible);
  CHECK_THROWS_AS(periodic_fixed_point("101", kP), NonAdmissible);
}

TEST_CASE("single-1 long words match the closed-form orbit") {
  for (long n : {50L, 120L, 200L}) {
    const Word w = "1" + Word(n, '0');
    const auto pts = periodic_fixed_point(w, kP);
    const auto orc = oracle::single_one_orbit(n, kP.sigma);
    CHECK_THAT(pts[0].log_abs_multiplier,
               Catch::Matchers::WithinRel(
                   std::log1p(-orc.d) - std::log1p(-kP.sigma * orc.d), 1e-6));
    CHECK(pts[0].log_abs_multiplier < 0.0);
  }
}

TEST_CASE("reconstruction boxes") {
  const Word zeros(6, '0');
  const Box3 box = reconstruct_point(zeros, zeros, kP);
  CHECK(box.xs.lo == 0.0);
  CHECK_THAT(box.xs.hi, Catch::Matchers::WithinRel(std::pow(kP.lambda0, 6), 1e-12));
  CHECK(box.xc.lo == 0.0);
  CHECK(box.xc.hi == 1.0);  // the central segment from Q to P
  CHECK(box.xu.lo == 0.0);
  CHECK_THAT(box.xu.hi, Catch::Matchers::WithinRel(std::pow(kP.beta0, -6.0), 1e-12));

  const Box3 after1 = reconstruct_point("01", "0", kP);
  CHECK(after1.xc.diameter() <= kP.sigma);

  // the (10)-periodic window closes in on the period-2 point
  const auto p2 = periodic_fixed_point("10", kP);
  Word past, future;
  for (int i = 0; i < 12; ++i) {
    past += "10";
    future += "10";
  }
  const Box3 per = reconstruct_point(past, future, kP);
  CHECK(per.xc.diameter() < 1e-4);
  CHECK(per.xc.lo - 1e-12 <= p2[0].y);
  CHECK(p2[0].y <= per.xc.hi + 1e-12);

  CHECK_THROWS_AS(reconstruct_point("01", "10", kP), NonAdmissible);
}
