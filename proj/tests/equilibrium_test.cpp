#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "phh/equilibrium.hpp"

using namespace phh;

namespace {
const Params kP = kDefaultParams;
}

TEST_CASE("t=0 equilibrium is the Parry measure") {
  const oracle::ParryData parry = oracle::parry_closed_form();
  const MarkovEquilibrium eq =
      markov_equilibrium(10, 0.0, WeightSide::midpoint, kP);
  CHECK_THAT(eq.entropy, Catch::Matchers::WithinAbs(parry.entropy, 1e-8));
  CHECK_THAT(eq.cylinder_masses.at("1"),
             Catch::Matchers::WithinAbs(parry.mass1, 1e-6));
  // the two 1-step masses partition the space
  CHECK_THAT(eq.cylinder_masses.at("0") + eq.cylinder_masses.at("1"),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(eq.gibbs_error <= 1e-8);
}

TEST_CASE("kernel is stochastic and the stationary vector is invariant") {
  const TransferMatrix tm = build_transfer(8, 0.0, kP);
  const MarkovEquilibrium eq =
      markov_equilibrium_with(tm, 0.25, WeightSide::midpoint);
  double total = 0.0;
  for (double s : eq.stationary) {
    CHECK(s >= 0.0);
    total += s;
  }
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));

  std::vector<double> push(eq.states.size(), 0.0);
  for (std::size_t i = 0; i < eq.states.size(); ++i) {
    double row = 0.0;
    for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e) {
      row += eq.kernel[e];
      push[tm.edges[e].to] += eq.stationary[i] * eq.kernel[e];
    }
    CHECK_THAT(row, Catch::Matchers::WithinAbs(1.0, 1e-14));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < push.size(); ++i)
    worst = std::max(worst, std::fabs(push[i] - eq.stationary[i]));
  CHECK(worst <= 1e-12);
  CHECK(eq.gibbs_error <= 1e-8);
}

TEST_CASE("below the transition the exponent enclosure is negative") {
  const MarkovEquilibrium eq =
      markov_equilibrium(12, 0.15, WeightSide::midpoint, kP);
  CHECK(eq.lyap_c.hi < 0.0);
  CHECK(eq.lyap_c.lo <= eq.lyap_c.hi);
}

TEST_CASE("lyapunov exponents of periodic measures") {
  const auto both = lyap_of_periodic("0", kP);
  REQUIRE(both.size() == 2);
  CHECK(both[0] == 1.0);
  CHECK(both[1] == -1.0);

  // exhaustive negativity at small lengths
  for (int n = 1; n <= 10; ++n)
    for (const Word& w : enumerate_periodic(n)) {
      if (w.find('1') == Word::npos) continue;
      CHECK(lyap_of_periodic(w, kP)[0] < 0.0);
    }

  CHECK_THROWS_AS(lyap_of_periodic("101", kP), NonAdmissible);
}

TEST_CASE("exponent is invariant under rotation of the word") {
  for (const Word& w : {Word("100"), Word("10010"), Word("1000100")}) {
    const double base = lyap_of_periodic(w, kP)[0];
    for (std::size_t r = 1; r < w.size(); ++r) {
      const Word rot = w.substr(r) + w.substr(0, r);
      if (!is_cyclically_admissible(rot)) continue;
      CHECK_THAT(lyap_of_periodic(rot, kP)[0],
                 Catch::Matchers::WithinAbs(base, 1e-12));
    }
  }
}

TEST_CASE("the 1 0^n family approaches zero from below") {
  double prev = -1e300;
  for (long n = 10; n <= 200; n += 10) {
    const Word w = "1" + Word(n, '0');
    const double ly = lyap_of_periodic(w, kP)[0];
    const double expect = oracle::single_one_orbit(n, kP.sigma).lyap;
    CHECK(ly < 0.0);
    CHECK(ly > prev);  // magnitudes shrink toward zero
    CHECK_THAT(ly, Catch::Matchers::WithinRel(expect, 1e-6));
    prev = ly;
  }
}

TEST_CASE("empirical statistics of the 1 0^n orbits") {
  const EmpiricalStats s = empirical_measure_stats(200, 0.05, kP);
  CHECK(s.fraction_near_Q >= 0.45);
  CHECK(s.fraction_near_Q <= 0.55);
  CHECK(s.fraction_near_P >= 0.45);
  CHECK(s.fraction_near_P <= 0.55);

  const EmpiricalStats s10 = empirical_measure_stats(10, 0.05, kP);
  CHECK(s10.fraction_near_Q + s10.fraction_near_P < 1.0);

  for (long n : {10L, 50L, 200L}) {
    const Word w = "1" + Word(n, '0');
    const double two_routes = std::fabs(empirical_measure_stats(n, 0.05, kP).lyap -
                                        lyap_of_periodic(w, kP)[0]);
    CHECK(two_routes <= 1e-10);
  }
}

TEST_CASE("find_t0 brackets") {
  const double htop = sft_entropy();
  const PhaseTransitionEstimate est = find_t0(8, 1e-4, kP);
  CHECK(est.t0_low > 0.0);
  CHECK(est.t0_low <= est.t0_high);
  CHECK(est.t0_high <= htop + 1e-4);

  // at t=0 the gap to the diagonal is the entropy itself
  const PressureEnclosure at0 = pressure(8, 0.0, kP);
  CHECK_THAT(at0.p_high - 0.0, Catch::Matchers::WithinAbs(htop, 1e-9));

  // halving the tolerance cannot widen the bracket
  const PhaseTransitionEstimate tight = find_t0(8, 5e-5, kP);
  CHECK(tight.t0_high - tight.t0_low <= est.t0_high - est.t0_low + 1e-9);

  // depth consistency
  const PhaseTransitionEstimate deeper = find_t0(10, 1e-4, kP);
  CHECK(est.t0_low <= deeper.t0_high);
  CHECK(deeper.t0_low <= est.t0_high);
}

TEST_CASE("variational estimate overlaps the pressure-root bracket") {
  const PhaseTransitionEstimate root = find_t0(8, 1e-4, kP);
  const PhaseTransitionEstimate vari = t0_variational(8, kP);
  CHECK(vari.t0_low > 0.0);
  CHECK(vari.t0_low <= vari.t0_high);
  CHECK(root.t0_low <= vari.t0_high);
  CHECK(vari.t0_low <= root.t0_high);
  CHECK(vari.method == PhaseTransitionEstimate::Method::variational_sup);
}
