#pragma once

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phh/equilibrium.hpp"
#include "phh/horseshoe.hpp"
#include "phh/ifs.hpp"
#include "phh/transfer.hpp"
#include "phh/words.hpp"

namespace phh {

// Named self-checks driven by the library's invariants; the CLI `verify`
// command prints one line per check and fails the run on the first breakage.

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass;
  double measured;
  std::string detail;
};

namespace detail {

inline void add_check(std::vector<CheckResult>& out, const std::string& suite,
                      const std::string& name, bool pass, double measured,
                      const std::string& detail_str = "") {
  out.push_back({suite, name, pass, measured, detail_str});
}

inline Word random_admissible_word(std::mt19937& rng, int len,
                                   bool start_with_one = false) {
  Word w;
  std::uniform_int_distribution<int> bit(0, 1);
  while (static_cast<int>(w.size()) < len) {
    if (w.empty() && start_with_one) {
      w.push_back('1');
      continue;
    }
    if (!w.empty() && w.back() == '1') {
      w.push_back('0');
      continue;
    }
    w.push_back(bit(rng) ? '1' : '0');
  }
  return w;
}

}  // namespace detail

inline std::vector<CheckResult> verify_map(const Params& params) {
  std::vector<CheckResult> out;
  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double y = unit(rng);
    for (long n : {0L, 1L, 3L, 7L})
      for (long m : {0L, 1L, 2L, 5L})
        worst = std::max(
            worst, std::fabs(f_iter(y, n + m) - f_iter(f_iter(y, n), m)));
  }
  detail::add_check(out, "map", "f_iter semigroup f^(n+m)=f^m o f^n",
                    worst <= 1e-12, worst);

  worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double y = 0.999 * unit(rng) + 0.001;
    const long n = 1 + (i % 30);
    double chain = 0.0;
    double z = y;
    for (long j = 0; j < n; ++j) {
      chain += log_df_iter(z, 1);
      z = f_iter(z, 1);
    }
    const double direct = log_df_iter(y, n);
    worst = std::max(worst, std::fabs(chain - direct) /
                                std::max(1.0, std::fabs(direct)));
  }
  detail::add_check(out, "map", "df_iter matches chain-rule product",
                    worst <= 1e-10, worst);

  worst = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double y = i / 20.0;
    const double h = 1e-6;
    for (long n : {1L, 2L, 5L}) {
      const double fd = (f_iter(std::min(1.0, y + h), n) -
                         f_iter(std::max(0.0, y - h), n)) /
                        (std::min(1.0, y + h) - std::max(0.0, y - h));
      const double an = df_iter(y, n);
      worst = std::max(worst, std::fabs(fd - an) / an);
    }
  }
  detail::add_check(out, "map", "df_iter matches central finite differences",
                    worst <= 1e-6, worst);

  const double b1 = std::fabs(df_iter(1.0, 1) - std::exp(-1.0));
  const double b2 = std::fabs(df_iter(0.0, 1, true) - std::exp(1.0));
  detail::add_check(out, "map", "boundary derivatives f'(1)=1/e, f'(0)=e",
                    std::max(b1, b2) <= 1e-12, std::max(b1, b2));

  bool mono = true;
  double prev = df_iter(1e-12, 1);
  for (int i = 1; i <= 10000; ++i) {
    const double y = static_cast<double>(i) / 10000.0;
    const double d = df_iter(y, 1);
    if (!(d < prev)) {
      mono = false;
      break;
    }
    prev = d;
  }
  detail::add_check(out, "map", "f' strictly decreasing on (0,1]", mono,
                    mono ? 1.0 : 0.0);

  bool incr = true;
  for (long n : {1L, 2L, 5L, 17L}) {
    double last = f_iter(0.0, n);
    for (int i = 1; i <= 2000; ++i) {
      const double v = f_iter(static_cast<double>(i) / 2000.0, n);
      if (!(v > last)) {
        incr = false;
        break;
      }
      last = v;
    }
  }
  detail::add_check(out, "map", "f^n strictly increasing on [0,1]", incr,
                    incr ? 1.0 : 0.0);

  const StepResult q = apply_F(kFixedQ, params);
  const StepResult pp = apply_F(kFixedP, params);
  const bool fixed_exact =
      !q.escaped && !pp.escaped && q.image.xs == 0.0 && q.image.xc == 0.0 &&
      q.image.xu == 0.0 && pp.image.xs == 0.0 && pp.image.xc == 1.0 &&
      pp.image.xu == 0.0;
  detail::add_check(out, "map", "P and Q are exact fixed points", fixed_exact,
                    fixed_exact ? 0.0 : 1.0);

  const StepResult gap = apply_F({0.0, 0.0, 0.5}, params);
  detail::add_check(out, "map", "gap starts escape with reason gap_z",
                    gap.escaped && gap.reason == EscapeReason::gap_z,
                    gap.escaped ? 0.0 : 1.0);

  bool all_admissible = true;
  double skew_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Point3 p{unit(rng), unit(rng), unit(rng)};
    const OrbitRecord rec = orbit(p, params, 60);
    if (!is_admissible(rec.itinerary)) {
      all_admissible = false;
      break;
    }
    if (!rec.itinerary.empty())
      skew_err = std::max(
          skew_err, std::fabs(rec.points.back().xc -
                              compose_phi(rec.itinerary, p.xc, params)));
  }
  detail::add_check(out, "map", "itineraries never contain \"11\"",
                    all_admissible, all_admissible ? 1.0 : 0.0);
  detail::add_check(out, "map",
                    "central coordinates follow the itinerary-driven maps",
                    skew_err <= 1e-12, skew_err);
  return out;
}

inline std::vector<CheckResult> verify_contraction(const Params& params) {
  std::vector<CheckResult> out;
  std::mt19937 rng(911u);

  // dual route for the derivative on block-pattern words
  double worst = 0.0;
  for (int len = 1; len <= 12; ++len) {
    for (const Word& w : enumerate_words(len)) {
      if (w.back() != '1') continue;
      for (int g = 1; g <= 40; ++g) {
        const double y = static_cast<double>(g) / 41.0;
        const double a = std::fabs(dphi_chain(w, y, params));
        const double b = dphi_product(w, y, params);
        worst = std::max(worst, std::fabs(a - b) / std::max(a, 1e-300));
      }
    }
  }
  detail::add_check(out, "contraction", "|dphi_chain| = dphi_product",
                    worst <= 1e-10, worst);

  bool sign_ok = true;
  for (int i = 0; i < 200 && sign_ok; ++i) {
    const Word w = detail::random_admissible_word(rng, 1 + i % 14);
    const long ones = std::count(w.begin(), w.end(), '1');
    const double d = dphi_chain(w, 0.37, params);
    sign_ok = (ones % 2 == 0) ? d > 0.0 : d < 0.0;
  }
  detail::add_check(out, "contraction", "sign of Phi' is (-1)^{#1s}", sign_ok,
                    sign_ok ? 1.0 : 0.0);

  double nest_err = 0.0;
  bool nested = true;
  for (int i = 0; i < 300; ++i) {
    Word p = detail::random_admissible_word(rng, 1 + i % 18);
    for (char s : {'0', '1'}) {
      if (!is_admissible(p + s)) continue;
      const CentralInterval parent = fiber_enclosure(p, params);
      const CentralInterval child = fiber_enclosure(p + s, params);
      double blo, bhi;
      if (s == '0') {
        blo = f_iter(parent.lo, 1);
        bhi = f_iter(parent.hi, 1);
      } else {
        blo = apply_f1(parent.hi, params);
        bhi = apply_f1(parent.lo, params);
      }
      nest_err = std::max(nest_err, std::fabs(child.lo - blo));
      nest_err = std::max(nest_err, std::fabs(child.hi - bhi));
      nested = nested && child.lo >= 0.0 && child.hi <= 1.0;
    }
  }
  detail::add_check(out, "contraction", "fiber nesting = branch image",
                    nested && nest_err <= 1e-14, nest_err);

  bool certs_ok = true;
  double cert_slack = -1e308;
  for (const Word& base : {Word("10"), Word("100"), Word("1000"),
                           Word("1001001"), Word("10100"), Word("1010010")}) {
    Word w;
    while (w.size() < 60) w += base;
    if (!is_admissible(w)) continue;
    const ContractionCertificate c = contraction_certificate(w, params, 1000);
    certs_ok = certs_ok && c.bound_verified && c.rate_a < 1.0;
    cert_slack = std::max(cert_slack, c.max_slack);
  }
  detail::add_check(out, "contraction", "certificate bounds hold on grids",
                    certs_ok, cert_slack);

  Word w10;
  for (int i = 0; i < 30; ++i) w10 += "10";
  const GeometricRate gr = geometric_rate(w10, "101", params, 1000);
  detail::add_check(out, "contraction", "geometric decay C*a^j at markers",
                    gr.bound_verified && gr.a < 1.0, gr.max_slack);

  // fiber collapse within the predicted number of markers
  const ContractionCertificate c10 = contraction_certificate(w10, params, 200);
  const long j_pred = static_cast<long>(
      std::ceil((std::log(1e-12) - c10.log_C) / std::log(gr.a)));
  Word wlong;
  for (long i = 0; i < j_pred + 2; ++i) wlong += "10";
  const CentralInterval fib = fiber_enclosure(wlong, params);
  detail::add_check(out, "contraction", "fiber diameter < 1e-12 as predicted",
                    fib.diameter() < 1e-12, fib.diameter());

  bool a_incr = true;
  double last_a = 0.0;
  for (int k = 1; k <= 10; ++k) {
    Word block = "1" + Word(k, '0') + "1";
    Word host = block;
    host += Word(1, '0') + block;  // ensure >= 2 ones and an occurrence
    const GeometricRate g = geometric_rate(host, block, params, 100, 1e-9);
    if (!(g.a > last_a)) a_incr = false;
    last_a = g.a;
  }
  detail::add_check(out, "contraction", "rate a(k) increasing in the gap k",
                    a_incr, last_a);

  bool fac_ok = true;
  double prev_f = 2.0;
  for (int i = 1; i <= 500; ++i) {
    const double v = params.sigma * static_cast<double>(i) / 500.0;
    const double f = contraction_factor(v, params);
    if (!(f < 1.0 && f < prev_f)) {
      fac_ok = false;
      break;
    }
    prev_f = f;
  }
  detail::add_check(out, "contraction",
                    "factor (1-w/sigma)/(1-w) < 1 and decreasing", fac_ok,
                    fac_ok ? 1.0 : 0.0);
  return out;
}

inline std::vector<CheckResult> verify_exponents(const Params& params) {
  std::vector<CheckResult> out;

  const auto z = lyap_of_periodic("0", params);
  const bool zero_ok = z.size() == 2 && z[0] == 1.0 && z[1] == -1.0;
  detail::add_check(out, "exponents", "word 0 gives exponents {+1,-1}", zero_ok,
                    zero_ok ? 0.0 : 1.0);

  double max_lyap = -1e308;
  long checked = 0;
  for (int n = 1; n <= 12; ++n) {
    for (const Word& w : enumerate_periodic(n)) {
      if (w.find('1') == Word::npos) continue;
      max_lyap = std::max(max_lyap, lyap_of_periodic(w, params)[0]);
      ++checked;
    }
  }
  detail::add_check(out, "exponents",
                    "all periodic words (len<=12, with a 1) have exponent < 0",
                    max_lyap < 0.0, max_lyap,
                    std::to_string(checked) + " words");

  bool mult_ok = true;
  for (const Word& w : enumerate_periodic(10)) {
    if (w.find('1') == Word::npos) continue;
    const auto pts = periodic_fixed_point(w, params);
    if (!(std::fabs(pts[0].multiplier) < 1.0)) {
      mult_ok = false;
      break;
    }
  }
  detail::add_check(out, "exponents", "periodic multipliers contract", mult_ok,
                    mult_ok ? 1.0 : 0.0);

  // frequency bound with gap-exact block counting: every 1 closing a gap of
  // exactly l-1 zeros carries a factor <= a(l)
  double worst_gap = -1e308;
  bool freq_ok = true;
  for (int n = 2; n <= 10; ++n) {
    for (const Word& w : enumerate_periodic(n)) {
      if (w.find('1') == Word::npos) continue;
      const double ly = lyap_of_periodic(w, params)[0];
      for (int l = 2; l <= 4; ++l) {
        const Word block = "1" + Word(l - 1, '0') + "1";
        const long cnt = cyclic_occurrences(w, block);
        if (cnt == 0) continue;
        const double gamma =
            static_cast<double>(cnt) / static_cast<double>(w.size());
        detail::YPair fk = detail::f0_pow(detail::ypair(params.sigma),
                                          static_cast<double>(l - 1));
        const double a_l = fk.y / (1.0 - params.sigma * fk.omy);
        const double bound = gamma * std::log(a_l) + 1e-9;
        worst_gap = std::max(worst_gap, ly - bound);
        freq_ok = freq_ok && ly <= bound;
      }
    }
  }
  detail::add_check(out, "exponents", "gap-exact frequency bound", freq_ok,
                    worst_gap);
  return out;
}

inline std::vector<CheckResult> verify_convergence(const Params& params) {
  std::vector<CheckResult> out;

  bool neg = true, decreasing = true;
  double prev_mag = 1e308, last = 0.0;
  for (long n = 10; n <= 200; n += 10) {
    const Word w = "1" + Word(n, '0');
    const double ly = lyap_of_periodic(w, params)[0];
    neg = neg && ly < 0.0;
    const double mag = std::fabs(ly);
    decreasing = decreasing && mag < prev_mag;
    prev_mag = mag;
    last = ly;
  }
  detail::add_check(out, "convergence",
                    "lyap(1 0^n) negative, magnitude decreasing to 0",
                    neg && decreasing, last);

  const EmpiricalStats s200 = empirical_measure_stats(200, 0.05, params);
  const bool frac_ok = s200.fraction_near_Q >= 0.45 &&
                       s200.fraction_near_Q <= 0.55 &&
                       s200.fraction_near_P >= 0.45 &&
                       s200.fraction_near_P <= 0.55;
  detail::add_check(out, "convergence", "n=200 near-Q/near-P fractions ~ 1/2",
                    frac_ok, s200.fraction_near_Q);

  const EmpiricalStats s10 = empirical_measure_stats(10, 0.05, params);
  detail::add_check(out, "convergence", "n=10 fractions sum below 1",
                    s10.fraction_near_Q + s10.fraction_near_P < 1.0,
                    s10.fraction_near_Q + s10.fraction_near_P);

  double worst = 0.0;
  for (long n : {10L, 50L, 200L}) {
    const Word w = "1" + Word(n, '0');
    worst = std::max(worst,
                     std::fabs(empirical_measure_stats(n, 0.05, params).lyap -
                               lyap_of_periodic(w, params)[0]));
  }
  detail::add_check(out, "convergence", "orbit-sum lyap matches multiplier",
                    worst <= 1e-10, worst);
  return out;
}

inline std::vector<CheckResult> verify_pressure(const Params& params,
                                                int depth = 12) {
  std::vector<CheckResult> out;
  const double htop = sft_entropy();

  double worst = 0.0;
  for (int k : {2, 3, 4, 6, 8}) {
    const PressureEnclosure pe = pressure(k, 0.0, params);
    worst = std::max({worst, std::fabs(pe.p_low - htop),
                      std::fabs(pe.p_high - htop)});
  }
  detail::add_check(out, "pressure", "pressure(k,0) equals sft entropy",
                    worst <= 1e-9, worst);

  const TransferMatrix tm = build_transfer(depth, 0.0, params);
  const MarkovEquilibrium mme =
      markov_equilibrium_with(tm, 0.0, WeightSide::midpoint);
  const double phi_gold = (1.0 + std::sqrt(5.0)) / 2.0;
  const double parry_mass1 = 1.0 / (1.0 + phi_gold * phi_gold);
  const double e_err = std::fabs(mme.entropy - htop);
  const double m_err = std::fabs(mme.cylinder_masses.at("1") - parry_mass1);
  detail::add_check(out, "pressure", "t=0 equilibrium reproduces Parry data",
                    e_err <= 1e-6 && m_err <= 1e-6, std::max(e_err, m_err));

  double gibbs = 0.0;
  for (double t : {0.1, 0.3})
    gibbs = std::max(
        gibbs, markov_equilibrium_with(tm, t, WeightSide::midpoint).gibbs_error);
  detail::add_check(out, "pressure", "Gibbs identity h + int(phi) = log lambda",
                    gibbs <= 1e-8, gibbs);

  bool ge_t = true, ordered = true, convex = true;
  std::vector<double> ph;
  for (int i = 0; i < 16; ++i) {
    const double t = 0.6 * static_cast<double>(i) / 15.0;
    const PressureEnclosure pe = pressure_with(tm, t);
    ge_t = ge_t && pe.p_high >= t - 1e-12;
    ordered = ordered && pe.p_low <= pe.p_high + 1e-12 && pe.p_low >= t - 1e-12;
    ph.push_back(pe.p_high);
  }
  for (std::size_t i = 2; i < ph.size(); ++i)
    convex = convex && (ph[i] - 2.0 * ph[i - 1] + ph[i - 2] >= -1e-9);
  detail::add_check(out, "pressure", "p_high >= t and p_low in [t, p_high]",
                    ge_t && ordered, ge_t && ordered ? 1.0 : 0.0);
  detail::add_check(out, "pressure", "p_high convex in t", convex,
                    convex ? 1.0 : 0.0);

  bool width_mono = true;
  for (double t : {0.1, 0.3, 0.5}) {
    double prev_w = 1e308;
    for (int k : {6, 8, 10}) {
      const double w = pressure(k, t, params).width();
      width_mono = width_mono && w <= prev_w + 1e-9;
      prev_w = w;
    }
  }
  detail::add_check(out, "pressure", "enclosure width non-increasing in depth",
                    width_mono, width_mono ? 1.0 : 0.0);

  const PhaseTransitionEstimate root = find_t0(depth, 1e-4, params);
  const MarkovEquilibrium half =
      markov_equilibrium_with(tm, root.t0_low / 2.0, WeightSide::midpoint);
  detail::add_check(out, "pressure",
                    "lyap enclosure strictly negative at t0_low/2",
                    half.lyap_c.hi < 0.0, half.lyap_c.hi);

  const PhaseTransitionEstimate vari = t0_variational(depth, params);
  const bool overlap =
      root.t0_low <= vari.t0_high && vari.t0_low <= root.t0_high;
  std::ostringstream os;
  os << "root=[" << root.t0_low << "," << root.t0_high << "] vari=["
     << vari.t0_low << "," << vari.t0_high << "]";
  detail::add_check(out, "pressure", "t0 brackets from both methods overlap",
                    overlap, root.t0_low, os.str());

  const PressureEnclosure big = pressure_with(tm, 5.0);
  detail::add_check(out, "pressure", "deep in the delta_Q regime p ~ t",
                    big.p_low == 5.0 && big.p_high - 5.0 <= 1e-4,
                    big.p_high - 5.0);

  // stationary vector is invariant under the kernel
  const MarkovEquilibrium eq =
      markov_equilibrium_with(tm, 0.2, WeightSide::midpoint);
  std::vector<double> push(eq.states.size(), 0.0);
  for (std::size_t i = 0; i < eq.states.size(); ++i)
    for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e)
      push[tm.edges[e].to] += eq.stationary[i] * eq.kernel[e];
  double inv_err = 0.0;
  for (std::size_t i = 0; i < push.size(); ++i)
    inv_err = std::max(inv_err, std::fabs(push[i] - eq.stationary[i]));
  detail::add_check(out, "pressure", "stationary vector invariant under kernel",
                    inv_err <= 1e-12, inv_err);
  return out;
}

inline std::vector<CheckResult> verify_suite(const std::string& suite,
                                             const Params& params,
                                             int depth = 12) {
  if (suite == "map") return verify_map(params);
  if (suite == "contraction") return verify_contraction(params);
  if (suite == "exponents") return verify_exponents(params);
  if (suite == "convergence") return verify_convergence(params);
  if (suite == "pressure") return verify_pressure(params, depth);
  if (suite == "full") {
    std::vector<CheckResult> all;
    for (const char* s :
         {"map", "contraction", "exponents", "convergence", "pressure"}) {
      auto part = verify_suite(s, params, depth);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw DomainError("unknown verify suite: " + suite);
}

}  // namespace phh
