#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "phh/transfer.hpp"

namespace phh {

// Depth-k Markov equilibria from the Perron eigen-data of a chosen
// representative weight matrix; central exponents of measures; the phase
// transition location by the pressure-root and variational routes.

using Representative = WeightSide;

struct MarkovEquilibrium {
  int depth;
  double t;
  Representative representative;
  double log_eigenvalue;
  std::vector<Word> states;
  std::vector<double> stationary;    // indexed like states
  std::vector<double> kernel;        // aligned with the transfer edges
  double entropy;
  CentralInterval lyap_c;            // central-exponent enclosure
  std::map<Word, double> cylinder_masses;  // words of length 1..min(k,6)
  double gibbs_error;                // |entropy + int(phi_hat) - log lambda|
};

inline MarkovEquilibrium markov_equilibrium_with(const TransferMatrix& tm,
                                                 double t,
                                                 Representative rep) {
  validate_potential(t);
  const long n = static_cast<long>(tm.states.size());
  detail::PerronResult right = detail::perron(tm, t, rep, true);
  detail::PerronResult left = detail::perron(tm, t, rep, false);
  const double lambda = std::exp(right.log_lambda);

  MarkovEquilibrium eq;
  eq.depth = tm.depth;
  eq.t = t;
  eq.representative = rep;
  eq.log_eigenvalue = right.log_lambda;
  eq.states = tm.states;

  // kernel(w,w') = M(w,w') r(w') / (lambda r(w)), rows renormalized exactly
  eq.kernel.assign(tm.edges.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double row = 0.0;
    for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e) {
      const auto& ed = tm.edges[e];
      eq.kernel[e] = std::exp(t * detail::edge_psi(ed, rep)) *
                     right.vec[ed.to] / (lambda * right.vec[i]);
      row += eq.kernel[e];
    }
    for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e)
      eq.kernel[e] /= row;
  }

  // stationary ~ l*r
  eq.stationary.assign(n, 0.0);
  double mass = 0.0;
  for (long i = 0; i < n; ++i) {
    eq.stationary[i] = left.vec[i] * right.vec[i];
    mass += eq.stationary[i];
  }
  for (long i = 0; i < n; ++i) eq.stationary[i] /= mass;

  double H = 0.0, phi_hat = 0.0, ly_lo = 0.0, ly_hi = 0.0;
  for (long i = 0; i < n; ++i) {
    for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e) {
      const auto& ed = tm.edges[e];
      const double m = eq.stationary[i] * eq.kernel[e];
      if (m <= 0.0) continue;
      H -= m * std::log(eq.kernel[e]);
      phi_hat += m * t * detail::edge_psi(ed, rep);
      ly_lo += m * ed.psi_lo;
      ly_hi += m * ed.psi_hi;
    }
  }
  eq.entropy = H;
  eq.lyap_c = {ly_lo, ly_hi};
  eq.gibbs_error = std::fabs(H + phi_hat - right.log_lambda);

  const int max_len = std::min(tm.depth, 6);
  for (long i = 0; i < n; ++i)
    for (int m = 1; m <= max_len; ++m)
      eq.cylinder_masses[tm.states[i].substr(0, m)] += eq.stationary[i];
  return eq;
}

inline MarkovEquilibrium markov_equilibrium(int k, double t, Representative rep,
                                            const Params& params) {
  return markov_equilibrium_with(build_transfer(k, 0.0, params), t, rep);
}

// Central exponent of the periodic-orbit measure of w: log|multiplier|/|w|.
// The all-zero word carries the two endpoint measures with exponents +1, -1.
inline std::vector<double> lyap_of_periodic(const Word& w,
                                            const Params& params) {
  if (w.empty() || !is_cyclically_admissible(w))
    throw NonAdmissible("lyap_of_periodic: word not cyclically admissible");
  if (w.find('1') == Word::npos) return {1.0, -1.0};
  const auto pts = periodic_fixed_point(w, params);
  return {pts[0].log_abs_multiplier / static_cast<double>(w.size())};
}

struct EmpiricalStats {
  double fraction_near_Q;
  double fraction_near_P;
  double lyap;
};

// One period of the central periodic orbit of w = 1 0^n: time fractions spent
// eps-near the endpoints, and the exponent accumulated along the orbit.
inline EmpiricalStats empirical_measure_stats(long n, double eps,
                                              const Params& params) {
  if (n < 1) throw DomainError("empirical_measure_stats: n >= 1");
  if (!(eps > 0.0 && eps < 0.5))
    throw DomainError("empirical_measure_stats: eps in (0, 1/2)");
  const double sigma = params.sigma;
  const Word wrot = Word(n, '0') + '1';
  const detail::YPair post1 = detail::rotated_fixed_point(wrot, sigma);

  // orbit v_0 (pre-1), v_1 = f1(v_0) = post1, v_{j+1} = f0(v_j)
  std::vector<detail::YPair> pts(n + 1);
  pts[1] = post1;
  for (long j = 2; j <= n; ++j) pts[j] = detail::f0_pow(pts[j - 1], 1.0);
  pts[0] = detail::f0_pow(pts[n], 1.0);

  long near_q = 0, near_p = 0;
  for (const auto& p : pts) {
    if (p.y < eps) ++near_q;
    if (p.omy < eps) ++near_p;
  }
  double acc = std::log(sigma);
  for (long j = 1; j <= n; ++j) acc += detail::log_fprime(pts[j]);
  const double period = static_cast<double>(n + 1);
  return {static_cast<double>(near_q) / period,
          static_cast<double>(near_p) / period, acc / period};
}

struct PhaseTransitionEstimate {
  enum class Method { root_of_pressure, variational_sup };
  int depth;
  double t0_low;
  double t0_high;
  Method method;
};

// Bisection for the first t with p(t) - t <= tol, p strictly decreasing
// relative to the diagonal. Returns `cap` when there is no crossing in
// [0, cap] (the a-priori bound t0 <= h_top).
namespace detail {

template <typename G>
double first_t_below(G&& g, double cap, double tol) {
  if (g(0.0) <= tol) return 0.0;
  if (g(cap) > tol) return cap;
  double lo = 0.0, hi = cap;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace detail

inline PhaseTransitionEstimate find_t0(int k, double tol, const Params& params) {
  if (!(tol > 0.0)) throw DomainError("find_t0: tol must be positive");
  const TransferMatrix tm = build_transfer(k, 0.0, params);
  const double htop = sft_entropy();
  auto g_high = [&](double t) {
    return detail::perron(tm, t, WeightSide::upper, false).log_lambda - t;
  };
  auto g_low = [&](double t) {
    return std::max(
        0.0, detail::perron(tm, t, WeightSide::lower, false).log_lambda - t);
  };
  const double t0_high = detail::first_t_below(g_high, htop, tol);
  const double t0_low = detail::first_t_below(g_low, htop, tol);
  return {k, std::min(t0_low, t0_high), t0_high,
          PhaseTransitionEstimate::Method::root_of_pressure};
}

// Variational route: maximize h_mu / (1 - lambda^c_mu) over the depth-k
// Markov family {markov_equilibrium(k, t)} on a refined t-grid, keeping only
// members whose exponent enclosure is strictly negative (those are genuinely
// distinct from the Dirac measure at Q, and the ratio stays finite).
inline PhaseTransitionEstimate t0_variational(int k, const Params& params) {
  const TransferMatrix tm = build_transfer(k, 0.0, params);
  const double htop = sft_entropy();

  double best_lo = 0.0, best_hi = 0.0, best_t = 0.0;
  bool found = false;
  auto scan = [&](double a, double b, int points) {
    double local_best_t = best_t;
    for (int i = 0; i < points; ++i) {
      const double t =
          a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
      const MarkovEquilibrium eq =
          markov_equilibrium_with(tm, t, WeightSide::midpoint);
      if (!(eq.lyap_c.hi < 0.0)) continue;
      const double rlo = eq.entropy / (1.0 - eq.lyap_c.lo);
      const double rhi = eq.entropy / (1.0 - eq.lyap_c.hi);
      best_lo = std::max(best_lo, rlo);
      if (rhi > best_hi) {
        best_hi = rhi;
        local_best_t = t;
      }
      found = true;
    }
    best_t = local_best_t;
    return (b - a) / static_cast<double>(points - 1);
  };

  double step = scan(0.0, htop, 64);
  for (int round = 0; round < 2; ++round) {
    if (!found) break;
    const double a = std::max(0.0, best_t - step);
    const double b = std::min(htop, best_t + step);
    step = scan(a, b, 17);
  }
  if (!found)
    throw ConvergenceFailure("t0_variational: no admissible grid member", 0.0);
  return {k, best_lo, best_hi,
          PhaseTransitionEstimate::Method::variational_sup};
}

}  // namespace phh
