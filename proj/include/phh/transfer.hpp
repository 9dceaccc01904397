#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "phh/ifs.hpp"
#include "phh/params.hpp"
#include "phh/words.hpp"

namespace phh {

// Depth-k transfer matrices for the potential family phi_t = t log|DF|_Ec:
// states are admissible words of length k read as the k most recent past
// symbols; the transition (w, s) applies branch s and carries the interval of
// possible potential values over the cylinder, obtained from the fiber
// enclosure of the state.

struct PotentialSpec {
  double t;  // >= 0, finite
};

inline void validate_potential(double t) {
  if (!(std::isfinite(t) && t >= 0.0))
    throw DomainError("potential parameter t must be finite and >= 0");
}

namespace detail {

inline int hh_threads() {
  if (const char* env = std::getenv("HH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<int>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Fixed-partition parallel loop; each chunk writes disjoint slots, so the
// result does not depend on the thread count.
template <typename Fn>
void parallel_for(long n, Fn&& fn) {
  const int threads = std::min<long>(hh_threads(), std::max<long>(1, n / 512));
  if (threads <= 1) {
    fn(0L, n);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (n + threads - 1) / threads;
  for (int i = 0; i < threads; ++i) {
    const long b = i * chunk;
    const long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Potential interval over one transition. For next_symbol 1 the potential is
// the constant t log sigma; for 0 it is t log f'(y) with y ranging over the
// fiber enclosure of the state (f' decreasing, so the sup sits at the fiber's
// lower end; the all-zero state has fiber [0,1] and upper end exactly t).
inline CentralInterval potential_on_cylinder(const Word& state,
                                             int next_symbol, double t,
                                             const Params& params) {
  require_admissible(state);
  validate_potential(t);
  if (next_symbol != 0 && next_symbol != 1)
    throw DomainError("next_symbol must be 0 or 1");
  if (!state.empty() && state.back() == '1' && next_symbol == 1)
    throw NonAdmissible("transition would create \"11\"");
  if (next_symbol == 1) {
    const double v = t * std::log(params.sigma);
    return {v, v};
  }
  detail::PairInterval iv =
      detail::fiber_pair(state, {{0.0, 1.0}, {1.0, 0.0}}, params.sigma);
  return {t * detail::log_fprime(iv.hi), t * detail::log_fprime(iv.lo)};
}

struct TransferMatrix {
  struct Edge {
    std::int32_t to;
    std::int8_t symbol;
    double psi_lo;  // per-unit-t potential bounds on the cylinder
    double psi_hi;
  };
  int depth = 0;
  double t = 0.0;
  std::vector<Word> states;
  std::vector<long> row_off;  // size states.size()+1
  std::vector<Edge> edges;    // grouped by source state

  double weight_lo(const Edge& e) const { return std::exp(t * e.psi_lo); }
  double weight_hi(const Edge& e) const { return std::exp(t * e.psi_hi); }
};

inline constexpr int kMinTransferDepth = 2;
inline constexpr int kMaxTransferDepth = 20;

inline TransferMatrix build_transfer(int k, double t, const Params& params) {
  if (k < kMinTransferDepth) throw DomainError("build_transfer: k must be >= 2");
  if (k > kMaxTransferDepth)
    throw LimitExceeded("build_transfer: k > " +
                        std::to_string(kMaxTransferDepth));
  validate_potential(t);

  TransferMatrix tm;
  tm.depth = k;
  tm.t = t;
  tm.states = enumerate_words(k);
  const long n = static_cast<long>(tm.states.size());

  tm.row_off.assign(n + 1, 0);
  for (long i = 0; i < n; ++i)
    tm.row_off[i + 1] = tm.row_off[i] + (tm.states[i].back() == '1' ? 1 : 2);
  tm.edges.resize(tm.row_off[n]);

  auto state_index = [&](const Word& w) -> std::int32_t {
    const auto it = std::lower_bound(tm.states.begin(), tm.states.end(), w);
    return static_cast<std::int32_t>(it - tm.states.begin());
  };

  const double log_sigma = std::log(params.sigma);
  detail::parallel_for(n, [&](long b, long e) {
    for (long i = b; i < e; ++i) {
      const Word& w = tm.states[i];
      detail::PairInterval iv =
          detail::fiber_pair(w, {{0.0, 1.0}, {1.0, 0.0}}, params.sigma);
      long off = tm.row_off[i];
      // s = 0
      tm.edges[off] = {state_index(w.substr(1) + '0'), 0,
                       detail::log_fprime(iv.hi), detail::log_fprime(iv.lo)};
      ++off;
      if (w.back() != '1')
        tm.edges[off] = {state_index(w.substr(1) + '1'), 1, log_sigma,
                         log_sigma};
    }
  });
  return tm;
}

enum class WeightSide { lower, upper, midpoint };

namespace detail {

struct PerronResult {
  double log_lambda;
  std::vector<double> vec;  // L1-normalized positive eigenvector
  long iterations;
};

inline double edge_psi(const TransferMatrix::Edge& e, WeightSide side) {
  switch (side) {
    case WeightSide::lower: return e.psi_lo;
    case WeightSide::upper: return e.psi_hi;
    default: return 0.5 * (e.psi_lo + e.psi_hi);
  }
}

// Power iteration for the Perron root of the (primitive, nonnegative) weight
// matrix; stops when the eigenvalue estimate changes by <= rel_tol for
// `stable_needed` consecutive iterations. right_vector selects between the
// right eigenvector (M v) and the left one (v^T M); the root is the same.
inline PerronResult perron(const TransferMatrix& tm, double t, WeightSide side,
                           bool right_vector, double rel_tol = 1e-12,
                           long max_iter = 100000, int stable_needed = 10) {
  const long n = static_cast<long>(tm.states.size());
  std::vector<double> wts(tm.edges.size());
  for (std::size_t e = 0; e < tm.edges.size(); ++e)
    wts[e] = std::exp(t * edge_psi(tm.edges[e], side));

  std::vector<double> v(n, 1.0 / static_cast<double>(n)), nv(n);
  double lambda = 0.0;
  int stable = 0;
  for (long it = 1; it <= max_iter; ++it) {
    std::fill(nv.begin(), nv.end(), 0.0);
    for (long i = 0; i < n; ++i) {
      for (long e = tm.row_off[i]; e < tm.row_off[i + 1]; ++e) {
        const auto& ed = tm.edges[e];
        if (right_vector)
          nv[i] += wts[e] * v[ed.to];
        else
          nv[ed.to] += wts[e] * v[i];
      }
    }
    double s = 0.0;
    for (double x : nv) s += x;
    for (long i = 0; i < n; ++i) v[i] = nv[i] / s;
    if (lambda > 0.0 && std::fabs(s - lambda) <= rel_tol * s)
      ++stable;
    else
      stable = 0;
    lambda = s;
    if (stable >= stable_needed) return {std::log(lambda), std::move(v), it};
  }
  throw ConvergenceFailure("power iteration hit the iteration cap",
                           std::log(lambda));
}

}  // namespace detail

struct PressureEnclosure {
  double t;
  int depth;
  double p_low;
  double p_high;
  double width() const { return p_high - p_low; }
};

// Pressure bracket at a given t, reusing an already-built transfer skeleton
// (the psi intervals do not depend on t).
inline PressureEnclosure pressure_with(const TransferMatrix& tm, double t) {
  validate_potential(t);
  const double hi = detail::perron(tm, t, WeightSide::upper, false).log_lambda;
  const double lo = detail::perron(tm, t, WeightSide::lower, false).log_lambda;
  // delta_Q certifies P(t) >= t exactly, which tightens the lower end.
  return {t, tm.depth, std::max(t, lo), hi};
}

inline PressureEnclosure pressure(int k, double t, const Params& params) {
  return pressure_with(build_transfer(k, t, params), t);
}

inline std::vector<PressureEnclosure> pressure_curve(int k, double t_min,
                                                     double t_max, int steps,
                                                     const Params& params) {
  if (!(t_min <= t_max) || steps < 1)
    throw DomainError("pressure_curve: need t_min <= t_max and steps >= 1");
  const TransferMatrix tm = build_transfer(k, 0.0, params);
  std::vector<PressureEnclosure> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t =
        steps == 1 ? t_min
                   : t_min + (t_max - t_min) * static_cast<double>(i) /
                                 static_cast<double>(steps - 1);
    out.push_back(pressure_with(tm, t));
  }
  return out;
}

}  // namespace phh
