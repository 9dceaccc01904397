#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "phh/central_map.hpp"
#include "phh/horseshoe.hpp"
#include "phh/params.hpp"
#include "phh/words.hpp"

namespace phh {

// Central system of iterated functions {f0, f1}, f0 = f, f1(y) = sigma(1-y).
// Compositions are driven by admissible words, first symbol applied first:
// Phi_w = f_{w[k]} o ... o f_{w[0]}.

namespace detail {

inline YPair apply_branch(YPair p, char s, double sigma) {
  if (s == '0') return f0_pow(p, 1.0);
  const double w = sigma * p.omy;  // <= sigma < 1/3, subtraction below is safe
  return {w, 1.0 - w};
}

inline YPair compose_pair(const Word& w, YPair p, double sigma) {
  for (char s : w) p = apply_branch(p, s, sigma);
  return p;
}

struct PairInterval {
  YPair lo;
  YPair hi;
};

// Image of an interval under a branch / a word, by monotone endpoint
// propagation (f0 increasing, f1 decreasing with an orientation flip).
inline PairInterval branch_interval(PairInterval iv, char s, double sigma) {
  if (s == '0') return {f0_pow(iv.lo, 1.0), f0_pow(iv.hi, 1.0)};
  return {apply_branch(iv.hi, '1', sigma), apply_branch(iv.lo, '1', sigma)};
}

inline PairInterval fiber_pair(const Word& w, PairInterval iv, double sigma) {
  for (char s : w) iv = branch_interval(iv, s, sigma);
  return iv;
}

inline std::vector<long> ones_positions(const Word& w) {
  std::vector<long> q;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == '1') q.push_back(static_cast<long>(i));
  return q;
}

// Per-1 factor of the telescoped cycle product, in log form and conditioned:
// at a 1 applied to x, the factor (1 - w/sigma)/(1 - w) with w = sigma(1-x)
// equals x / (1 - sigma(1-x)); both pieces come straight off the pair. The
// numerator log uses whichever component of the pair is accurate.
inline double log_one_factor(YPair pre, double sigma) {
  const double log_x =
      pre.y <= 0.5 ? std::log(pre.y) : std::log1p(-pre.omy);
  return log_x - std::log1p(-sigma * pre.omy);
}

}  // namespace detail

inline double apply_f0(double y, const Params&) { return f_iter(y, 1); }

inline double apply_f1(double y, const Params& params) {
  detail::check_unit_interval(y);
  return params.sigma * (1.0 - y);
}

inline double compose_phi(const Word& w, double y, const Params& params) {
  require_admissible(w);
  detail::check_unit_interval(y);
  return detail::compose_pair(w, detail::ypair(y), params.sigma).y;
}

// log |Phi_w'(y)|, accumulated as a sum of per-step log-derivatives.
inline double log_abs_dphi_chain(const Word& w, double y,
                                 const Params& params) {
  require_admissible(w);
  detail::check_unit_interval(y);
  detail::YPair p = detail::ypair(y);
  double acc = 0.0;
  const double log_sigma = std::log(params.sigma);
  for (char s : w) {
    acc += (s == '0') ? detail::log_fprime(p) : log_sigma;
    p = detail::apply_branch(p, s, params.sigma);
  }
  return acc;
}

// Signed derivative of Phi_w at y (chain rule); sign is (-1)^{#1s in w}.
inline double dphi_chain(const Word& w, double y, const Params& params) {
  const double lg = log_abs_dphi_chain(w, y, params);
  long ones = static_cast<long>(std::count(w.begin(), w.end(), '1'));
  const double sign = (ones % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(lg);
}

// The factor (1 - w/sigma)/(1 - w); < 1 for w in (0, sigma], decreasing in w.
inline double contraction_factor(double w, const Params& params) {
  if (!(w >= 0.0 && w <= params.sigma))
    throw DomainError("contraction_factor: w outside [0, sigma]");
  return (1.0 - w / params.sigma) / (1.0 - w);
}

// Product-formula route for |Phi_w'(y)| on words that are concatenations of
// blocks (0,...,0,1): prod_j w_j (1 - w_j/sigma) / (w_{j-1} (1 - w_{j-1})),
// w_0 = y and w_j the value right after the j-th 1. The formula is 0/0 at
// y = 1 (the first block maps 1 to 0), so the domain is the open interval.
inline double dphi_product(const Word& w, double y, const Params& params) {
  require_admissible(w);
  if (w.empty() || w.back() != '1')
    throw PatternError("dphi_product: word must end with 1");
  if (!(y > 0.0 && y < 1.0))
    throw DomainError("dphi_product: y must be in (0,1)");
  detail::YPair cur = detail::ypair(y);
  double prod = 1.0;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (w[j] == '0') ++j;  // block = zeros then the 1 at j
    detail::YPair pre = cur;
    for (std::size_t p = i; p < j; ++p)
      pre = detail::apply_branch(pre, '0', params.sigma);
    detail::YPair next = detail::apply_branch(pre, '1', params.sigma);
    // w_j (1 - w_j/sigma) = next.y * pre.y  since 1 - w_j/sigma = f0^a(cur).y
    prod *= (next.y * pre.y) / (cur.y * cur.omy);
    cur = next;
    i = j + 1;
  }
  return prod;
}

struct CentralInterval {
  double lo;
  double hi;
  double diameter() const { return hi - lo; }
};

// Phi_past([0,1]): the set of central coordinates compatible with the past.
inline CentralInterval fiber_enclosure(const Word& past, const Params& params) {
  require_admissible(past);
  detail::PairInterval iv{{0.0, 1.0}, {1.0, 0.0}};
  iv = detail::fiber_pair(past, iv, params.sigma);
  return {iv.lo.y, iv.hi.y};
}

// Certificate for the derivative bound along a word starting with 1 and
// containing at least two 1s:
//   |Phi'_{prefix through the (i+1)-th 1}| <= C prod_{j=1}^{i-1} a_j,
//   a_j = (1 - delta_j/sigma)/(1 - delta_j),
// with C = A / (3 delta_0 (1-delta_0)), A = max_I |Phi'_prefix-to-2nd-1|,
// delta_0 = min Phi_prefix(I), delta_j = min image of [delta_0, sigma] under
// the remainder word up to its j-th 1. C depends only on the gap to the
// second 1. Bounds are checked numerically on a y-grid.
struct ContractionCertificate {
  double C;
  double log_C;
  std::vector<double> deltas;
  double rate_a;                    // worst per-delta factor, < 1
  std::vector<long> marker_times;   // positions of the checked 1s
  double A;
  double delta0;
  long grid_points;
  bool bound_verified;
  double max_slack;  // largest observed (log lhs - log rhs); <= tolerance
};

inline ContractionCertificate contraction_certificate(const Word& w,
                                                      const Params& params,
                                                      long grid = 1000,
                                                      double slack_tol = 1e-12) {
  require_admissible(w);
  const std::vector<long> q = detail::ones_positions(w);
  if (w.empty() || w.front() != '1' || q.size() < 2)
    throw PatternError(
        "contraction_certificate: need w starting with 1 and >= two 1s");
  const double sigma = params.sigma;
  const long N = q[1] + 1;  // prefix through the second 1
  const Word prefix = w.substr(0, N);

  double log_A = -std::numeric_limits<double>::infinity();
  for (long g = 0; g < grid; ++g) {
    const double y = static_cast<double>(g) / static_cast<double>(grid - 1);
    log_A = std::max(log_A, log_abs_dphi_chain(prefix, y, params));
  }
  detail::PairInterval pre_img =
      detail::fiber_pair(prefix, {{0.0, 1.0}, {1.0, 0.0}}, sigma);
  const double delta0 = pre_img.lo.y;
  const double log_C = log_A - std::log(3.0 * delta0 * (1.0 - delta0));

  // delta_j for the j-th remainder 1: the value at a 1 closing a gap of a_j
  // zeros is f1(f0^{a_j}(x)) with x <= sigma at the previous 1, so
  // delta_j = f1(f0^{a_j}(sigma)) bounds it from below. Depends only on the
  // gap, so periodic words get constant deltas.
  std::vector<double> deltas;
  for (std::size_t i = 2; i < q.size(); ++i) {
    const double gap = static_cast<double>(q[i] - q[i - 1] - 1);
    deltas.push_back(sigma *
                     detail::f0_pow(detail::ypair(sigma), gap).omy);
  }

  ContractionCertificate cert;
  cert.C = std::exp(log_C);
  cert.log_C = log_C;
  cert.deltas = deltas;
  cert.A = std::exp(log_A);
  cert.delta0 = delta0;
  cert.grid_points = grid;
  cert.marker_times.assign(q.begin() + 1, q.end());
  double worst = contraction_factor(delta0, params);
  for (double d : deltas) worst = std::max(worst, contraction_factor(d, params));
  cert.rate_a = worst;

  // cumulative log bound at the (i+1)-th 1: log C + sum_{j<i} log a_j
  std::vector<double> bound_at_one(q.size(), 0.0);
  bound_at_one[1] = log_C;
  for (std::size_t i = 2; i < q.size(); ++i)
    bound_at_one[i] =
        bound_at_one[i - 1] + std::log(contraction_factor(deltas[i - 2], params));

  double max_slack = -std::numeric_limits<double>::infinity();
  const double log_sigma = std::log(sigma);
  for (long g = 0; g < grid; ++g) {
    const double y = static_cast<double>(g) / static_cast<double>(grid - 1);
    detail::YPair p = detail::ypair(y);
    double acc = 0.0;
    std::size_t next_one = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += (w[i] == '0') ? detail::log_fprime(p) : log_sigma;
      p = detail::apply_branch(p, w[i], sigma);
      if (next_one < q.size() && static_cast<long>(i) == q[next_one]) {
        if (next_one >= 1) max_slack = std::max(max_slack, acc - bound_at_one[next_one]);
        ++next_one;
      }
    }
  }
  cert.max_slack = max_slack;
  cert.bound_verified = max_slack <= slack_tol;
  return cert;
}

// Geometric decay rate extracted from repeated occurrences of a block
// 1 0^k 1: after each occurrence the value at the closing 1 is at least
// delta = f1(f0^k(sigma)), so each marker contributes a factor
// a = (1 - delta/sigma)/(1 - delta) < 1 and
// |Phi'_{prefix up to m_j}| <= C a^j, marker m_j just past the occurrence.
struct GeometricRate {
  double a;
  std::vector<long> marker_times;
  double delta;
  double log_C;
  bool bound_verified;
  double max_slack;
};

inline GeometricRate geometric_rate(const Word& w, const Word& block,
                                    const Params& params, long grid = 1000,
                                    double slack_tol = 1e-12) {
  // block shape: 1 0^k 1, k >= 1
  if (block.size() < 3 || block.front() != '1' || block.back() != '1' ||
      block.find('1', 1) != block.size() - 1)
    throw PatternError("geometric_rate: block must be 1 0^k 1");
  const long k = static_cast<long>(block.size()) - 2;
  require_admissible(w);
  std::vector<long> markers;
  for (std::size_t i = 0; i + block.size() <= w.size(); ++i)
    if (w.compare(i, block.size(), block) == 0)
      markers.push_back(static_cast<long>(i + block.size()));
  if (markers.empty())
    throw PatternError("geometric_rate: block does not occur in word");

  const double sigma = params.sigma;
  detail::YPair fk = detail::f0_pow(detail::ypair(sigma), static_cast<double>(k));
  const double delta = sigma * fk.omy;            // f1(f0^k(sigma))
  const double a = fk.y / (1.0 - sigma * fk.omy); // (1-delta/sigma)/(1-delta)

  const ContractionCertificate cert = contraction_certificate(w, params, grid);
  const double log_a = std::log(a);

  double max_slack = -std::numeric_limits<double>::infinity();
  const double log_sigma = std::log(sigma);
  for (long g = 0; g < grid; ++g) {
    const double y = static_cast<double>(g) / static_cast<double>(grid - 1);
    detail::YPair p = detail::ypair(y);
    double acc = 0.0;
    std::size_t mi = 0;
    for (std::size_t i = 0; i < w.size() && mi < markers.size(); ++i) {
      acc += (w[i] == '0') ? detail::log_fprime(p) : log_sigma;
      p = detail::apply_branch(p, w[i], sigma);
      if (static_cast<long>(i) + 1 == markers[mi]) {
        const double bound = cert.log_C + static_cast<double>(mi) * log_a;
        max_slack = std::max(max_slack, acc - bound);
        ++mi;
      }
    }
  }
  return {a, markers, delta, cert.log_C, max_slack <= slack_tol, max_slack};
}

namespace detail {

// Fixed point of Phi_wrot for a word ending in 1 (so the image lies in
// [0, sigma], away from the rounding cliff at y = 1). Plain fixed-point
// iteration first (relative 1e-14 stop, cap 1e4); on cap hit - e.g. when the
// multiplier is within rounding of 1 - bisection on Phi(y) - y over
// [0, sigma], run to double exhaustion.
inline YPair rotated_fixed_point(const Word& wrot, double sigma) {
  auto phi_rot = [&](YPair p) { return compose_pair(wrot, p, sigma); };
  YPair y = ypair(sigma / 2.0);
  for (int it = 0; it < 10000; ++it) {
    YPair yn = phi_rot(y);
    if (std::fabs(yn.y - y.y) <= 1e-14 * std::max(yn.y, 1e-300)) return yn;
    y = yn;
  }
  double lo = 0.0, hi = sigma;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (phi_rot(ypair(mid)).y - mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return phi_rot(ypair(0.5 * (lo + hi)));
}

}  // namespace detail

// Fixed points of Phi_w for a cyclically admissible word. Words with a 1 have
// a unique fixed point with |multiplier| < 1; the all-zero word has the two
// endpoint fixed points with multipliers e^n and e^-n.
struct PeriodicPoint {
  double y;
  double multiplier;
  double log_abs_multiplier;
};

inline std::vector<PeriodicPoint> periodic_fixed_point(const Word& w,
                                                       const Params& params) {
  if (w.empty() || !is_cyclically_admissible(w))
    throw NonAdmissible("periodic_fixed_point: word not cyclically admissible");
  const double n = static_cast<double>(w.size());
  if (w.find('1') == Word::npos)
    return {{0.0, std::exp(n), n}, {1.0, std::exp(-n), -n}};

  const double sigma = params.sigma;
  // Rotate so the composition starts just after the first 1.
  const std::size_t r = w.find('1') + 1;
  const Word wrot = w.substr(r) + w.substr(0, r);
  const detail::YPair y = detail::rotated_fixed_point(wrot, sigma);

  // One pass around the cycle: conditioned log-multiplier from the telescoped
  // product over 1-steps, and the phase-0 value for the caller's word.
  double log_mult = 0.0;
  detail::YPair p = y;
  for (char s : wrot) {
    if (s == '1') log_mult += detail::log_one_factor(p, sigma);
    p = detail::apply_branch(p, s, sigma);
  }
  detail::YPair y0 = detail::compose_pair(w.substr(r), y, sigma);
  const long ones = static_cast<long>(std::count(w.begin(), w.end(), '1'));
  const double sign = (ones % 2 == 0) ? 1.0 : -1.0;
  return {{y0.y, sign * std::exp(log_mult), log_mult}};
}

// Box guaranteed to contain every point of the invariant set with the given
// symbolic window: stable coordinate from the past, unstable from the future,
// central from the fiber enclosure of the past.
struct Box3 {
  CentralInterval xs;
  CentralInterval xc;
  CentralInterval xu;
};

inline Box3 reconstruct_point(const Word& past, const Word& future,
                              const Params& params) {
  if (!is_admissible(past + future))
    throw NonAdmissible("reconstruct_point: window not admissible");
  // stable: affine contractions applied along the past, oldest first
  double slo = 0.0, shi = 1.0;
  for (char s : past) {
    if (s == '0') {
      slo *= params.lambda0;
      shi *= params.lambda0;
    } else {
      const double nlo = 0.75 - params.lambda1 * shi;
      const double nhi = 0.75 - params.lambda1 * slo;
      slo = nlo;
      shi = nhi;
    }
  }
  // unstable: nested branch preimages along the future, newest first
  double ulo = 0.0, uhi = 1.0;
  for (auto it = future.rbegin(); it != future.rend(); ++it) {
    if (*it == '0') {
      ulo /= params.beta0;
      uhi /= params.beta0;
    } else {
      ulo = 5.0 / 6.0 + ulo / params.beta1;
      uhi = std::min(1.0, 5.0 / 6.0 + uhi / params.beta1);
    }
  }
  return {{slo, shi}, fiber_enclosure(past, params), {ulo, uhi}};
}

}  // namespace phh
