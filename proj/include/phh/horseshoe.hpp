#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phh/central_map.hpp"
#include "phh/params.hpp"

namespace phh {

// Point in the cube R = [0,1]^3: stable, central, unstable coordinates.
struct Point3 {
  double xs;
  double xc;
  double xu;
};

inline constexpr Point3 kFixedQ{0.0, 0.0, 0.0};
inline constexpr Point3 kFixedP{0.0, 1.0, 0.0};

enum class EscapeReason { gap_z, image_outside };

struct StepResult {
  bool escaped;
  EscapeReason reason;  // valid when escaped
  Point3 image;         // valid when !escaped
  int symbol;           // 0 or 1 when a branch applied; -1 on gap_z
};

inline bool in_cube(const Point3& p) {
  return p.xs >= 0.0 && p.xs <= 1.0 && p.xc >= 0.0 && p.xc <= 1.0 &&
         p.xu >= 0.0 && p.xu <= 1.0;
}

// One application of the horseshoe map. Branch selection by the unstable
// coordinate: xu <= 1/6 -> F0, xu >= 5/6 -> F1 (closed sub-cubes), the open
// gap in between escapes. F0 can escape through the top of the z-range.
inline StepResult apply_F(const Point3& p, const Params& params) {
  if (!in_cube(p)) throw DomainError("apply_F: point outside the cube");
  if (p.xu <= 1.0 / 6.0) {
    Point3 img{params.lambda0 * p.xs, f_iter(p.xc, 1), params.beta0 * p.xu};
    if (!in_cube(img)) return {true, EscapeReason::image_outside, img, 0};
    return {false, EscapeReason::gap_z, img, 0};
  }
  if (p.xu >= 5.0 / 6.0) {
    Point3 img{0.75 - params.lambda1 * p.xs, params.sigma * (1.0 - p.xc),
               params.beta1 * (p.xu - 5.0 / 6.0)};
    if (!in_cube(img)) return {true, EscapeReason::image_outside, img, 1};
    return {false, EscapeReason::gap_z, img, 1};
  }
  return {true, EscapeReason::gap_z, p, -1};
}

struct OrbitRecord {
  std::vector<Point3> points;  // visited points, starting point first
  std::string itinerary;       // one symbol per successful application
  std::optional<long> escaped_at;
};

inline OrbitRecord orbit(Point3 p, const Params& params, long n) {
  if (n < 0) throw DomainError("orbit: n must be nonnegative");
  OrbitRecord rec;
  rec.points.push_back(p);
  for (long step = 0; step < n; ++step) {
    StepResult r = apply_F(p, params);
    if (r.escaped) {
      rec.escaped_at = step;
      return rec;
    }
    rec.itinerary.push_back(static_cast<char>('0' + r.symbol));
    p = r.image;
    rec.points.push_back(p);
  }
  return rec;
}

}  // namespace phh
