#include <doctest.h>

#include <cmath>

#include "mcf/diagnostics.hpp"
#include "mcf/families.hpp"

using namespace mcf;

TEST_CASE("find_L hits the shooting target inside the default bracket") {
  const double alpha = M_PI / 2, w = M_PI / 2, h = 4;
  FindLResult r = find_L(alpha, w, h, 65, 33);
  CHECK(std::abs(r.center - h / 2) <= 1e-3);
  CHECK(r.L > w / std::sin(alpha));
  CHECK(r.L < w / std::sin(alpha) + 4 * w);
  CHECK(r.evaluations >= 3);
  CHECK(r.field.ns() == 65);
}

TEST_CASE("find_L reports a useless bracket instead of guessing") {
  FindLOptions opts;
  opts.bracket_lo = 20;
  opts.bracket_hi = 24;  // center value is far below h/2 out here
  CHECK_THROWS_AS(find_L(M_PI / 2, M_PI / 2, 4, 49, 25, {}, opts), BracketError);

  FindLOptions bad;
  bad.bracket_lo = -1.0;
  bad.bracket_hi = 1.0;
  CHECK_THROWS_AS(find_L(M_PI / 2, M_PI / 2, 4, 49, 25, {}, bad), BracketError);
  CHECK_THROWS_AS(find_L(M_PI / 2, -1, 4, 49, 25), IllPosedDomain);
}

TEST_CASE("estimate_scherk tracks the crossing over a height schedule") {
  ScherkResult r = estimate_scherk(M_PI / 2, M_PI / 2, {3, 4, 5}, 65, 33);
  REQUIRE(r.L_values.size() == 3);
  // The fitted length grows with the wall height at desk scale.
  CHECK(r.L_values[1] > r.L_values[0]);
  CHECK(r.L_values[2] > r.L_values[1]);
  REQUIRE(r.increments.size() == 2);
  CHECK(r.increments[0] == doctest::Approx(r.L_values[1] - r.L_values[0]));
  CHECK(r.increments[1] == doctest::Approx(r.L_values[2] - r.L_values[1]));
  REQUIRE(r.identity.size() == 3);
  for (const IdentityReport& id : r.identity) {
    CHECK(id.lhs > 0);
    CHECK(id.rhs > 0);
    CHECK(id.mismatch < 0.15);
  }
  CHECK(r.L_estimate == doctest::Approx(r.L_values.back()));
}

TEST_CASE("estimate_scherk validates the height schedule") {
  CHECK_THROWS_AS(estimate_scherk(M_PI / 2, M_PI / 2, {}, 33, 17), IllPosedDomain);
  CHECK_THROWS_AS(estimate_scherk(M_PI / 2, M_PI / 2, {4, 4}, 33, 17), IllPosedDomain);
}

TEST_CASE("base length is symmetric under reflecting the corner angle") {
  // alpha and pi-alpha give mirror cells; the discrete problems mirror
  // exactly, so the bisection returns the same length.
  FindLResult a = find_L(M_PI / 3, M_PI / 2, 4, 49, 25);
  FindLResult b = find_L(2 * M_PI / 3, M_PI / 2, 4, 49, 25);
  CHECK(std::abs(a.L - b.L) / b.L < 1e-3);
}

TEST_CASE("jenkins-serrin bounds hold at the fitted length") {
  const double alpha = M_PI / 2, w = M_PI / 2;
  FindLResult r = find_L(alpha, w, 4, 49, 25);
  CHECK(r.L - w / std::sin(alpha) > 0);
  CHECK(r.L - w / std::sin(alpha) < 0.5 * w * r.L);
}

TEST_CASE("scherkenoid increments flatten toward the reaper profile") {
  const double w = M_PI, c = 14, h = 10;
  const int ns = 141, nt = 33;
  ScherkenoidResult r = solve_scherkenoid(M_PI / 2, w, c, h, ns, nt);
  CHECK(r.report.converged);
  CHECK(std::isfinite(r.fitted_offset));
  const ScalarField& u = r.field;

  // The surrogate walls bound the solution, and the mid band rides near the
  // fitted profile level, well above the horizontal-edge floor.
  double mn = 1e300, mx = -1e300;
  for (double v : u.data()) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mx <= h + 1e-9);
  CHECK(mn >= -h - 1e-9);
  CHECK(u.interpolate(c / 2, w / 2) > 0.0);

  // At width pi the tilted reaper has zero x-slope, so one-width increments
  // far from the wing must be nearly flat.
  double worst = 0;
  for (double y = w / 4; y <= 3 * w / 4; y += w / 16) {
    const double du = u.interpolate(9.0, y) - u.interpolate(8.0, y);
    worst = std::max(worst, std::abs(du - 0.0));
  }
  CHECK(worst <= 0.1);

  // Strictly descending in x away from the wall (limiting tilt is zero at
  // width pi, so the discrete slope may graze zero but not turn positive).
  double worst_slope = -1e300;
  for (int j = 1; j < nt - 1; ++j)
    for (int i = 1; i < ns - 1; ++i) {
      if (!r.interior_mask[static_cast<size_t>(j) * ns + i]) continue;
      if (u.node_xy(i, j).x() <= 1.0) continue;
      worst_slope = std::max(worst_slope, u.gradient_xy(i, j).x());
    }
  CHECK(worst_slope < 0.05);

  int masked = 0;
  for (bool b : r.interior_mask) masked += b ? 1 : 0;
  CHECK(masked > 0);
  CHECK(masked < (ns - 2) * (nt - 2));
  CHECK_FALSE(r.interior_mask[static_cast<size_t>(1) * ns + 1]);  // corner ring at (1,1)
}

TEST_CASE("scherkenoid parameter validation") {
  CHECK_THROWS_AS(solve_scherkenoid(M_PI / 2, 0.9 * M_PI, 10, 10, 65, 33), IllPosedDomain);
  // Slanted truncation: at alpha=pi/3 the cut length must exceed the shear offset.
  CHECK_THROWS_AS(solve_scherkenoid(M_PI / 3, M_PI, 0.5, 10, 65, 33), IllPosedDomain);
}

TEST_CASE("helicoid-like construction settles the axis point") {
  const double w = M_PI / 4, a = 2.0, H = 6;
  HelicoidResult r = solve_helicoid_like(w, a, H, 129, 17);
  CHECK(r.report.converged);
  CHECK(r.xhat_converged);
  CHECK(r.sweeps <= 20);
  CHECK(r.xhat > 0);
  CHECK(r.xhat < a);
  CHECK(r.xhat < M_PI * w);
  CHECK(static_cast<int>(r.xhat_history.size()) == r.sweeps);

  // Re-evaluating the axis functional on the converged field reproduces
  // xhat to within one grid spacing (the fixed-point stopping rule).
  const double re = 0.5 * flux_integral(r.field, r.field.full_window());
  CHECK(std::abs(re - r.xhat) <= r.field.hs() + 1e-12);

  // End normals: the left end is a ramp from +H to -H, its graph normal
  // points near +e2; the right end mirrors to -e2.
  const int jm = 8;
  const Vec3 nl = gauss_map(r.field, 1, jm);
  const Vec3 nr = gauss_map(r.field, 127, jm);
  CHECK(nl.dot(Vec3(0, 1, 0)) > std::cos(10.0 * M_PI / 180));
  CHECK(nr.dot(Vec3(0, -1, 0)) > std::cos(10.0 * M_PI / 180));
}

TEST_CASE("helicoid-like parameter validation") {
  CHECK_THROWS_AS(solve_helicoid_like(M_PI, 2, 6, 33, 17), IllPosedDomain);
  CHECK_THROWS_AS(solve_helicoid_like(M_PI / 4, 0.3, 6, 33, 17), IllPosedDomain);
}

TEST_CASE("pitchfork right end follows the reaper profile") {
  const double w = 1.5 * M_PI, a = 8, H = 12;
  PitchforkResult r = solve_pitchfork(w, a, H, 161, 25);
  CHECK(r.report.converged);
  CHECK(std::isfinite(r.fitted_offset));
  const ScalarField& u = r.field;
  const double slope = g_w_slope(w);
  double worst = 0;
  for (double t = 0.25 * w; t <= 0.75 * w; t += w / 16) {
    // One-width increments near the right end, in chart coordinates
    // s = x + a.
    const double du = u.interpolate(2 * a - 1.0, t) - u.interpolate(2 * a - 2.0, t);
    worst = std::max(worst, std::abs(du - slope));
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("pitchfork at width pi degenerates to an untilted profile") {
  const double w = M_PI, a = 4, H = 10;
  PitchforkResult r = solve_pitchfork(w, a, H, 81, 17);
  CHECK(r.report.converged);
  const ScalarField& u = r.field;
  double worst = 0;
  for (double t = 0.25 * w; t <= 0.75 * w; t += w / 8) {
    const double du = u.interpolate(2 * a - 1.0, t) - u.interpolate(2 * a - 2.0, t);
    worst = std::max(worst, std::abs(du));
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("pitchfork parameter validation") {
  CHECK_THROWS_AS(solve_pitchfork(0.9 * M_PI, 8, 10, 65, 17), IllPosedDomain);
  CHECK_THROWS_AS(solve_pitchfork(1.5 * M_PI, 2.0, 10, 65, 17), IllPosedDomain);
}

TEST_CASE("scherk cell mask drops the four corner neighborhoods") {
  auto [u, rep] = solve_scherk_cell(M_PI / 2, 1.2, 2.0, 3.0, 25, 21);
  auto mask = scherk_cell_mask(u, 3.0);
  int n = 0;
  for (bool b : mask) n += b ? 1 : 0;
  CHECK(n == (25 - 2) * (21 - 2) - 12);
}

TEST_CASE("nonexistence probe: centers rise with L at the critical width") {
  NonexistenceReport probe =
      nonexistence_probe(M_PI / 2, M_PI, {4, 8}, {2, 5, 10}, 97, 25);
  REQUIRE(probe.entries.size() == 2);
  for (const NonexistenceEntry& e : probe.entries) {
    REQUIRE(e.centers.size() == 3);
    // No width-pi profile exists for the interior to descend onto, so the
    // center value stays above h/2 and grows with L: no sign change.
    CHECK(e.centers[0].second > e.h / 2);
    CHECK(e.centers[1].second > e.centers[0].second);
    CHECK(e.centers[2].second > e.centers[1].second);
    CHECK_FALSE(e.sign_change);
    CHECK(e.ceiling == doctest::Approx(e.centers[2].second));
  }
  CHECK(probe.ceiling >= probe.entries[0].ceiling);
  CHECK(probe.ceiling >= probe.entries[1].ceiling);

  CHECK_THROWS_AS(nonexistence_probe(M_PI / 2, M_PI, {}, {2}, 33, 17), IllPosedDomain);
}
