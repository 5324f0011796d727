#include <doctest.h>

#include <cmath>
#include <limits>

#include "mcf/diagnostics.hpp"
#include "mcf/families.hpp"
#include "mcf/solver.hpp"

using namespace mcf;

namespace {

PlanarDomain offset_strip(double xlo, double xhi, double y0, double width) {
  PlanarDomain d;
  d.kind = DomainKind::TruncatedStrip;
  d.alpha = M_PI / 2;
  d.width = width;
  d.length = xhi - xlo;
  d.shear = 0.0;
  d.origin = Vec2(xlo, y0);
  return d;
}

// Centered square [-1,1]^2.
ScalarField centered_square(int n, const std::function<double(double, double)>& f) {
  return sample(offset_strip(-1, 1, -1, 2), n, n, f);
}

}  // namespace

TEST_CASE("gauss map of an affine graph is the constant unit normal") {
  PlanarDomain d = make_parallelogram(M_PI / 3, 1, 2, false);
  ScalarField u = sample(d, 17, 13, [](double x, double) { return x; });
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      const Vec3 nu = gauss_map(u, i, j);
      CHECK(std::abs(nu.norm() - 1.0) <= 1e-12);
      CHECK(nu.x() == doctest::Approx(-1 / std::sqrt(2)).epsilon(1e-10));
      CHECK(nu.y() == doctest::Approx(0.0).epsilon(1e-10));
      CHECK(nu.z() == doctest::Approx(1 / std::sqrt(2)).epsilon(1e-10));
    }
}

TEST_CASE("gauss map of the grim reaper points straight up on the crest") {
  // Strip chosen so the middle node row sits exactly at y = pi/2.
  PlanarDomain d = offset_strip(0, 1, 0.4, M_PI - 0.8);
  ScalarField u = sample(d, 9, 17, grim_reaper);
  const Vec3 nu = gauss_map(u, 4, 8);
  CHECK(nu.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nu.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nu.z() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gauss curvature of a quadratic saddle matches the closed form") {
  ScalarField u = centered_square(33, [](double x, double y) { return x * x - y * y; });
  ScalarField K = gauss_curvature(u);
  for (int j = 1; j < 32; ++j)
    for (int i = 1; i < 32; ++i) {
      const Vec2 g = u.gradient_xy(i, j);
      const double W2 = 1 + g.squaredNorm();
      CHECK(K.at(i, j) == doctest::Approx(-4.0 / (W2 * W2)).epsilon(1e-9));
      CHECK(K.at(i, j) < 0);
    }
}

TEST_CASE("gauss curvature of reaper surfaces vanishes identically") {
  // Product surfaces: u_xx = u_xy = 0 makes K exactly zero, sheared chart
  // included.
  PlanarDomain d;
  d.kind = DomainKind::Parallelogram;
  d.alpha = M_PI / 3;
  d.shear = 1 / std::tan(M_PI / 3);
  d.width = M_PI - 0.8;
  d.length = 2;
  d.origin = Vec2(0, 0.4);
  ScalarField u = sample(d, 21, 21, grim_reaper);
  ScalarField K = gauss_curvature(u);
  for (int j = 1; j < 20; ++j)
    for (int i = 1; i < 20; ++i) CHECK(std::abs(K.at(i, j)) <= 1e-12);
}

TEST_CASE("total curvature of the plain saddle matches the exact integral") {
  // For u = xy, |K| W dx dy = (1+x^2+y^2)^{-3/2} dx dy, whose integral over
  // [-1,1]^2 is 4*arcsin(1/2)... evaluated in closed form: 4*(pi/6).
  ScalarField u = centered_square(161, [](double x, double y) { return x * y; });
  const double exact = 4 * (M_PI / 6);
  const double got = total_curvature(u, u.full_window());
  CHECK(got == doctest::Approx(exact).epsilon(2.5e-2));

  std::vector<bool> none(static_cast<size_t>(161) * 161, false);
  CHECK(total_curvature(u, u.full_window(), &none) == doctest::Approx(0.0));
}

TEST_CASE("winding multiplicities follow the saddle order") {
  struct Case {
    int n;
    std::function<double(double, double)> f;
  };
  const std::vector<Case> cases = {
      {2, [](double x, double y) { return 2 * x * y; }},
      {3, [](double x, double y) { return 3 * x * x * y - y * y * y; }},
      {4, [](double x, double y) { return 4 * x * y * (x * x - y * y); }},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    // Even node count: the origin falls inside a cell, not on a node.
    ScalarField f = centered_square(64, c.f);
    auto pts = critical_points(f);
    REQUIRE(pts.size() == 1);
    CHECK_FALSE(pts[0].is_extremum);
    CHECK(pts[0].degree == -(c.n - 1));
    CHECK(pts[0].multiplicity == c.n - 1);
    CHECK(std::abs(pts[0].s - 1.0) < 0.1);  // chart s of the origin
    CHECK(std::abs(pts[0].t - 1.0) < 0.1);
  }
}

TEST_CASE("extrema are classified with their sign") {
  ScalarField fmin = centered_square(64, [](double x, double y) { return x * x + y * y; });
  auto pmin = critical_points(fmin);
  REQUIRE(pmin.size() == 1);
  CHECK(pmin[0].is_extremum);
  CHECK(pmin[0].is_minimum);
  CHECK(pmin[0].degree == 1);
  CHECK(pmin[0].multiplicity == 0);

  ScalarField fmax = centered_square(64, [](double x, double y) { return -x * x - y * y; });
  auto pmax = critical_points(fmax);
  REQUIRE(pmax.size() == 1);
  CHECK(pmax[0].is_extremum);
  CHECK_FALSE(pmax[0].is_minimum);
}

TEST_CASE("degenerate gradients raise instead of miscounting") {
  ScalarField flat = centered_square(16, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(critical_points(flat), UnresolvedCritical);
}

TEST_CASE("margin cells exclude near-boundary candidates") {
  ScalarField f = centered_square(64, [](double x, double y) { return 2 * (x - 0.9) * y; });
  CriticalPointOptions opts;
  opts.margin_cells = 0;
  CHECK(critical_points(f, opts).size() == 1);
  opts.margin_cells = 8;
  CHECK(critical_points(f, opts).empty());
}

TEST_CASE("saddle counting identity across sublevel topologies") {
  const double inf = std::numeric_limits<double>::infinity();
  const double dx = 0.0137, dy = 0.0291;  // keep critical points off nodes

  SUBCASE("tilted linear data has no saddles") {
    ScalarField f = centered_square(65, [&](double x, double y) { return x + 2 * y; });
    MorseReport full = morse_count_check(f, inf);
    CHECK(full.N == 0);
    CHECK(full.c0 == 1);
    CHECK(full.c1 == 0);
    CHECK(full.chi == 1);
    CHECK(full.identity_holds);

    MorseReport half = morse_count_check(f, 0.11);
    CHECK(half.N == 0);
    CHECK(half.c0 == 1);
    CHECK(half.c1 == 0);
    CHECK(half.chi == 1);
    CHECK(half.identity_holds);
  }

  SUBCASE("plain saddle") {
    ScalarField f = centered_square(
        65, [&](double x, double y) { return (x - dx) * (x - dx) - (y - dy) * (y - dy); });
    MorseReport r = morse_count_check(f, inf);
    CHECK(r.N == 1);
    CHECK(r.c0 == 2);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 1);
    CHECK(r.interior_minima == 0);
    CHECK(r.interior_maxima == 0);
    CHECK(r.identity_holds);
  }

  SUBCASE("bowl: the minimum enters through the extremum terms") {
    ScalarField f = centered_square(
        65, [&](double x, double y) { return (x - dx) * (x - dx) + (y - dy) * (y - dy); });
    MorseReport r = morse_count_check(f, inf);
    CHECK(r.N == 0);
    CHECK(r.c0 == 0);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 1);
    CHECK(r.interior_minima == 1);
    CHECK(r.identity_holds);
  }

  SUBCASE("dome: corner minima against edge maxima") {
    ScalarField f = centered_square(
        65, [&](double x, double y) { return -(x - dx) * (x - dx) - (y - dy) * (y - dy); });
    MorseReport r = morse_count_check(f, inf);
    CHECK(r.N == 0);
    CHECK(r.c0 == 4);
    CHECK(r.c1 == 4);
    CHECK(r.chi == 1);
    CHECK(r.interior_maxima == 1);
    CHECK(r.identity_holds);
  }

  SUBCASE("disk sublevel of the bowl") {
    ScalarField f = centered_square(
        65, [&](double x, double y) { return (x - dx) * (x - dx) + (y - dy) * (y - dy); });
    MorseReport r = morse_count_check(f, 0.25);
    CHECK(r.N == 0);
    CHECK(r.c0 == 0);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 1);
    CHECK(r.interior_minima == 1);
    CHECK(r.identity_holds);
  }

  SUBCASE("monkey saddle counts with multiplicity two") {
    ScalarField f = centered_square(65, [&](double x, double y) {
      const double X = x - dx, Y = y - dy;
      return 3 * X * X * Y - Y * Y * Y;
    });
    MorseReport r = morse_count_check(f, inf);
    CHECK(r.N == 2);
    CHECK(r.c0 == 3);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 1);
    CHECK(r.identity_holds);
  }

  SUBCASE("order-four saddle counts with multiplicity three") {
    ScalarField f = centered_square(65, [&](double x, double y) {
      const double X = x - dx, Y = y - dy;
      return 4 * X * Y * (X * X - Y * Y);
    });
    MorseReport r = morse_count_check(f, inf);
    CHECK(r.N == 3);
    CHECK(r.c0 == 4);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 1);
    CHECK(r.identity_holds);
  }

  SUBCASE("two wells make a disconnected sublevel set") {
    auto q = [&](double x, double y, double cx) {
      return (x - cx - dx) * (x - cx - dx) + (y - dy) * (y - dy) - 0.05;
    };
    ScalarField f = centered_square(
        65, [&](double x, double y) { return q(x, y, 0.4) * q(x, y, -0.4); });
    MorseReport r = morse_count_check(f, 0.0);
    CHECK(r.N == 0);
    CHECK(r.c0 == 0);
    CHECK(r.c1 == 0);
    CHECK(r.chi == 2);
    CHECK(r.interior_minima == 2);
    CHECK(r.identity_holds);
  }
}

TEST_CASE("levels through node values are rejected as non-regular") {
  ScalarField f = centered_square(33, [](double x, double y) { return x * x + y * y; });
  CHECK_THROWS_AS(morse_count_check(f, f.at(7, 9)), NonRegularLevel);
}

TEST_CASE("reaper differences have at most one critical point") {
  // Cell strictly inside the reaper strip (0, pi): both horizontal edges cut
  // the strip, so up to one critical point may appear.
  PlanarDomain d = offset_strip(0, 4, 0.7, 1.5);
  ScalarField grid = build_grid(d, 65, 25);
  BoundaryValues bv = resolve_boundary(grid, BoundarySpec::constants(0, 0, 3, 3), 3.0);
  auto [u, rep] = solve_dirichlet(d, bv, 65, 25);
  REQUIRE(rep.converged);
  TiltedReaperParams g{M_PI, -1, 0.0, 0.0};
  CHECK(reaper_difference_count(u, g) <= 1);

  TiltedReaperParams g2{M_PI, +1, 2.0, -0.5};
  CHECK(reaper_difference_count(u, g2) <= 1);
}

TEST_CASE("reaper strips missing a horizontal edge give no critical points") {
  // Centered cell: the bottom edge sits at y < 0, outside the strip (0, pi).
  auto [u, rep] = solve_scherk_cell(M_PI / 2, M_PI / 2, 2.5, 3.0, 49, 25);
  REQUIRE(rep.converged);
  TiltedReaperParams g{M_PI, -1, 0.0, 0.0};
  CHECK(reaper_difference_count(u, g) == 0);
}

TEST_CASE("interior normals of a solved cell are upward unit vectors") {
  auto [u, rep] = solve_scherk_cell(M_PI / 2, M_PI / 2, 2.5, 3.0, 49, 25);
  auto mask = scherk_cell_mask(u, 3.0);
  ScalarField K = gauss_curvature(u);
  int checked = 0;
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      if (!mask[static_cast<size_t>(j) * u.ns() + i]) continue;
      const Vec3 nu = gauss_map(u, i, j);
      CHECK(std::abs(nu.norm() - 1.0) <= 1e-12);
      CHECK(nu.z() > 0);
      CHECK(K.at(i, j) < 0);
      ++checked;
    }
  CHECK(checked > 500);
}

TEST_CASE("plane fits recover exact affine asymptotes") {
  PlanarDomain d = make_truncated_strip(0, 6, 1);
  ScalarField u = sample(d, 121, 21, [](double x, double y) { return 0.3 * x - 0.2 * y + 1; });
  FitReport r = asymptote_fit(u, FitSide::Right, FitModel::Plane, 1.0);
  CHECK(r.xslope == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(r.yslope == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(r.offset == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.sup_dev <= 1e-10);
  const Vec3 expect = Vec3(-0.3, 0.2, 1.0).normalized();
  CHECK((r.normal - expect).norm() <= 1e-10);

  FitReport l = asymptote_fit(u, FitSide::Left, FitModel::Plane, 1.0);
  CHECK(l.xslope == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("tilted reaper fits recover the exact descent slope") {
  const double w = 2 * M_PI;
  PlanarDomain d = make_truncated_strip(0, 30, w);
  ScalarField u = sample(d, 241, 49, [&](double x, double y) {
    if (!(y > 0 && y < w)) return 0.0;  // edge rows are outside the fit band
    return g_w(w, x, y);
  });
  FitReport r = asymptote_fit(u, FitSide::Right, FitModel::TiltedReaper, w);
  CHECK(r.xslope == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-9));
  CHECK(std::abs(r.offset) <= 1e-8);
  CHECK(r.sup_dev <= 1e-8);
}

TEST_CASE("fits demand a genuinely asymptotic window") {
  PlanarDomain d = make_truncated_strip(0, 3.5, 1);
  ScalarField u = sample(d, 71, 21, [](double x, double y) { return 0.1 * x + y; });
  CHECK_THROWS_AS(asymptote_fit(u, FitSide::Right, FitModel::Plane, 1.0), WindowTooSmall);
}
