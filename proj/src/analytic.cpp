#include "mcf/analytic.hpp"

#include <cmath>

namespace mcf {

double grim_reaper(double x, double y) {
  (void)x;
  if (!(y > 0.0 && y < M_PI))
    throw IllPosedDomain("grim reaper is defined for y in (0, pi)");
  return std::log(std::sin(y));
}

double tilted_reaper(const TiltedReaperParams& p, double x, double y) {
  if (!(p.w >= M_PI)) throw IllPosedDomain("tilted reaper needs w >= pi");
  if (!(y > 0.0 && y < p.w))
    throw IllPosedDomain("tilted reaper is defined for y in (0, w)");
  const double r = p.w / M_PI;
  const double tilt = std::sqrt(r * r - 1.0);
  return r * r * std::log(std::sin(y * M_PI / p.w)) + p.sign * (x - p.x0) * tilt +
         p.z0;
}

double g_w_slope(double w) {
  const double r = w / M_PI;
  return -std::sqrt(r * r - 1.0);
}

double g_w(double w, double x, double y) {
  TiltedReaperParams p;
  p.w = w;
  p.sign = -1;
  // Normalize so g_w(0, w/2) = 0; the y-term vanishes at y = w/2.
  p.x0 = 0.0;
  p.z0 = 0.0;
  return tilted_reaper(p, x, y);
}

double g_w_prime(double w, double x, double y) { return g_w(w, -x, y); }

namespace detail {

// Non-divergence translator operator pieces from chart derivatives.
struct PointOps {
  double p, q, X, M, Y, W2, W, F, R;
};

inline PointOps point_ops(double shear, double vs, double vt, double vss,
                          double vtt, double vst) {
  PointOps o;
  const double b = shear;
  o.p = vs;
  o.q = vt - b * vs;
  o.X = vss;
  o.M = vst - b * vss;
  o.Y = vtt - 2 * b * vst + b * b * vss;
  o.W2 = 1 + o.p * o.p + o.q * o.q;
  o.W = std::sqrt(o.W2);
  const double A = (1 + o.q * o.q) * o.X - 2 * o.p * o.q * o.M +
                   (1 + o.p * o.p) * o.Y;
  o.F = A + o.W2;
  o.R = -o.F / (o.W2 * o.W);
  return o;
}

}  // namespace detail

ScalarField translator_residual(const ScalarField& u) {
  ScalarField r(u.domain(), u.ns(), u.nt());
  const double b = u.domain().shear;
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      double vs, vt, vss, vtt, vst;
      u.chart_derivatives(i, j, vs, vt, vss, vtt, vst);
      r.at(i, j) = detail::point_ops(b, vs, vt, vss, vtt, vst).R;
    }
  return r;
}

double residual_sup_norm(const ScalarField& u, const std::vector<bool>* mask) {
  const ScalarField r = translator_residual(u);
  double m = 0;
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      if (mask && !(*mask)[static_cast<size_t>(j) * u.ns() + i]) continue;
      m = std::max(m, std::abs(r.at(i, j)));
    }
  return m;
}

namespace {

// Midpoint-rule sweep: f(u_mid, ux, uy) integrated over cells whose centers
// lie in the window.  The sheared chart is area preserving, so each cell
// contributes hs*ht.  Cell-centered derivatives use the four corner values.
template <class F>
double cell_integral(const ScalarField& u, const ChartWindow& win, F&& f) {
  const double hs = u.hs(), ht = u.ht(), b = u.domain().shear;
  double total = 0;
  for (int j = 0; j + 1 < u.nt(); ++j)
    for (int i = 0; i + 1 < u.ns(); ++i) {
      const double sc = (u.s_at(i) + u.s_at(i + 1)) / 2;
      const double tc = (u.t_at(j) + u.t_at(j + 1)) / 2;
      if (sc < win.s_lo || sc > win.s_hi || tc < win.t_lo || tc > win.t_hi)
        continue;
      const double v00 = u.at(i, j), v10 = u.at(i + 1, j);
      const double v01 = u.at(i, j + 1), v11 = u.at(i + 1, j + 1);
      const double um = (v00 + v10 + v01 + v11) / 4;
      const double vs = ((v10 - v00) + (v11 - v01)) / (2 * hs);
      const double vt = ((v01 - v00) + (v11 - v10)) / (2 * ht);
      const double ux = vs;
      const double uy = vt - b * vs;
      total += f(um, ux, uy) * hs * ht;
    }
  return total;
}

ChartWindow window_of_region(const ScalarField& u, const PlanarDomain& region) {
  const PlanarDomain& d = u.domain();
  const Vec2 lo = d.xy_to_chart(region.chart_to_xy(0, 0).x(),
                                region.chart_to_xy(0, 0).y());
  const Vec2 hi = d.xy_to_chart(region.chart_to_xy(region.length, region.width).x(),
                                region.chart_to_xy(region.length, region.width).y());
  ChartWindow w{lo.x(), hi.x(), lo.y(), hi.y()};
  const double eps = 1e-9 * (1 + d.length + d.width);
  if (w.s_lo < -eps || w.t_lo < -eps || w.s_hi > d.length + eps ||
      w.t_hi > d.width + eps)
    throw RegionOutsideGrid("integration region extends outside the grid domain");
  return w;
}

}  // namespace

double ilmanen_area(const ScalarField& u, const ChartWindow& window) {
  return cell_integral(u, window, [](double um, double ux, double uy) {
    return std::exp(-um) * std::sqrt(1 + ux * ux + uy * uy);
  });
}

double ilmanen_area(const ScalarField& u, const PlanarDomain& region) {
  return ilmanen_area(u, window_of_region(u, region));
}

double flux_integral(const ScalarField& u, const ChartWindow& window) {
  return cell_integral(u, window, [](double, double ux, double uy) {
    return 1.0 / std::sqrt(1 + ux * ux + uy * uy);
  });
}

}  // namespace mcf
