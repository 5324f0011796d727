#include "mcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcf/errors.hpp"

namespace mcf {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SecondDerivs {
  double p, q, uxx, uxy, uyy, W;
};

SecondDerivs xy_derivatives(const ScalarField& u, int i, int j) {
  double vs, vt, vss, vtt, vst;
  u.chart_derivatives(i, j, vs, vt, vss, vtt, vst);
  const double b = u.domain().shear;
  SecondDerivs d;
  d.p = vs;
  d.q = vt - b * vs;
  d.uxx = vss;
  d.uxy = vst - b * vss;
  d.uyy = vtt - 2 * b * vst + b * b * vss;
  d.W = std::sqrt(1 + d.p * d.p + d.q * d.q);
  return d;
}

}  // namespace

Vec3 gauss_map(const ScalarField& u, int i, int j) {
  const Vec2 g = u.gradient_xy(i, j);
  Vec3 n(-g.x(), -g.y(), 1.0);
  return n / n.norm();
}

ScalarField gauss_curvature(const ScalarField& u) {
  ScalarField K = build_grid(u.domain(), u.ns(), u.nt());
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      const SecondDerivs d = xy_derivatives(u, i, j);
      const double W2 = d.W * d.W;
      K.at(i, j) = (d.uxx * d.uyy - d.uxy * d.uxy) / (W2 * W2);
    }
  return K;
}

double total_curvature(const ScalarField& u, const ChartWindow& window,
                       const std::vector<bool>* mask) {
  double sum = 0;
  const double cell = u.hs() * u.ht();
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      const double s = u.s_at(i), t = u.t_at(j);
      if (s < window.s_lo || s > window.s_hi || t < window.t_lo || t > window.t_hi)
        continue;
      if (mask && !(*mask)[static_cast<size_t>(j) * u.ns() + i]) continue;
      const SecondDerivs d = xy_derivatives(u, i, j);
      const double W2 = d.W * d.W;
      const double K = (d.uxx * d.uyy - d.uxy * d.uxy) / (W2 * W2);
      sum += std::abs(K) * d.W * cell;
    }
  return sum;
}

namespace {

struct CellGradients {
  // Corner gradients in xy coordinates: [di][dj] for di,dj in {0,1}.
  Vec2 g[2][2];

  Vec2 eval(double a, double b) const {
    return (1 - a) * (1 - b) * g[0][0] + a * (1 - b) * g[1][0] +
           (1 - a) * b * g[0][1] + a * b * g[1][1];
  }
};

// Point on the cell-boundary loop at parameter p in [0,4): corners are at
// integer p, in the order (0,0),(1,0),(1,1),(0,1).
void loop_point(double p, double& a, double& b) {
  const int edge = static_cast<int>(p) & 3;
  const double f = p - std::floor(p);
  switch (edge) {
    case 0: a = f;     b = 0;     break;
    case 1: a = 1;     b = f;     break;
    case 2: a = 1 - f; b = 1;     break;
    default: a = 0;    b = 1 - f; break;
  }
}

int winding_degree(const CellGradients& cg, int samples, double eps) {
  double total = 0;
  Vec2 prev = cg.eval(0, 0);
  if (prev.norm() < eps) throw UnresolvedCritical("gradient vanishes on a cell loop");
  for (int k = 1; k <= samples; ++k) {
    double a, b;
    loop_point(4.0 * k / samples, a, b);
    const Vec2 g = cg.eval(a, b);
    if (g.norm() < eps) throw UnresolvedCritical("gradient vanishes on a cell loop");
    total += std::atan2(prev.x() * g.y() - prev.y() * g.x(), prev.dot(g));
    prev = g;
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

// Newton refinement of the bilinear gradient zero inside the unit cell.
void locate_zero(const CellGradients& cg, double& a, double& b) {
  a = 0.5;
  b = 0.5;
  for (int it = 0; it < 20; ++it) {
    const Vec2 g = cg.eval(a, b);
    const Vec2 da = (1 - b) * (cg.g[1][0] - cg.g[0][0]) + b * (cg.g[1][1] - cg.g[0][1]);
    const Vec2 db = (1 - a) * (cg.g[0][1] - cg.g[0][0]) + a * (cg.g[1][1] - cg.g[1][0]);
    const double det = da.x() * db.y() - da.y() * db.x();
    if (std::abs(det) < 1e-30) break;
    const double step_a = (g.x() * db.y() - g.y() * db.x()) / det;
    const double step_b = (da.x() * g.y() - da.y() * g.x()) / det;
    a = std::clamp(a - step_a, 0.0, 1.0);
    b = std::clamp(b - step_b, 0.0, 1.0);
    if (std::abs(step_a) + std::abs(step_b) < 1e-14) break;
  }
}

bool block_valid(const ScalarField& f, const std::vector<bool>& valid, int i, int j) {
  const int i_lo = std::max(0, i - 1), i_hi = std::min(f.ns() - 1, i + 2);
  const int j_lo = std::max(0, j - 1), j_hi = std::min(f.nt() - 1, j + 2);
  for (int jj = j_lo; jj <= j_hi; ++jj)
    for (int ii = i_lo; ii <= i_hi; ++ii)
      if (!valid[static_cast<size_t>(jj) * f.ns() + ii]) return false;
  return true;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const ScalarField& f,
                                           const CriticalPointOptions& opts) {
  const int samples = std::max(16, opts.loop_samples);
  const int m = opts.margin_cells;
  std::vector<CriticalPoint> out;

  // Nodal gradients, computed once.
  std::vector<Vec2> grad(static_cast<size_t>(f.ns()) * f.nt());
  auto gradient_ready = [&](int i, int j) {
    return !opts.node_valid || block_valid(f, *opts.node_valid, i, j);
  };
  for (int j = 0; j < f.nt(); ++j)
    for (int i = 0; i < f.ns(); ++i)
      if (!opts.node_valid || (*opts.node_valid)[static_cast<size_t>(j) * f.ns() + i])
        grad[static_cast<size_t>(j) * f.ns() + i] = f.gradient_xy(i, j);

  for (int j = m; j < f.nt() - 1 - m; ++j)
    for (int i = m; i < f.ns() - 1 - m; ++i) {
      if (!gradient_ready(i, j)) continue;
      CellGradients cg;
      double gx_min = 1e300, gx_max = -1e300, gy_min = 1e300, gy_max = -1e300;
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) {
          const Vec2 g = grad[static_cast<size_t>(j + dj) * f.ns() + (i + di)];
          cg.g[di][dj] = g;
          gx_min = std::min(gx_min, g.x());
          gx_max = std::max(gx_max, g.x());
          gy_min = std::min(gy_min, g.y());
          gy_max = std::max(gy_max, g.y());
        }
      if (gx_min > 0 || gx_max < 0 || gy_min > 0 || gy_max < 0) continue;

      const int degree = winding_degree(cg, samples, opts.resolve_eps);
      if (degree == 0) continue;

      double a, b;
      locate_zero(cg, a, b);
      CriticalPoint cp;
      cp.s = f.s_at(i) + a * f.hs();
      cp.t = f.t_at(j) + b * f.ht();
      cp.value = f.interpolate(cp.s, cp.t);
      cp.degree = degree;
      if (degree < 0) {
        cp.multiplicity = -degree;
      } else {
        cp.is_extremum = true;
        // Compare against the cell-loop ring to decide min vs max.
        double ring_min = 1e300;
        for (int k = 0; k < samples; ++k) {
          double ra, rb;
          loop_point(4.0 * k / samples, ra, rb);
          ring_min = std::min(ring_min, f.interpolate(f.s_at(i) + ra * f.hs(),
                                                      f.t_at(j) + rb * f.ht()));
        }
        cp.is_minimum = cp.value < ring_min;
      }
      out.push_back(cp);
    }
  return out;
}

namespace {

// 8-neighborhood comparison: returns +1 if F(i,j) is a strict local max over
// in-grid neighbors, -1 if a strict local min, 0 otherwise.
int patch_extremum(const ScalarField& F, int i, int j) {
  const double v = F.at(i, j);
  bool lt_all = true, gt_all = true;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      if (di == 0 && dj == 0) continue;
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= F.ns() || jj < 0 || jj >= F.nt()) continue;
      const double nb = F.at(ii, jj);
      if (!(v < nb)) lt_all = false;
      if (!(v > nb)) gt_all = false;
    }
  if (lt_all) return -1;
  if (gt_all) return +1;
  return 0;
}

}  // namespace

MorseReport morse_count_check(const ScalarField& F, double a,
                              const CriticalPointOptions& opts) {
  MorseReport rep;
  rep.level = a;

  const int ns = F.ns(), nt = F.nt();
  const double scale = 1 + std::abs(a);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i)
      if (std::abs(F.at(i, j) - a) < 1e-8 * scale)
        throw NonRegularLevel("node value within 1e-8 of the level");

  // Euler characteristic of the sublevel set, via the full subcomplex of the
  // grid triangulation (cells split along the (i,j)-(i+1,j+1) diagonal): a
  // simplex is included when all of its vertices satisfy F <= a.
  auto in = [&](int i, int j) { return F.at(i, j) <= a; };
  long V = 0, E = 0, T = 0;
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i)
      if (in(i, j)) ++V;
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i + 1 < ns; ++i)
      if (in(i, j) && in(i + 1, j)) ++E;
  for (int j = 0; j + 1 < nt; ++j)
    for (int i = 0; i < ns; ++i)
      if (in(i, j) && in(i, j + 1)) ++E;
  for (int j = 0; j + 1 < nt; ++j)
    for (int i = 0; i + 1 < ns; ++i) {
      const bool c00 = in(i, j), c10 = in(i + 1, j), c01 = in(i, j + 1),
                 c11 = in(i + 1, j + 1);
      if (c00 && c11) ++E;                // diagonal
      if (c00 && c10 && c11) ++T;         // lower triangle
      if (c00 && c11 && c01) ++T;         // upper triangle
    }
  rep.chi = static_cast<int>(V - E + T);

  // Boundary cycle in order; c0/c1 use strict comparisons along the cycle and
  // the 8-neighborhood patch test.
  std::vector<std::pair<int, int>> cycle;
  for (int i = 0; i < ns; ++i) cycle.push_back({i, 0});
  for (int j = 1; j < nt; ++j) cycle.push_back({ns - 1, j});
  for (int i = ns - 2; i >= 0; --i) cycle.push_back({i, nt - 1});
  for (int j = nt - 2; j >= 1; --j) cycle.push_back({0, j});
  const int nb = static_cast<int>(cycle.size());
  for (int k = 0; k < nb; ++k) {
    const auto [i, j] = cycle[k];
    const double v = F.at(i, j);
    if (v > a) continue;
    const double vp = F.at(cycle[(k + nb - 1) % nb].first, cycle[(k + nb - 1) % nb].second);
    const double vn = F.at(cycle[(k + 1) % nb].first, cycle[(k + 1) % nb].second);
    const int patch = patch_extremum(F, i, j);
    if (v < vp && v < vn && patch == -1) ++rep.c0;
    if (v > vp && v > vn && patch != +1) ++rep.c1;
  }

  // Interior critical points from the winding classification.
  CriticalPointOptions cp_opts = opts;
  for (const CriticalPoint& cp : critical_points(F, cp_opts)) {
    if (cp.value > a) continue;
    if (cp.is_extremum) {
      if (cp.is_minimum)
        ++rep.interior_minima;
      else
        ++rep.interior_maxima;
    } else {
      rep.N += cp.multiplicity;
    }
  }

  rep.identity_holds =
      rep.N == rep.c0 - rep.c1 - rep.chi + rep.interior_minima + rep.interior_maxima;
  return rep;
}

int reaper_difference_count(const ScalarField& u, const TiltedReaperParams& g,
                            int margin_cells) {
  const ScalarField& base = u;
  ScalarField d = build_grid(base.domain(), base.ns(), base.nt());
  std::vector<bool> valid(static_cast<size_t>(base.ns()) * base.nt(), false);
  const double y_eps = 1e-9 * g.w;
  for (int j = 0; j < base.nt(); ++j)
    for (int i = 0; i < base.ns(); ++i) {
      const Vec2 xy = base.node_xy(i, j);
      if (xy.y() > y_eps && xy.y() < g.w - y_eps) {
        d.at(i, j) = tilted_reaper(g, xy.x(), xy.y()) - base.at(i, j);
        valid[static_cast<size_t>(j) * base.ns() + i] = true;
      }
    }
  CriticalPointOptions opts;
  opts.margin_cells = margin_cells;
  opts.node_valid = &valid;
  int count = 0;
  for (const CriticalPoint& cp : critical_points(d, opts))
    count += cp.is_extremum ? 1 : cp.multiplicity;
  return count;
}

FitReport asymptote_fit(const ScalarField& u, FitSide side, FitModel model,
                        double w_model, const FitOptions& opts) {
  const double S = u.domain().length;
  const double w_dom = u.domain().width;
  double s_lo, s_hi;
  if (side == FitSide::Right) {
    s_hi = S - opts.trim;
    s_lo = s_hi - w_model;
  } else {
    s_lo = opts.trim;
    s_hi = s_lo + w_model;
  }
  if (s_lo < 0 || s_hi > S)
    throw WindowTooSmall("fit window exceeds the grid");
  // Require the grid to continue at least 3*w_model beyond the inner edge of
  // the window, so the fit sees genuinely asymptotic data.
  const double beyond = (side == FitSide::Right) ? s_lo : S - s_hi;
  if (beyond < 3 * w_model)
    throw WindowTooSmall("grid extends less than 3 fitted widths beyond the window");

  const double t_lo = opts.band_lo * w_dom, t_hi = opts.band_hi * w_dom;

  std::vector<Vec3> pts;  // (x, y, z) samples
  for (int j = 0; j < u.nt(); ++j) {
    const double t = u.t_at(j);
    if (t < t_lo || t > t_hi) continue;
    for (int i = 0; i < u.ns(); ++i) {
      const double s = u.s_at(i);
      if (s < s_lo - 1e-12 || s > s_hi + 1e-12) continue;
      const Vec2 xy = u.node_xy(i, j);
      double z = u.at(i, j);
      if (model == FitModel::TiltedReaper) {
        const double ww = w_model;
        z -= (ww / kPi) * (ww / kPi) * std::log(std::sin(kPi * t / ww));
      }
      pts.push_back({xy.x(), xy.y(), z});
    }
  }
  if (pts.size() < 8) throw WindowTooSmall("fit window holds fewer than 8 nodes");

  FitReport rep;
  if (model == FitModel::Plane) {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Vec3 rhs = Vec3::Zero();
    for (const Vec3& p : pts) {
      const Vec3 row(1.0, p.x(), p.y());
      A += row * row.transpose();
      rhs += row * p.z();
    }
    const Vec3 c = A.ldlt().solve(rhs);
    rep.offset = c[0];
    rep.xslope = c[1];
    rep.yslope = c[2];
    Vec3 n(-c[1], -c[2], 1.0);
    rep.normal = n / n.norm();
    for (const Vec3& p : pts)
      rep.sup_dev = std::max(rep.sup_dev,
                             std::abs(p.z() - (c[0] + c[1] * p.x() + c[2] * p.y())));
  } else {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Vec2 rhs = Vec2::Zero();
    for (const Vec3& p : pts) {
      const Vec2 row(1.0, p.x());
      A += row * row.transpose();
      rhs += row * p.z();
    }
    const Vec2 c = A.ldlt().solve(rhs);
    rep.offset = c[0];
    rep.xslope = c[1];
    for (const Vec3& p : pts)
      rep.sup_dev = std::max(rep.sup_dev, std::abs(p.z() - (c[0] + c[1] * p.x())));
  }
  return rep;
}

}  // namespace mcf
