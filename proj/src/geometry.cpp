#include "mcf/geometry.hpp"

#include <cmath>

namespace mcf {

PlanarDomain make_parallelogram(double alpha, double w, double L, bool centered) {
  if (!(alpha > 0.0) || !(alpha < M_PI))
    throw IllPosedDomain("corner angle must lie in (0, pi)");
  if (!(w > 0.0) || !(L > 0.0))
    throw IllPosedDomain("parallelogram needs positive width and length");
  PlanarDomain d;
  d.kind = DomainKind::Parallelogram;
  d.alpha = alpha;
  d.width = w;
  d.length = L;
  d.shear = std::cos(alpha) / std::sin(alpha);
  d.origin = Vec2::Zero();
  if (centered) d.origin = Vec2(-L / 2 - d.shear * w / 2, -w / 2);
  return d;
}

PlanarDomain make_truncated_strip(double x_lo, double x_hi, double w) {
  if (!(x_hi > x_lo)) throw IllPosedDomain("strip needs x_hi > x_lo");
  if (!(w > 0.0)) throw IllPosedDomain("strip needs positive width");
  PlanarDomain d;
  d.kind = DomainKind::TruncatedStrip;
  d.alpha = M_PI / 2;
  d.width = w;
  d.length = x_hi - x_lo;
  d.shear = 0.0;
  d.origin = Vec2(x_lo, 0.0);
  return d;
}

ScalarField::ScalarField(const PlanarDomain& dom, int ns, int nt)
    : dom_(dom), ns_(ns), nt_(nt) {
  if (ns < 3 || nt < 3) throw IllPosedDomain("grid needs at least 3 nodes per side");
  hs_ = dom.length / (ns - 1);
  ht_ = dom.width / (nt - 1);
  v_.assign(static_cast<size_t>(ns) * nt, 0.0);
}

NodeClass ScalarField::node_class(int i, int j) const {
  const bool si = (i == 0 || i == ns_ - 1);
  const bool sj = (j == 0 || j == nt_ - 1);
  if (si && sj) return NodeClass::Corner;
  if (si || sj) return NodeClass::Edge;
  return NodeClass::Interior;
}

double ScalarField::ds(int i, int j) const {
  if (i > 0 && i < ns_ - 1) return (at(i + 1, j) - at(i - 1, j)) / (2 * hs_);
  if (i == 0) return (-3 * at(0, j) + 4 * at(1, j) - at(2, j)) / (2 * hs_);
  return (3 * at(ns_ - 1, j) - 4 * at(ns_ - 2, j) + at(ns_ - 3, j)) / (2 * hs_);
}

double ScalarField::dt(int i, int j) const {
  if (j > 0 && j < nt_ - 1) return (at(i, j + 1) - at(i, j - 1)) / (2 * ht_);
  if (j == 0) return (-3 * at(i, 0) + 4 * at(i, 1) - at(i, 2)) / (2 * ht_);
  return (3 * at(i, nt_ - 1) - 4 * at(i, nt_ - 2) + at(i, nt_ - 3)) / (2 * ht_);
}

Vec2 ScalarField::gradient_xy(int i, int j) const {
  const double vs = ds(i, j);
  const double vt = dt(i, j);
  // u_x = v_s, u_y = v_t - shear*v_s under x = s + shear*t, y = t.
  return {vs, vt - dom_.shear * vs};
}

void ScalarField::chart_derivatives(int i, int j, double& vs, double& vt,
                                    double& vss, double& vtt, double& vst) const {
  vs = (at(i + 1, j) - at(i - 1, j)) / (2 * hs_);
  vt = (at(i, j + 1) - at(i, j - 1)) / (2 * ht_);
  vss = (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (hs_ * hs_);
  vtt = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (ht_ * ht_);
  vst = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
        (4 * hs_ * ht_);
}

double ScalarField::interpolate(double s, double t) const {
  double fi = s / hs_;
  double fj = t / ht_;
  int i = static_cast<int>(std::floor(fi));
  int j = static_cast<int>(std::floor(fj));
  i = std::max(0, std::min(ns_ - 2, i));
  j = std::max(0, std::min(nt_ - 2, j));
  const double a = fi - i, b = fj - j;
  return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
         (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
}

ScalarField build_grid(const PlanarDomain& dom, int ns, int nt) {
  return ScalarField(dom, ns, nt);
}

ScalarField sample(const PlanarDomain& dom, int ns, int nt,
                   const std::function<double(double, double)>& f) {
  ScalarField u(dom, ns, nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) {
      const Vec2 p = u.node_xy(i, j);
      u.at(i, j) = f(p.x(), p.y());
    }
  return u;
}

BoundaryValues resolve_boundary(const ScalarField& grid, const BoundarySpec& spec,
                                double H) {
  if (H <= 0) throw IllPosedDomain("surrogate height H must be positive");
  const int ns = grid.ns(), nt = grid.nt();
  BoundaryValues bv;
  bv.ns = ns;
  bv.nt = nt;
  bv.values.assign(static_cast<size_t>(ns) * nt, 0.0);
  bv.singular.assign(static_cast<size_t>(ns) * nt, false);

  auto edge_value = [&](EdgeId e, int i, int j) {
    const EdgeData& d = spec.edge[static_cast<int>(e)];
    const Vec2 p = grid.node_xy(i, j);
    if (d.profile) return d.profile(p.x(), p.y());
    if (d.is_inf) return d.inf_sign > 0 ? H : -H;
    return d.value;
  };
  auto set = [&](int i, int j, double v) {
    bv.values[static_cast<size_t>(j) * ns + i] = v;
  };

  for (int i = 1; i < ns - 1; ++i) {
    set(i, 0, edge_value(EdgeId::Bottom, i, 0));
    set(i, nt - 1, edge_value(EdgeId::Top, i, nt - 1));
  }
  for (int j = 1; j < nt - 1; ++j) {
    set(0, j, edge_value(EdgeId::Left, 0, j));
    set(ns - 1, j, edge_value(EdgeId::Right, ns - 1, j));
  }
  // Corner nodes average the two adjacent edge values at that corner; a
  // disagreement between the edges makes the corner singular.
  const struct {
    int i, j;
    EdgeId a, b;
  } corners[4] = {{0, 0, EdgeId::Bottom, EdgeId::Left},
                  {ns - 1, 0, EdgeId::Bottom, EdgeId::Right},
                  {0, nt - 1, EdgeId::Top, EdgeId::Left},
                  {ns - 1, nt - 1, EdgeId::Top, EdgeId::Right}};
  double scale = 1.0;
  for (double v : bv.values) scale = std::max(scale, std::abs(v));
  for (const auto& c : corners) {
    const double va = edge_value(c.a, c.i, c.j);
    const double vb = edge_value(c.b, c.i, c.j);
    scale = std::max({scale, std::abs(va), std::abs(vb)});
    set(c.i, c.j, (va + vb) / 2);
    if (std::abs(va - vb) > 1e-12 * scale)
      bv.singular[static_cast<size_t>(c.j) * ns + c.i] = true;
  }
  // Mid-edge sign flips jump by O(scale) between adjacent nodes; smooth
  // profiles step by O(spacing).  A quarter of the bc scale separates them.
  auto check_pair = [&](int i0, int j0, int i1, int j1) {
    if (std::abs(bv.at(i0, j0) - bv.at(i1, j1)) > 0.25 * scale) {
      bv.singular[static_cast<size_t>(j0) * ns + i0] = true;
      bv.singular[static_cast<size_t>(j1) * ns + i1] = true;
    }
  };
  for (int i = 0; i + 1 < ns; ++i) {
    check_pair(i, 0, i + 1, 0);
    check_pair(i, nt - 1, i + 1, nt - 1);
  }
  for (int j = 0; j + 1 < nt; ++j) {
    check_pair(0, j, 0, j + 1);
    check_pair(ns - 1, j, ns - 1, j + 1);
  }
  return bv;
}

std::vector<bool> interior_mask_excluding_ring(const ScalarField& grid,
                                               const BoundaryValues& bc) {
  const int ns = grid.ns(), nt = grid.nt();
  std::vector<bool> mask(static_cast<size_t>(ns) * nt, false);
  for (int j = 1; j < nt - 1; ++j)
    for (int i = 1; i < ns - 1; ++i) mask[static_cast<size_t>(j) * ns + i] = true;
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) {
      if (!bc.singular[static_cast<size_t>(j) * ns + i]) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < ns && jj >= 0 && jj < nt)
            mask[static_cast<size_t>(jj) * ns + ii] = false;
        }
    }
  return mask;
}

}  // namespace mcf
