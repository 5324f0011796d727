#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "mcf/errors.hpp"

namespace mcf {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { Parallelogram, TruncatedStrip };
enum class EdgeId { Bottom = 0, Top = 1, Left = 2, Right = 3 };
enum class NodeClass { Interior, Edge, Corner };

// Planar domain carrying a sheared chart (s,t) -> (x,y) = origin + (s + shear*t, t).
// Parallelograms use shear = cot(alpha); rectangles and truncated strips use
// shear = 0.  The chart has unit Jacobian determinant, so cell areas in (s,t)
// equal cell areas in (x,y).
struct PlanarDomain {
  DomainKind kind = DomainKind::Parallelogram;
  double alpha = 1.5707963267948966;  // corner angle at the origin corner
  double width = 1.0;                 // t-extent (the strip width w)
  double length = 1.0;                // s-extent (the base length L)
  double shear = 0.0;                 // cot(alpha)
  Vec2 origin = Vec2::Zero();         // (x,y) position of chart point (0,0)

  Vec2 chart_to_xy(double s, double t) const {
    return {origin.x() + s + shear * t, origin.y() + t};
  }
  Vec2 xy_to_chart(double x, double y) const {
    const double t = y - origin.y();
    return {x - origin.x() - shear * t, t};
  }

  // Corners in chart order: (0,0), (S,0), (S,T), (0,T).
  std::array<Vec2, 4> corners() const {
    return {chart_to_xy(0, 0), chart_to_xy(length, 0),
            chart_to_xy(length, width), chart_to_xy(0, width)};
  }
};

// Parallelogram P(alpha,w,L) with horizontal edges of length L; lower-left
// corner at the origin, or centered at the origin if `centered` is set.
PlanarDomain make_parallelogram(double alpha, double w, double L, bool centered);

// Axis-aligned rectangle [x_lo,x_hi] x [0,w] used for truncated strips.
PlanarDomain make_truncated_strip(double x_lo, double x_hi, double w);

// Per-edge Dirichlet data.  An edge holds either a finite constant, a symbolic
// +/-infinity (realized as +/-H when resolved), or a sampled profile evaluated
// at node positions (used for truncation edges and sign-flip edges).
struct EdgeData {
  double value = 0.0;
  bool is_inf = false;
  int inf_sign = +1;
  std::function<double(double, double)> profile;  // profile(x, y), optional

  static EdgeData constant(double v) { return {v, false, +1, nullptr}; }
  static EdgeData infinite(int sign) { return {0.0, true, sign, nullptr}; }
  static EdgeData sampled(std::function<double(double, double)> f) {
    EdgeData e;
    e.profile = std::move(f);
    return e;
  }
};

struct BoundarySpec {
  std::array<EdgeData, 4> edge;  // indexed by EdgeId

  static BoundarySpec constants(double bottom, double top, double left, double right) {
    BoundarySpec b;
    b.edge[0] = EdgeData::constant(bottom);
    b.edge[1] = EdgeData::constant(top);
    b.edge[2] = EdgeData::constant(left);
    b.edge[3] = EdgeData::constant(right);
    return b;
  }
};

class ScalarField;

// Concrete boundary values on the grid's boundary nodes, produced by
// resolving a BoundarySpec with surrogate height H.  Corner nodes take the
// average of the two adjacent edge values; nodes where the assigned value
// jumps (corners with disagreeing edges, mid-edge sign flips) are flagged
// singular and define the one-cell exclusion ring used by diagnostics.
struct BoundaryValues {
  int ns = 0, nt = 0;
  std::vector<double> values;       // all ns*nt slots; only boundary entries used
  std::vector<bool> singular;      // boundary discontinuity flags per node
  double at(int i, int j) const { return values[static_cast<size_t>(j) * ns + i]; }
};

struct ChartWindow {
  double s_lo = 0, s_hi = 0, t_lo = 0, t_hi = 0;
};

// Uniform structured grid over a domain's chart rectangle with node values.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const PlanarDomain& dom, int ns, int nt);

  const PlanarDomain& domain() const { return dom_; }
  int ns() const { return ns_; }
  int nt() const { return nt_; }
  double hs() const { return hs_; }
  double ht() const { return ht_; }
  double max_spacing() const { return hs_ > ht_ ? hs_ : ht_; }

  double s_at(int i) const { return i * hs_; }
  double t_at(int j) const { return j * ht_; }
  Vec2 node_xy(int i, int j) const { return dom_.chart_to_xy(s_at(i), t_at(j)); }

  double& at(int i, int j) { return v_[static_cast<size_t>(j) * ns_ + i]; }
  double at(int i, int j) const { return v_[static_cast<size_t>(j) * ns_ + i]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  NodeClass node_class(int i, int j) const;
  bool is_interior(int i, int j) const {
    return i > 0 && i < ns_ - 1 && j > 0 && j < nt_ - 1;
  }

  // Gradient in (x,y) coordinates: central differences at interior nodes,
  // one-sided second-order stencils on the domain edges.
  Vec2 gradient_xy(int i, int j) const;

  // Chart-coordinate derivatives at an interior node (central differences).
  void chart_derivatives(int i, int j, double& vs, double& vt, double& vss,
                         double& vtt, double& vst) const;

  // Value and gradient by bilinear interpolation at chart point (s,t).
  double interpolate(double s, double t) const;

  ChartWindow full_window() const { return {0.0, dom_.length, 0.0, dom_.width}; }

 private:
  PlanarDomain dom_;
  int ns_ = 0, nt_ = 0;
  double hs_ = 0, ht_ = 0;
  std::vector<double> v_;
  double ds(int i, int j) const;
  double dt(int i, int j) const;
};

// Zero-initialized field on an (ns x nt)-node grid; ns, nt >= 3.
ScalarField build_grid(const PlanarDomain& dom, int ns, int nt);

// Sample a closed form u(x,y) at every node.
ScalarField sample(const PlanarDomain& dom, int ns, int nt,
                   const std::function<double(double, double)>& f);

// Resolve symbolic boundary data to concrete node values (surrogate height H
// replaces +/-infinity) and detect singular boundary nodes.
BoundaryValues resolve_boundary(const ScalarField& grid, const BoundarySpec& spec,
                                double H);

// True for interior nodes at Chebyshev index distance > 1 from every singular
// boundary node (the one-cell exclusion ring around corners and bc jumps).
std::vector<bool> interior_mask_excluding_ring(const ScalarField& grid,
                                               const BoundaryValues& bc);

}  // namespace mcf
