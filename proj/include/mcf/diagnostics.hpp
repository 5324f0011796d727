#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mcf/analytic.hpp"
#include "mcf/geometry.hpp"

namespace mcf {

using Vec3 = Eigen::Vector3d;

// Upward unit normal nu = (-u_x, -u_y, 1)/W at a node.
Vec3 gauss_map(const ScalarField& u, int i, int j);

// Gauss curvature K = (u_xx u_yy - u_xy^2) / (1 + |grad u|^2)^2 at interior
// nodes (boundary entries are 0).
ScalarField gauss_curvature(const ScalarField& u);

// Integral of |K| over the graph (area element W dx dy), summed over
// interior nodes inside the window; an optional node mask (size ns*nt)
// restricts the sum further.
double total_curvature(const ScalarField& u, const ChartWindow& window,
                       const std::vector<bool>* mask = nullptr);

struct CriticalPoint {
  double s = 0, t = 0;   // chart coordinates
  double value = 0;      // F at the point (bilinear)
  int degree = 0;        // winding index of grad F around the cell loop
  int multiplicity = 0;  // -degree for saddles; 0 for extrema
  bool is_extremum = false;
  bool is_minimum = false;  // meaningful when is_extremum
};

struct CriticalPointOptions {
  int loop_samples = 64;        // >= 16
  int margin_cells = 0;         // cells dropped along the grid boundary
  double resolve_eps = 1e-10;   // UnresolvedCritical below this |grad|
  const std::vector<bool>* node_valid = nullptr;  // restrict to valid nodes
};

// Locate and classify interior critical points by the winding index of the
// nodal gradient, bilinearly interpolated around each candidate cell loop.
// Saddles carry multiplicity n-1 = -degree; extrema are reported separately.
std::vector<CriticalPoint> critical_points(const ScalarField& f,
                                           const CriticalPointOptions& opts = {});

struct MorseReport {
  double level = 0;
  int N = 0;                // saddle count with multiplicity in {F <= a}
  int c0 = 0;               // boundary minima that are patch minima
  int c1 = 0;               // boundary maxima that are not patch maxima
  int chi = 0;              // V - E + T of the sublevel triangulation
  int interior_minima = 0;  // interior local minima with F <= a
  int interior_maxima = 0;
  bool identity_holds = false;
};

// Morse-style count over the sublevel set {F <= a}: checks
//   N = c0 - c1 - chi + (interior extrema),
// the saddle-only counting identity extended by the interior-extremum terms
// (extrema enter through chi, not N).  Throws NonRegularLevel when a node
// value lies within 1e-8 of `a`.
MorseReport morse_count_check(const ScalarField& F, double a,
                              const CriticalPointOptions& opts = {});

// Number of critical points of (tilted reaper) - u over the part of the
// reaper strip covered by u's grid, `margin_cells` away from every edge of
// the overlap.
int reaper_difference_count(const ScalarField& u, const TiltedReaperParams& g,
                            int margin_cells = 2);

enum class FitSide { Left, Right };
enum class FitModel { Plane, TiltedReaper };

struct FitOptions {
  double trim = 0;      // x-length dropped at the outer end of the window
  double band_lo = 0.15;  // y-band (fraction of the strip width)
  double band_hi = 0.85;
};

struct FitReport {
  double xslope = 0, yslope = 0, offset = 0;
  double sup_dev = 0;  // sup |u - model| over the fit window
  Vec3 normal = Vec3::Zero();  // fitted graph normal (plane model)
};

// Least-squares fit of an asymptotic model over the outermost window of
// width w_model on the given side.  The grid must extend at least 3*w_model
// beyond the window (WindowTooSmall otherwise).
FitReport asymptote_fit(const ScalarField& u, FitSide side, FitModel model,
                        double w_model, const FitOptions& opts = {});

}  // namespace mcf
