#pragma once

#include "mcf/geometry.hpp"

namespace mcf {

// Grim reaper graph u(x,y) = log(sin y) on R x (0, pi); independent of x.
double grim_reaper(double x, double y);

// Tilted grim reaper of width w >= pi:
//   u(x,y) = (w/pi)^2 log(sin(y pi / w)) + sign * x * sqrt((w/pi)^2 - 1).
struct TiltedReaperParams {
  double w = M_PI;
  int sign = -1;     // slope sign of the x term
  double x0 = 0.0;   // horizontal shift
  double z0 = 0.0;   // vertical shift
};
double tilted_reaper(const TiltedReaperParams& p, double x, double y);

// Downward-tilted representative g_w: sign = -1, normalized so that
// g_w(0, w/2) = 0.  For w = pi this is the grim reaper shifted to vanish
// at the strip center.
double g_w(double w, double x, double y);
// Mirror image g_w'(x,y) = g_w(-x,y).
double g_w_prime(double w, double x, double y);
// Slope of the x-term of g_w: -sqrt((w/pi)^2 - 1).
double g_w_slope(double w);

// Pointwise translator-equation residual
//   -Div(grad u / W) - 1/W,  W = sqrt(1 + |grad u|^2),
// evaluated at interior nodes with second-order central differences in the
// sheared chart.  Boundary and corner entries of the returned field are 0.
ScalarField translator_residual(const ScalarField& u);

// Sup-norm of the residual over interior nodes (optionally restricted by a
// node mask of size ns*nt).
double residual_sup_norm(const ScalarField& u,
                         const std::vector<bool>* mask = nullptr);

// Area of the graph of u over `window` in the Ilmanen metric e^{-z} delta:
//   integral of e^{-u} sqrt(1 + |grad u|^2) dx dy,
// by the midpoint rule over grid cells whose centers lie in the window.
double ilmanen_area(const ScalarField& u, const ChartWindow& window);
double ilmanen_area(const ScalarField& u, const PlanarDomain& region);

// Midpoint-rule integral of 1/sqrt(1 + |grad u|^2) over the window (the
// right-hand side of the flux identity).
double flux_integral(const ScalarField& u, const ChartWindow& window);

}  // namespace mcf
