#pragma once

#include <utility>

#include "mcf/analytic.hpp"
#include "mcf/geometry.hpp"

namespace mcf {

struct SolverConfig {
  double tolerance = 1e-10;        // sup-norm of the interior residual
  int max_newton = 50;
  int max_halvings = 30;           // backtracking line-search depth
  double sufficient_decrease = 1e-4;
  bool continuation = true;        // allow the boundary-ramp rescue on stall
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  int damping_events = 0;          // total step halvings
  int ns = 0, nt = 0;
};

// Solve the translator equation -Div(grad u/W) = 1/W with Dirichlet data on
// an (ns x nt) grid over `dom`.  Damped Newton with an analytic Jacobian;
// the initial iterate solves the linearization at the flat state (a Poisson
// problem) unless `guess` (same dims) is given.  Throws NonConvergence on
// failure.
std::pair<ScalarField, SolveReport> solve_dirichlet(
    const PlanarDomain& dom, const BoundaryValues& bc, int ns, int nt,
    const SolverConfig& cfg = {}, const ScalarField* guess = nullptr);

// Scherk cell problem: centered parallelogram P'(alpha,w,L) with boundary
// value 0 on the horizontal edges and h on the other two.  Grid dimensions
// must be odd so the cell center (0,0) is a node.
std::pair<ScalarField, SolveReport> solve_scherk_cell(
    double alpha, double w, double L, double h, int ns, int nt,
    const SolverConfig& cfg = {}, const ScalarField* guess = nullptr);

// One continuation move for the scherk cell: adjust the base length so that
// the cell-center value equals tau while the translator equation stays
// satisfied.  The bordered Newton system treats the field and L jointly as
// unknowns, starting from `guess` (required, odd dims) and length L0.  A
// stalled iteration reports converged=false instead of throwing, so callers
// can shorten their continuation step and retry.
struct PinnedCellResult {
  ScalarField field;
  SolveReport report;
  double L = 0;
};
PinnedCellResult solve_scherk_cell_pinned(double alpha, double w, double h,
                                          double tau, double L0, int ns, int nt,
                                          const ScalarField* guess,
                                          const SolverConfig& cfg = {});

// Transfinite (Coons) interpolation of resolved boundary values; also the
// solver's default initial iterate.
ScalarField transfinite_guess(const PlanarDomain& dom, const BoundaryValues& bc,
                              int ns, int nt);

}  // namespace mcf
