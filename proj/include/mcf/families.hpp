#pragma once

#include <optional>
#include <vector>

#include "mcf/solver.hpp"

namespace mcf {

struct FindLOptions {
  // Bracket for the base length; defaults to [w/sin(alpha), w/sin(alpha)+4w].
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
  double center_tol = 1e-3;   // |u(0,0) - h/2| target
  int max_bisect = 80;        // total PDE-solve budget for the search
};

struct FindLResult {
  double L = 0;
  double center = 0;          // u(0,0) at the returned L
  int evaluations = 0;
  ScalarField field;          // solution at the returned L
};

// Shooting step: find L with u_L^h(0,0) = h/2.  The root is tracked by
// continuation: the center value is pinned while L is solved for, the pin is
// walked to h/2 at a low surrogate height where the solution family is
// single-sheeted, and the height is then raised with the pin held at half of
// it.  The decrease of the center value in L is checked at macro scale: half
// a width past the settled length the center must sit below h/2
// (MonotonicityViolation if not).  Throws BracketError when the settled
// length falls outside the bracket or no crossing is reachable.  `warm`
// (same grid dims) seeds the run from a previous height's solution.
FindLResult find_L(double alpha, double w, double h, int ns, int nt,
                   const SolverConfig& cfg = {}, const FindLOptions& opts = {},
                   const ScalarField* warm = nullptr);

struct IdentityReport {
  double h = 0;
  double L = 0;
  double lhs = 0;       // 2L - 2w/sin(alpha)
  double rhs = 0;       // integral of 1/W over the cell
  double mismatch = 0;  // |lhs - rhs| / rhs
};

struct ScherkResult {
  double alpha = 0, w = 0;
  double L_estimate = 0;
  std::vector<double> h_schedule;
  std::vector<double> L_values;      // one per h actually run
  std::vector<double> increments;    // |L_k - L_{k-1}|
  std::vector<IdentityReport> identity;  // one per h
  ScalarField field;                 // solution at the final (h, L)
};

struct ScherkOptions {
  FindLOptions find_L;
  double cauchy_tol = 1e-4;  // stop the schedule early below this increment
};

// Desk-scale Scherk construction: run the shooting step over an increasing
// h schedule with warm starts, reporting the flux-identity mismatch at each
// stage.  L_estimate is the last L.
ScherkResult estimate_scherk(double alpha, double w,
                             const std::vector<double>& h_schedule, int ns,
                             int nt, const SolverConfig& cfg = {},
                             const ScherkOptions& opts = {});

struct ScherkenoidResult {
  ScalarField field;
  SolveReport report;
  double fitted_offset = 0;  // constant added to the truncation-edge profile
  std::vector<bool> interior_mask;  // interior nodes off the singular ring
};

// Scherkenoid patch: strip of width w >= pi behind the slanted edge through
// the origin, truncated at chart length c - w*cot(alpha) past the slanted
// edge.  The ideal boundary data is +inf on the slanted edge and -inf on the
// two horizontal edges; the surrogates are +/-h.  The truncation edge carries
// the far-field profile g_w + C, where the constant C is fitted one width
// inside the cut and refined by warm re-solves until it settles.  Large h is
// reached by a doubling continuation ladder of warm-started solves.
ScherkenoidResult solve_scherkenoid(double alpha, double w, double c, double h,
                                    int ns, int nt,
                                    const SolverConfig& cfg = {});

struct HelicoidResult {
  ScalarField field;
  SolveReport report;
  double xhat = 0;
  int sweeps = 0;
  bool xhat_converged = false;
  std::vector<double> xhat_history;
  std::vector<bool> interior_mask;
};

// Helicoid-like patch on [-a,a] x [0,w], w < pi.  Boundary data flips sign
// at x = 0 on the bottom edge and at x = xhat on the top edge; the end edges
// carry linear ramps.  xhat is computed by the fixed point
//   xhat <- (1/2) * integral of 1/W over the domain,
// starting from 0, stopping when the update falls below one grid spacing.
HelicoidResult solve_helicoid_like(double w, double a, double H, int ns, int nt,
                                   const SolverConfig& cfg = {},
                                   int max_sweeps = 20);

struct PitchforkResult {
  ScalarField field;
  SolveReport report;
  double fitted_offset = 0;  // constant added to the right-end profile
  std::vector<bool> interior_mask;
};

// Exclusion mask for a Scherk cell solved with end height h: interior nodes
// away from the four singular corners.
std::vector<bool> scherk_cell_mask(const ScalarField& u, double h);

// Pitchfork patch on [-a,a] x [0,w], w >= pi.  Bottom edge flips sign at
// x = 0, top edge is -H, left end is a linear ramp, and the right end
// carries the tilted-reaper profile g_w(a,y) plus a fitted constant
// (computed from a provisional solve and then re-imposed).
PitchforkResult solve_pitchfork(double w, double a, double H, int ns, int nt,
                                const SolverConfig& cfg = {});

struct NonexistenceEntry {
  double h = 0;
  std::vector<std::pair<double, double>> centers;  // (L, u_L^h(0,0))
  bool sign_change = false;  // consecutive centers straddle h/2
  double ceiling = 0;        // max center value over the L samples
};

struct NonexistenceReport {
  double alpha = 0, w = 0;
  std::vector<NonexistenceEntry> entries;
  double ceiling = 0;  // max over all entries
};

// Sweep the Scherk-cell center value over L samples for each h.  For w >= pi
// there is no one-dimensional profile of width w for the interior to settle
// onto, so the center value rises with L instead of descending through h/2
// and the shooting condition never gains a sign change; the report carries
// the observed ceiling for each h.
NonexistenceReport nonexistence_probe(double alpha, double w,
                                      const std::vector<double>& h_schedule,
                                      const std::vector<double>& L_samples,
                                      int ns, int nt,
                                      const SolverConfig& cfg = {});

}  // namespace mcf
