#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Domain construction / grid parameters are unusable (degenerate angle,
// nonpositive width, truncation too short to form a quadrilateral, ...).
struct IllPosedDomain : Error {
  using Error::Error;
};

// A requested region or window does not fit inside the grid it refers to.
struct RegionOutsideGrid : Error {
  using Error::Error;
};

struct WindowTooSmall : Error {
  using Error::Error;
};

// Newton iteration failed to reach the residual tolerance.  The report
// string carries iteration count and last residual for post-mortems.
struct NonConvergence : Error {
  using Error::Error;
};

// Shooting bracket endpoints do not straddle the target center value.
struct BracketError : Error {
  using Error::Error;
};

// Center value failed the strict-decrease check during the L bisection.
struct MonotonicityViolation : Error {
  using Error::Error;
};

// A gradient-loop sample fell below the resolvable magnitude; the critical
// point cannot be classified at this grid resolution.
struct UnresolvedCritical : Error {
  using Error::Error;
};

// The level `a` passes within 1e-8 of a node value, so sublevel topology
// is ambiguous at grid resolution.
struct NonRegularLevel : Error {
  using Error::Error;
};

// The axis-offset fixed point failed to settle (increments stopped
// decreasing, or the sweep limit was reached).
struct FixedPointDivergence : Error {
  using Error::Error;
};

// Reflection axis is not one of the mesh's recorded corner lines.
struct AxisNotOnBoundary : Error {
  using Error::Error;
};

// Assembly request does not match the piece's family.
struct FamilyMismatch : Error {
  using Error::Error;
};

}  // namespace mcf
