#include "mcf/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>
#include <vector>

namespace mcf {

namespace {

// 3x3 stencil offsets in fixed order and the chart-difference weights of
// each first/second derivative on that stencil.
constexpr int kOff[9][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {0, 0},
                            {1, 0},   {-1, 1}, {0, 1},  {1, 1}};

struct StencilWeights {
  double cs[9] = {}, ct[9] = {}, css[9] = {}, ctt[9] = {}, cst[9] = {};
  StencilWeights(double hs, double ht) {
    auto idx = [](int di, int dj) {
      for (int k = 0; k < 9; ++k)
        if (kOff[k][0] == di && kOff[k][1] == dj) return k;
      return -1;
    };
    cs[idx(1, 0)] = 1 / (2 * hs);
    cs[idx(-1, 0)] = -1 / (2 * hs);
    ct[idx(0, 1)] = 1 / (2 * ht);
    ct[idx(0, -1)] = -1 / (2 * ht);
    css[idx(1, 0)] = 1 / (hs * hs);
    css[idx(-1, 0)] = 1 / (hs * hs);
    css[idx(0, 0)] = -2 / (hs * hs);
    ctt[idx(0, 1)] = 1 / (ht * ht);
    ctt[idx(0, -1)] = 1 / (ht * ht);
    ctt[idx(0, 0)] = -2 / (ht * ht);
    const double k4 = 1 / (4 * hs * ht);
    cst[idx(1, 1)] = k4;
    cst[idx(-1, -1)] = k4;
    cst[idx(1, -1)] = -k4;
    cst[idx(-1, 1)] = -k4;
  }
};

struct Problem {
  const PlanarDomain& dom;
  int ns, nt;
  double hs, ht, shear;
  StencilWeights w;
  Problem(const PlanarDomain& d, int ns_, int nt_)
      : dom(d), ns(ns_), nt(nt_), hs(d.length / (ns_ - 1)),
        ht(d.width / (nt_ - 1)), shear(d.shear), w(hs, ht) {}
  int n_unknowns() const { return (ns - 2) * (nt - 2); }
  int unknown_index(int i, int j) const { return (j - 1) * (ns - 2) + (i - 1); }
};

// The equation is posed as F = A + W^2 = 0 where A is the quasilinear second
// order part and W^2 = 1 + |grad u|^2; the geometric residual is
// R = -F / W^3 = -Div(grad u / W) - 1/W.  Newton runs on F: the two have the
// same zeros, but F keeps the Jacobian well scaled near steep boundary
// layers where the 1/W^3 factor would flatten it and stall the iteration.
// Returns F at one interior node; optionally fills the nine Jacobian entries
// dF/dv over the stencil and the geometric residual R.
double point_equation(const Problem& pb, const std::vector<double>& v, int i,
                      int j, double* jac, double* geom) {
  const int ns = pb.ns;
  auto val = [&](int di, int dj) {
    return v[static_cast<size_t>(j + dj) * ns + (i + di)];
  };
  const double b = pb.shear;
  double vs = 0, vt = 0, vss = 0, vtt = 0, vst = 0;
  double nb[9];
  for (int k = 0; k < 9; ++k) {
    nb[k] = val(kOff[k][0], kOff[k][1]);
    vs += pb.w.cs[k] * nb[k];
    vt += pb.w.ct[k] * nb[k];
    vss += pb.w.css[k] * nb[k];
    vtt += pb.w.ctt[k] * nb[k];
    vst += pb.w.cst[k] * nb[k];
  }
  const double p = vs;
  const double q = vt - b * vs;
  const double X = vss;
  const double M = vst - b * vss;
  const double Y = vtt - 2 * b * vst + b * b * vss;
  const double W2 = 1 + p * p + q * q;
  const double A = (1 + q * q) * X - 2 * p * q * M + (1 + p * p) * Y;
  const double F = A + W2;
  if (geom) *geom = -F / (W2 * std::sqrt(W2));
  if (jac) {
    const double Ap = -2 * q * M + 2 * p * Y;  // dA/dp
    const double Aq = 2 * q * X - 2 * p * M;   // dA/dq
    for (int k = 0; k < 9; ++k) {
      const double dp = pb.w.cs[k];
      const double dq = pb.w.ct[k] - b * pb.w.cs[k];
      const double dX = pb.w.css[k];
      const double dM = pb.w.cst[k] - b * pb.w.css[k];
      const double dY = pb.w.ctt[k] - 2 * b * pb.w.cst[k] + b * b * pb.w.css[k];
      const double dA = (1 + q * q) * dX - 2 * p * q * dM + (1 + p * p) * dY +
                        Ap * dp + Aq * dq;
      jac[k] = dA + 2 * p * dp + 2 * q * dq;
    }
  }
  return F;
}

// Fills R with the F values and returns the sup-norm of the geometric
// residual, which is what convergence is measured against.
double assemble_equation(const Problem& pb, const std::vector<double>& v,
                         Eigen::VectorXd& R) {
  double sup_geom = 0;
  for (int j = 1; j < pb.nt - 1; ++j)
    for (int i = 1; i < pb.ns - 1; ++i) {
      double geom;
      R[pb.unknown_index(i, j)] = point_equation(pb, v, i, j, nullptr, &geom);
      sup_geom = std::max(sup_geom, std::abs(geom));
    }
  return sup_geom;
}

std::pair<ScalarField, SolveReport> newton_solve(const PlanarDomain& dom,
                                                 const BoundaryValues& bc,
                                                 int ns, int nt,
                                                 const SolverConfig& cfg,
                                                 ScalarField u) {
  Problem pb(dom, ns, nt);
  const int n = pb.n_unknowns();
  std::vector<double>& v = u.data();

  Eigen::VectorXd R(n), Rtrial(n), delta(n);
  Eigen::SparseMatrix<double> J(n, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 9);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  SolveReport rep;
  rep.ns = ns;
  rep.nt = nt;

  double sup_geom = assemble_equation(pb, v, R);
  double merit = R.squaredNorm();
  std::vector<double> trial(v.size());
  for (int it = 0; it < cfg.max_newton; ++it) {
    if (sup_geom <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
    trips.clear();
    double jac[9];
    for (int j = 1; j < nt - 1; ++j)
      for (int i = 1; i < ns - 1; ++i) {
        const int row = pb.unknown_index(i, j);
        R[row] = point_equation(pb, v, i, j, jac, nullptr);
        for (int k = 0; k < 9; ++k) {
          const int ii = i + kOff[k][0], jj = j + kOff[k][1];
          if (ii > 0 && ii < ns - 1 && jj > 0 && jj < nt - 1)
            trips.emplace_back(row, pb.unknown_index(ii, jj), jac[k]);
        }
      }
    J.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) break;  // let the caller ramp or report
    delta = lu.solve(-R);

    // Armijo backtracking on the squared norm of F.  The Newton direction is
    // a descent direction of this merit whenever the factorization succeeds,
    // so the loop below can only stall if the step underflows.
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
      trial = v;
      for (int j = 1; j < nt - 1; ++j)
        for (int i = 1; i < ns - 1; ++i)
          trial[static_cast<size_t>(j) * ns + i] +=
              lambda * delta[pb.unknown_index(i, j)];
      const double sup_trial = assemble_equation(pb, trial, Rtrial);
      const double merit_trial = Rtrial.squaredNorm();
      if (std::isfinite(merit_trial) &&
          merit_trial <= (1 - 2 * cfg.sufficient_decrease * lambda) * merit) {
        v.swap(trial);
        merit = merit_trial;
        sup_geom = sup_trial;
        accepted = true;
        break;
      }
      lambda /= 2;
      ++rep.damping_events;
    }
    ++rep.iterations;
    if (!accepted) break;  // line search stalled
  }
  if (!rep.converged && sup_geom <= cfg.tolerance) rep.converged = true;
  rep.final_residual = sup_geom;
  return {std::move(u), rep};
}

void impose_boundary(std::vector<double>& v, const BoundaryValues& bc, int ns,
                     int nt) {
  for (int i = 0; i < ns; ++i) {
    v[i] = bc.at(i, 0);
    v[static_cast<size_t>(nt - 1) * ns + i] = bc.at(i, nt - 1);
  }
  for (int j = 0; j < nt; ++j) {
    v[static_cast<size_t>(j) * ns] = bc.at(0, j);
    v[static_cast<size_t>(j) * ns + ns - 1] = bc.at(ns - 1, j);
  }
}

// Default initial iterate: the solution of the linearization of F at the
// flat state, a constant-coefficient Poisson problem in the sheared chart.
// Unlike transfinite interpolation it has no interior creases next to
// boundary discontinuities, which would otherwise start Newton at a huge
// residual spike.
ScalarField poisson_guess(const PlanarDomain& dom, const BoundaryValues& bc,
                          int ns, int nt) {
  Problem pb(dom, ns, nt);
  const int n = pb.n_unknowns();
  ScalarField u(dom, ns, nt);
  std::vector<double>& v = u.data();
  impose_boundary(v, bc, ns, nt);

  // A at zero gradient reduces to X + Y, with constant stencil weights.
  const double b = pb.shear;
  double clin[9];
  for (int k = 0; k < 9; ++k)
    clin[k] = (1 + b * b) * pb.w.css[k] + pb.w.ctt[k] - 2 * b * pb.w.cst[k];

  Eigen::VectorXd rhs(n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 9);
  for (int j = 1; j < nt - 1; ++j)
    for (int i = 1; i < ns - 1; ++i) {
      const int row = pb.unknown_index(i, j);
      double r = 1.0;  // forcing of the linearized equation
      for (int k = 0; k < 9; ++k) {
        const int ii = i + kOff[k][0], jj = j + kOff[k][1];
        r += clin[k] * v[static_cast<size_t>(jj) * ns + ii];
        if (ii > 0 && ii < ns - 1 && jj > 0 && jj < nt - 1)
          trips.emplace_back(row, pb.unknown_index(ii, jj), clin[k]);
      }
      rhs[row] = -r;
    }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) return u;  // keep the flat-interior start
  const Eigen::VectorXd d = lu.solve(rhs);
  for (int j = 1; j < nt - 1; ++j)
    for (int i = 1; i < ns - 1; ++i)
      v[static_cast<size_t>(j) * ns + i] += d[pb.unknown_index(i, j)];
  return u;
}

ScalarField apply_boundary(const PlanarDomain& dom, const BoundaryValues& bc,
                           int ns, int nt, const ScalarField* guess) {
  if (!guess) return poisson_guess(dom, bc, ns, nt);
  if (guess->ns() != ns || guess->nt() != nt)
    throw IllPosedDomain("initial guess grid dims do not match");
  // Only the nodal values carry over; the field is rebuilt on the target
  // domain so a warm start from a different length stays consistent.
  ScalarField u(dom, ns, nt);
  u.data() = guess->data();
  impose_boundary(u.data(), bc, ns, nt);
  return u;
}

BoundaryValues scaled_bc(const BoundaryValues& bc, double f) {
  BoundaryValues s = bc;
  for (double& v : s.values) v *= f;
  return s;
}

}  // namespace

ScalarField transfinite_guess(const PlanarDomain& dom, const BoundaryValues& bc,
                              int ns, int nt) {
  ScalarField u(dom, ns, nt);
  const double S = dom.length, T = dom.width;
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) {
      const double sg = u.s_at(i) / S, tg = u.t_at(j) / T;
      const double fB = bc.at(i, 0), fT = bc.at(i, nt - 1);
      const double fL = bc.at(0, j), fR = bc.at(ns - 1, j);
      const double c = (1 - sg) * (1 - tg) * bc.at(0, 0) +
                       sg * (1 - tg) * bc.at(ns - 1, 0) +
                       (1 - sg) * tg * bc.at(0, nt - 1) +
                       sg * tg * bc.at(ns - 1, nt - 1);
      u.at(i, j) = (1 - tg) * fB + tg * fT + (1 - sg) * fL + sg * fR - c;
    }
  return u;
}

std::pair<ScalarField, SolveReport> solve_dirichlet(const PlanarDomain& dom,
                                                    const BoundaryValues& bc,
                                                    int ns, int nt,
                                                    const SolverConfig& cfg,
                                                    const ScalarField* guess) {
  if (bc.ns != ns || bc.nt != nt)
    throw IllPosedDomain("boundary values sized for a different grid");
  for (double v : bc.values)
    if (!std::isfinite(v))
      throw IllPosedDomain("boundary values must be finite (resolve +/-inf first)");

  {
    auto [u, r] = newton_solve(dom, bc, ns, nt, cfg,
                               apply_boundary(dom, bc, ns, nt, guess));
    if (r.converged) return {std::move(u), r};
    if (!cfg.continuation) {
      std::ostringstream os;
      os << "Newton failed to converge: " << r.iterations
         << " iterations, residual " << r.final_residual;
      throw NonConvergence(os.str());
    }
  }
  // Boundary-ramp rescue: grow the data from zero strength, warm starting
  // each stage from the last one that converged.  A failed stage halves the
  // increment; a converged one lets it expand again.
  ScalarField stage(dom, ns, nt);
  const ScalarField* prev = nullptr;
  SolveReport rep;
  double f = 0.0, step = 0.25;
  for (int attempts = 0; f < 1.0; ++attempts) {
    if (attempts >= 40) {
      std::ostringstream os;
      os << "Newton failed to converge: boundary ramp stalled at strength "
         << f;
      throw NonConvergence(os.str());
    }
    const double fn = std::min(1.0, f + step);
    const BoundaryValues sbc = scaled_bc(bc, fn);
    auto [u, r] = newton_solve(dom, sbc, ns, nt, cfg,
                               apply_boundary(dom, sbc, ns, nt, prev));
    if (r.converged) {
      stage = std::move(u);
      rep = r;
      prev = &stage;
      f = fn;
      step = std::min(2 * step, 0.5);
    } else {
      step /= 2;
      if (step < 1.0 / 1024) {
        std::ostringstream os;
        os << "Newton failed to converge: boundary ramp stalled at strength "
           << f << " (stage residual " << r.final_residual << ")";
        throw NonConvergence(os.str());
      }
    }
  }
  return {std::move(stage), rep};
}

std::pair<ScalarField, SolveReport> solve_scherk_cell(double alpha, double w,
                                                      double L, double h,
                                                      int ns, int nt,
                                                      const SolverConfig& cfg,
                                                      const ScalarField* guess) {
  if (h <= 0) throw IllPosedDomain("scherk cell needs h > 0");
  if (ns % 2 == 0 || nt % 2 == 0)
    throw IllPosedDomain("scherk cell grid dims must be odd (center node)");
  const PlanarDomain dom = make_parallelogram(alpha, w, L, /*centered=*/true);
  ScalarField grid = build_grid(dom, ns, nt);
  const BoundarySpec spec = BoundarySpec::constants(0.0, 0.0, h, h);
  const BoundaryValues bc = resolve_boundary(grid, spec, /*H=*/h);
  return solve_dirichlet(dom, bc, ns, nt, cfg, guess);
}

PinnedCellResult solve_scherk_cell_pinned(double alpha, double w, double h,
                                          double tau, double L0, int ns, int nt,
                                          const ScalarField* guess,
                                          const SolverConfig& cfg) {
  if (h <= 0) throw IllPosedDomain("scherk cell needs h > 0");
  if (ns % 2 == 0 || nt % 2 == 0)
    throw IllPosedDomain("scherk cell grid dims must be odd (center node)");
  if (!guess) throw IllPosedDomain("pinned cell solve needs a starting state");
  if (guess->ns() != ns || guess->nt() != nt)
    throw IllPosedDomain("initial guess grid dims do not match");
  if (!(L0 > 0)) throw IllPosedDomain("pinned cell solve needs L > 0");

  auto make_dom = [&](double LL) {
    return make_parallelogram(alpha, w, LL, /*centered=*/true);
  };
  // Constant edge data resolves to the same node values for every L.
  const BoundaryValues bc = resolve_boundary(
      build_grid(make_dom(L0), ns, nt), BoundarySpec::constants(0, 0, h, h), h);

  double L = L0;
  std::vector<double> v = guess->data();
  impose_boundary(v, bc, ns, nt);
  const int ic = (ns - 1) / 2, jc = (nt - 1) / 2;
  auto center = [&] { return v[static_cast<size_t>(jc) * ns + ic]; };

  SolveReport rep;
  rep.ns = ns;
  rep.nt = nt;

  const int n = (ns - 2) * (nt - 2);
  Eigen::VectorXd R(n), Rp(n), Rm(n), Rtrial(n), a(n), bl(n), FL(n), delta(n);
  Eigen::SparseMatrix<double> J(n, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 9);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;
  std::vector<double> trial(v.size());
  double sup_geom = 0;

  for (int it = 0; it < cfg.max_newton; ++it) {
    const PlanarDomain dom = make_dom(L);
    Problem pb(dom, ns, nt);
    // The pin equation u_c - tau is weighted to the scale of an F row so the
    // combined merit treats both parts comparably.
    const double wpin = 2 / (pb.hs * pb.hs) + 2 / (pb.ht * pb.ht);

    trips.clear();
    double jac[9];
    sup_geom = 0;
    for (int j = 1; j < nt - 1; ++j)
      for (int i = 1; i < ns - 1; ++i) {
        const int row = pb.unknown_index(i, j);
        double geom;
        R[row] = point_equation(pb, v, i, j, jac, &geom);
        sup_geom = std::max(sup_geom, std::abs(geom));
        for (int k = 0; k < 9; ++k) {
          const int ii = i + kOff[k][0], jj = j + kOff[k][1];
          if (ii > 0 && ii < ns - 1 && jj > 0 && jj < nt - 1)
            trips.emplace_back(row, pb.unknown_index(ii, jj), jac[k]);
        }
      }
    const double pin = wpin * (center() - tau);
    if (sup_geom <= cfg.tolerance &&
        std::abs(center() - tau) <= 1e-9 * std::max(1.0, std::abs(tau))) {
      rep.converged = true;
      break;
    }
    double merit = R.squaredNorm() + pin * pin;

    J.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) break;
    a = lu.solve(-R);

    // dF/dL by central differences; only the stencil spacings depend on L.
    const double dl = 1e-6 * (1 + std::abs(L));
    {
      const PlanarDomain dp = make_dom(L + dl), dm = make_dom(L - dl);
      Problem pbp(dp, ns, nt), pbm(dm, ns, nt);
      for (int j = 1; j < nt - 1; ++j)
        for (int i = 1; i < ns - 1; ++i) {
          const int row = pb.unknown_index(i, j);
          Rp[row] = point_equation(pbp, v, i, j, nullptr, nullptr);
          Rm[row] = point_equation(pbm, v, i, j, nullptr, nullptr);
        }
      FL = (Rp - Rm) / (2 * dl);
    }
    bl = lu.solve(-FL);
    const int rc = pb.unknown_index(ic, jc);
    if (std::abs(bl[rc]) < 1e-14 * (1 + a.cwiseAbs().maxCoeff())) break;
    const double dL = (tau - center() - a[rc]) / bl[rc];
    delta = a + dL * bl;

    // Trust region on the length update: huge jumps land on unrelated
    // solution sheets, so cap the first trial instead of taking them.
    double lambda = 1.0;
    const double cap = 0.35 * (1 + std::abs(L));
    if (std::abs(dL) > cap) lambda = cap / std::abs(dL);
    bool accepted = false;
    for (int hlv = 0; hlv <= cfg.max_halvings; ++hlv) {
      const double Lt = L + lambda * dL;
      if (Lt > 0.05 * w) {
        trial = v;
        for (int j = 1; j < nt - 1; ++j)
          for (int i = 1; i < ns - 1; ++i)
            trial[static_cast<size_t>(j) * ns + i] +=
                lambda * delta[pb.unknown_index(i, j)];
        const PlanarDomain dt = make_dom(Lt);
        Problem pbt(dt, ns, nt);
        double sup_trial = 0;
        for (int j = 1; j < nt - 1; ++j)
          for (int i = 1; i < ns - 1; ++i) {
            double geom;
            Rtrial[pbt.unknown_index(i, j)] =
                point_equation(pbt, trial, i, j, nullptr, &geom);
            sup_trial = std::max(sup_trial, std::abs(geom));
          }
        const double pin_t =
            wpin * (trial[static_cast<size_t>(jc) * ns + ic] - tau);
        const double merit_t = Rtrial.squaredNorm() + pin_t * pin_t;
        if (std::isfinite(merit_t) &&
            merit_t <= (1 - 2 * cfg.sufficient_decrease * lambda) * merit) {
          v.swap(trial);
          L = Lt;
          sup_geom = sup_trial;
          accepted = true;
          break;
        }
      }
      lambda /= 2;
      ++rep.damping_events;
    }
    ++rep.iterations;
    if (!accepted) break;
  }
  if (!rep.converged && sup_geom <= cfg.tolerance &&
      std::abs(center() - tau) <= 1e-9 * std::max(1.0, std::abs(tau)))
    rep.converged = true;
  rep.final_residual = sup_geom;

  PinnedCellResult out;
  const PlanarDomain fdom = make_dom(L);
  out.field = ScalarField(fdom, ns, nt);
  out.field.data() = std::move(v);
  out.report = rep;
  out.L = L;
  return out;
}

}  // namespace mcf
