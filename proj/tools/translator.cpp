// Command-line front end: constructs translator patches, runs diagnostics,
// and exports fields (CSV), reports (JSON), and meshes (OBJ/PLY).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcf/analytic.hpp"
#include "mcf/diagnostics.hpp"
#include "mcf/errors.hpp"
#include "mcf/families.hpp"
#include "mcf/field_io.hpp"
#include "mcf/geometry.hpp"
#include "mcf/solver.hpp"
#include "mcf/surface.hpp"

namespace {

using nlohmann::json;

struct GridDims {
  int ns = 0, nt = 0;
};

GridDims parse_grid(const std::string& s) {
  GridDims g;
  if (std::sscanf(s.c_str(), "%dx%d", &g.ns, &g.nt) != 2 || g.ns < 3 || g.nt < 3)
    throw mcf::Error("bad --grid value '" + s + "' (expected NxM with N,M >= 3)");
  return g;
}

std::pair<int, int> parse_copies(const std::string& s) {
  int a = 0, b = 0;
  if (std::sscanf(s.c_str(), "%dx%d", &a, &b) != 2 || a < 1 || b < 1)
    throw mcf::Error("bad --copies value '" + s + "' (expected N1xN2, each >= 1)");
  return {a, b};
}

// Strip rectangle [xlo,xhi] x [inset, w-inset]; the inset keeps log-type
// closed forms finite at sampled nodes.
mcf::PlanarDomain inset_strip(double xlo, double xhi, double w, double inset) {
  mcf::PlanarDomain dom = mcf::make_truncated_strip(xlo, xhi, w - 2 * inset);
  dom.origin.y() = inset;
  return dom;
}

// Negative-curvature census over masked interior nodes.
json curvature_summary(const mcf::ScalarField& u, const std::vector<bool>& mask) {
  const mcf::ScalarField K = mcf::gauss_curvature(u);
  long total = 0, negative = 0;
  for (int j = 1; j < u.nt() - 1; ++j)
    for (int i = 1; i < u.ns() - 1; ++i) {
      if (!mask[static_cast<size_t>(j) * u.ns() + i]) continue;
      ++total;
      if (K.at(i, j) < 0) ++negative;
    }
  json out;
  out["interior_nodes"] = total;
  out["negative_nodes"] = negative;
  out["negative_fraction"] = total ? static_cast<double>(negative) / total : 0.0;
  return out;
}

json fit_summary(const mcf::FitReport& r) {
  json out;
  out["xslope"] = r.xslope;
  out["yslope"] = r.yslope;
  out["offset"] = r.offset;
  out["sup_dev"] = r.sup_dev;
  return out;
}

void export_mesh_files(const mcf::SurfaceMesh& mesh, const std::string& base,
                       const std::string& format) {
  if (format == "obj" || format == "both") mcf::export_obj(mesh, base + ".obj");
  if (format == "ply" || format == "both") mcf::export_ply(mesh, base + ".ply");
}

// ---------------------------------------------------------------- exact ----

struct ExactArgs {
  std::string surface = "grim-reaper";
  int n = 64;
  double w = M_PI;
  int sign = -1;
  double x0 = 0, z0 = 0;
  double xlo = -2, xhi = 2;
  std::string out;
  std::string format = "csv";
};

int cmd_exact(const ExactArgs& a) {
  if (a.surface != "grim-reaper" && a.surface != "tilted-reaper")
    throw mcf::Error("--surface must be grim-reaper or tilted-reaper");
  if (a.surface == "tilted-reaper" && a.w < M_PI)
    throw mcf::Error("tilted reaper needs w >= pi");
  if (a.sign != 1 && a.sign != -1) throw mcf::Error("--sign must be +1 or -1");
  if (!(a.xhi > a.xlo)) throw mcf::Error("empty x range");
  if (a.n < 3) throw mcf::Error("--n must be >= 3");

  const double w = a.surface == "grim-reaper" ? M_PI : a.w;
  const mcf::PlanarDomain dom = inset_strip(a.xlo, a.xhi, w, w / (2 * a.n));
  mcf::ScalarField u =
      a.surface == "grim-reaper"
          ? mcf::sample(dom, a.n, a.n, mcf::grim_reaper)
          : mcf::sample(dom, a.n, a.n, [&](double x, double y) {
              return mcf::tilted_reaper({w, a.sign, a.x0, a.z0}, x, y);
            });
  mcf::write_field_csv(u, a.out);
  if (a.format == "obj" || a.format == "both")
    mcf::export_obj(mcf::graph_to_mesh(u),
                    a.out.substr(0, a.out.find_last_of('.')) + ".obj");
  return 0;
}

// ---------------------------------------------------------------- scherk ----

struct ScherkArgs {
  double alpha = M_PI / 2;
  double w = M_PI / 2;
  std::vector<double> h_list = {4, 6, 8};
  std::vector<double> w_list;
  std::string grid = "129x65";
  double tol = 1e-10;
  int jobs = 1;
  std::string out;
};

json scherk_report(const mcf::ScherkResult& r) {
  json rep = mcf::make_report("scherk");
  rep["alpha"] = r.alpha;
  rep["w"] = r.w;
  rep["h_schedule"] = r.h_schedule;
  rep["L_per_h"] = r.L_values;
  rep["L_estimate"] = r.L_estimate;
  rep["increments"] = r.increments;
  const mcf::IdentityReport& id = r.identity.back();
  rep["flux_lhs"] = id.lhs;
  rep["flux_rhs"] = id.rhs;
  rep["mismatch"] = id.mismatch;
  json per_h = json::array();
  for (const mcf::IdentityReport& e : r.identity)
    per_h.push_back({{"h", e.h}, {"L", e.L}, {"lhs", e.lhs}, {"rhs", e.rhs},
                     {"mismatch", e.mismatch}});
  rep["identity_per_h"] = per_h;
  return rep;
}

int cmd_scherk(const ScherkArgs& a) {
  const GridDims g = parse_grid(a.grid);
  mcf::SolverConfig cfg;
  cfg.tolerance = a.tol;
  if (a.jobs < 1) throw mcf::Error("--jobs must be >= 1");

  if (!a.w_list.empty()) {
    // Sweep mode: one (w, L_estimate) row per entry, run serially.
    json rep = mcf::make_report("scherk-sweep");
    rep["alpha"] = a.alpha;
    rep["h_schedule"] = a.h_list;
    json entries = json::array();
    std::string table = "w,L_estimate\n";
    for (double w : a.w_list) {
      const mcf::ScherkResult r =
          mcf::estimate_scherk(a.alpha, w, a.h_list, g.ns, g.nt, cfg);
      char row[64];
      std::snprintf(row, sizeof row, "%.17g,%.17g\n", w, r.L_estimate);
      table += row;
      entries.push_back({{"w", w}, {"L_estimate", r.L_estimate}});
    }
    rep["entries"] = entries;
    std::ofstream csv(a.out + ".csv", std::ios::binary);
    if (!csv) throw mcf::Error("cannot open " + a.out + ".csv");
    csv << table;
    mcf::write_json(rep, a.out + ".json");
    return 0;
  }

  const mcf::ScherkResult r =
      mcf::estimate_scherk(a.alpha, a.w, a.h_list, g.ns, g.nt, cfg);
  mcf::write_field_csv(r.field, a.out + ".csv");
  mcf::write_json(scherk_report(r), a.out + ".json");
  return 0;
}

// ----------------------------------------------------------- scherkenoid ----

struct ScherkenoidArgs {
  double alpha = M_PI / 2;
  double w = 2 * M_PI;
  double trunc = 26;
  double h = 64;
  std::string grid = "257x65";
  double tol = 1e-10;
  std::string out;
  std::string format = "obj";
  std::string copies = "1x1";
};

int cmd_scherkenoid(const ScherkenoidArgs& a) {
  const GridDims g = parse_grid(a.grid);
  const auto [n1, n2] = parse_copies(a.copies);
  mcf::SolverConfig cfg;
  cfg.tolerance = a.tol;

  const mcf::ScherkenoidResult r =
      mcf::solve_scherkenoid(a.alpha, a.w, a.trunc, a.h, g.ns, g.nt, cfg);
  const mcf::ScalarField& u = r.field;

  json rep = mcf::make_report("scherkenoid");
  rep["alpha"] = a.alpha;
  rep["w"] = a.w;
  rep["trunc"] = a.trunc;
  rep["h"] = a.h;
  rep["newton"] = {{"iterations", r.report.iterations},
                   {"residual", r.report.final_residual}};
  rep["fitted_offset"] = r.fitted_offset;
  rep["curvature"] = curvature_summary(u, r.interior_mask);
  rep["total_curvature"] = mcf::total_curvature(u, u.full_window(), &r.interior_mask);
  rep["total_curvature_target"] = 2 * std::asin(M_PI / a.w);
  try {
    mcf::FitOptions fopts;
    fopts.trim = a.w / 2;
    const mcf::FitReport fit = mcf::asymptote_fit(
        u, mcf::FitSide::Right, mcf::FitModel::TiltedReaper, a.w, fopts);
    rep["asymptote"] = fit_summary(fit);
    rep["asymptote"]["target_slope"] = mcf::g_w_slope(a.w);
  } catch (const mcf::WindowTooSmall& e) {
    rep["asymptote"] = {{"skipped", e.what()}};
  }

  mcf::SurfaceMesh piece = mcf::graph_to_mesh(u);
  const auto corners = u.domain().corners();
  piece.corner_axes = {corners[0], corners[3]};  // slanted-edge endpoints
  const mcf::SurfaceMesh mesh =
      mcf::assemble_periodic(piece, mcf::FamilyKind::Scherkenoid, n1, n2);
  rep["mesh"] = {{"pieces", mesh.pieces.size()},
                 {"vertices", mesh.vertices.size()},
                 {"period", {mesh.periods[0].x(), mesh.periods[0].y(), 0.0}}};

  mcf::write_field_csv(u, a.out + ".csv");
  mcf::write_json(rep, a.out + ".json");
  export_mesh_files(mesh, a.out, a.format);
  return 0;
}

// -------------------------------------------------------------- helicoid ----

struct HelicoidArgs {
  double w = M_PI / 4;
  double trunc = 2.5;
  double H = 8;
  std::string grid = "161x33";
  double tol = 1e-10;
  std::string out;
  std::string format = "obj";
  std::string copies = "1x1";
};

int cmd_helicoid(const HelicoidArgs& a) {
  const GridDims g = parse_grid(a.grid);
  const auto [n1, n2] = parse_copies(a.copies);
  mcf::SolverConfig cfg;
  cfg.tolerance = a.tol;

  const mcf::HelicoidResult r =
      mcf::solve_helicoid_like(a.w, a.trunc, a.H, g.ns, g.nt, cfg);
  const mcf::ScalarField& u = r.field;

  json rep = mcf::make_report("helicoid");
  rep["w"] = a.w;
  rep["trunc"] = a.trunc;
  rep["H"] = a.H;
  rep["x_hat"] = r.xhat;
  rep["sweeps"] = r.sweeps;
  rep["x_hat_history"] = r.xhat_history;
  rep["newton"] = {{"iterations", r.report.iterations},
                   {"residual", r.report.final_residual}};
  rep["curvature"] = curvature_summary(u, r.interior_mask);

  // Normal direction at the domain ends (one column inside), mid-height.
  const int jm = u.nt() / 2;
  const mcf::Vec3 nl = mcf::gauss_map(u, 1, jm);
  const mcf::Vec3 nr = mcf::gauss_map(u, u.ns() - 2, jm);
  rep["end_normals"] = {{"left", {nl.x(), nl.y(), nl.z()}},
                        {"right", {nr.x(), nr.y(), nr.z()}}};

  mcf::SurfaceMesh piece = mcf::graph_to_mesh(u);
  piece.corner_axes = {mcf::Vec2(0, 0), mcf::Vec2(r.xhat, a.w)};
  const mcf::SurfaceMesh mesh =
      mcf::assemble_periodic(piece, mcf::FamilyKind::HelicoidLike, n1, n2);
  rep["mesh"] = {{"pieces", mesh.pieces.size()},
                 {"vertices", mesh.vertices.size()},
                 {"period", {mesh.periods[0].x(), mesh.periods[0].y(), 0.0}}};

  mcf::write_field_csv(u, a.out + ".csv");
  mcf::write_json(rep, a.out + ".json");
  export_mesh_files(mesh, a.out, a.format);
  return 0;
}

// ------------------------------------------------------------- pitchfork ----

struct PitchforkArgs {
  double w = 1.5 * M_PI;
  double trunc = 10;
  double H = 16;
  std::string grid = "321x49";
  double tol = 1e-10;
  std::string out;
  std::string format = "obj";
};

int cmd_pitchfork(const PitchforkArgs& a) {
  const GridDims g = parse_grid(a.grid);
  mcf::SolverConfig cfg;
  cfg.tolerance = a.tol;

  const mcf::PitchforkResult r =
      mcf::solve_pitchfork(a.w, a.trunc, a.H, g.ns, g.nt, cfg);
  const mcf::ScalarField& u = r.field;

  json rep = mcf::make_report("pitchfork");
  rep["w"] = a.w;
  rep["trunc"] = a.trunc;
  rep["H"] = a.H;
  rep["fitted_offset"] = r.fitted_offset;
  rep["newton"] = {{"iterations", r.report.iterations},
                   {"residual", r.report.final_residual}};
  rep["curvature"] = curvature_summary(u, r.interior_mask);
  rep["total_curvature"] = mcf::total_curvature(u, u.full_window(), &r.interior_mask);

  // Untilted region: max x-slope over interior nodes with y in (pi, w).
  double max_slope = -1e300;
  if (a.w > M_PI + 0.4) {
    for (int j = 1; j < u.nt() - 1; ++j) {
      const double y = u.node_xy(1, j).y();
      if (y < M_PI + 0.2 || y > a.w - 0.2) continue;
      for (int i = 1; i < u.ns() - 1; ++i) {
        if (!r.interior_mask[static_cast<size_t>(j) * u.ns() + i]) continue;
        max_slope = std::max(max_slope, u.gradient_xy(i, j).x());
      }
    }
  }
  rep["untilted_band_max_xslope"] = max_slope;

  mcf::write_field_csv(u, a.out + ".csv");
  mcf::write_json(rep, a.out + ".json");
  export_mesh_files(mcf::graph_to_mesh(u), a.out, a.format);
  return 0;
}

// -------------------------------------------------------------- diagnose ----

struct DiagnoseArgs {
  std::string field;
  std::vector<std::string> checks;
  std::string level = "inf";
  double w = 0;
  std::string out;
};

json check_residual_refinement(const mcf::ScalarField& u) {
  const int ns = u.ns(), nt = u.nt();
  if ((ns - 1) % 4 != 0 || (nt - 1) % 4 != 0)
    throw mcf::Error("residual-refinement needs node counts 4k+1 in each direction");
  auto coarsen = [&](int stride) {
    mcf::ScalarField c = mcf::build_grid(u.domain(), (ns - 1) / stride + 1,
                                         (nt - 1) / stride + 1);
    for (int j = 0; j < c.nt(); ++j)
      for (int i = 0; i < c.ns(); ++i)
        c.at(i, j) = u.at(i * stride, j * stride);
    return c;
  };
  const double r4 = mcf::residual_sup_norm(coarsen(4));
  const double r2 = mcf::residual_sup_norm(coarsen(2));
  const double r1 = mcf::residual_sup_norm(u);
  json out;
  out["residual_coarse"] = r4;
  out["residual_mid"] = r2;
  out["residual_fine"] = r1;
  out["pass"] = r1 <= 0.35 * r2 && r2 <= 0.35 * r4;
  return out;
}

json check_morse(const mcf::ScalarField& u, const std::string& level) {
  double a;
  if (level == "inf") {
    a = std::numeric_limits<double>::infinity();
  } else {
    try {
      a = std::stod(level);
    } catch (...) {
      throw mcf::Error("bad --level value '" + level + "'");
    }
  }
  const mcf::MorseReport r = mcf::morse_count_check(u, a);
  json out;
  out["level"] = level;
  out["N"] = r.N;
  out["c0"] = r.c0;
  out["c1"] = r.c1;
  out["chi"] = r.chi;
  out["interior_minima"] = r.interior_minima;
  out["interior_maxima"] = r.interior_maxima;
  out["pass"] = r.identity_holds;
  return out;
}

json check_gauss_image(const mcf::ScalarField& u, double w) {
  if (!(w >= M_PI)) throw mcf::Error("gauss-image needs --w >= pi");
  const double k = std::sqrt((w / M_PI) * (w / M_PI) - 1);
  double min_margin = 1e300;
  for (int j = 2; j < u.nt() - 2; ++j)
    for (int i = 2; i < u.ns() - 2; ++i) {
      const mcf::Vec3 nu = mcf::gauss_map(u, i, j);
      min_margin = std::min(min_margin, nu.x() - k * nu.z());
    }
  json out;
  out["slope"] = k;
  out["min_margin"] = min_margin;
  out["tolerance"] = 0.05;
  out["pass"] = min_margin >= -0.05;
  return out;
}

int cmd_diagnose(const DiagnoseArgs& a) {
  if (a.checks.empty()) throw mcf::Error("no --check given");
  const mcf::ScalarField u = mcf::read_field_csv(a.field);
  json rep = mcf::make_report("diagnose");
  rep["field"] = a.field;
  bool all_pass = true;
  for (const std::string& c : a.checks) {
    json r;
    if (c == "residual-refinement")
      r = check_residual_refinement(u);
    else if (c == "morse")
      r = check_morse(u, a.level);
    else if (c == "gauss-image")
      r = check_gauss_image(u, a.w);
    else
      throw mcf::Error("unknown check '" + c + "'");
    all_pass = all_pass && r["pass"].get<bool>();
    rep["checks"][c] = r;
  }
  rep["pass"] = all_pass;
  if (a.out.empty())
    std::cout << rep.dump(2) << "\n";
  else
    mcf::write_json(rep, a.out);
  return all_pass ? 0 : 4;
}

// ------------------------------------------------------------------ mesh ----

struct MeshArgs {
  std::string field;
  std::string family = "graph";
  double xhat = 0;
  std::string copies = "1x1";
  std::string out;
  std::string format = "obj";
};

int cmd_mesh(const MeshArgs& a) {
  const auto [n1, n2] = parse_copies(a.copies);
  const mcf::ScalarField u = mcf::read_field_csv(a.field);
  mcf::SurfaceMesh piece = mcf::graph_to_mesh(u);
  mcf::SurfaceMesh mesh;
  if (a.family == "graph") {
    mesh = std::move(piece);
  } else if (a.family == "scherk") {
    mesh = mcf::assemble_periodic(piece, mcf::FamilyKind::Scherk, n1, n2);
  } else if (a.family == "scherkenoid") {
    const auto corners = u.domain().corners();
    piece.corner_axes = {corners[0], corners[3]};
    mesh = mcf::assemble_periodic(piece, mcf::FamilyKind::Scherkenoid, n1, n2);
  } else if (a.family == "helicoid-like") {
    if (!(a.xhat > 0)) throw mcf::Error("helicoid-like assembly needs --xhat > 0");
    piece.corner_axes = {mcf::Vec2(0, 0), mcf::Vec2(a.xhat, u.domain().width)};
    mesh = mcf::assemble_periodic(piece, mcf::FamilyKind::HelicoidLike, n1, n2);
  } else {
    throw mcf::Error("unknown --family '" + a.family + "'");
  }

  json rep = mcf::make_report("mesh");
  rep["family"] = a.family;
  rep["pieces"] = mesh.pieces.size();
  rep["vertices"] = mesh.vertices.size();
  rep["triangles"] = mesh.triangles.size();
  json periods = json::array();
  for (const mcf::Vec3& p : mesh.periods) periods.push_back({p.x(), p.y(), p.z()});
  rep["periods"] = periods;
  rep["seam_z_spread"] = mcf::seam_z_spread(mesh);

  mcf::write_json(rep, a.out + ".json");
  export_mesh_files(mesh, a.out, a.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scherk-type translator construction and verification toolkit"};
  app.require_subcommand(1);
  // Long-only help so that `--h` (surrogate height) stays available.
  app.set_help_flag("--help", "print help and exit");
  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help and exit");
    return sub;
  };

  ExactArgs ex;
  auto* exact = add_sub("exact", "Sample closed-form translators");
  exact->add_option("--surface", ex.surface, "grim-reaper | tilted-reaper");
  exact->add_option("--n", ex.n, "nodes per side");
  exact->add_option("--w", ex.w, "strip width (tilted reaper, >= pi)");
  exact->add_option("--sign", ex.sign, "tilt sign, +1 or -1");
  exact->add_option("--x0", ex.x0, "horizontal shift");
  exact->add_option("--z0", ex.z0, "vertical shift");
  exact->add_option("--xlo", ex.xlo, "left x limit");
  exact->add_option("--xhi", ex.xhi, "right x limit");
  exact->add_option("--out", ex.out, "output CSV path")->required();
  exact->add_option("--format", ex.format, "csv | obj | both");
  exact->set_config("--config");

  ScherkArgs sk;
  auto* scherk = add_sub("scherk", "Scherk cell L(h) construction");
  scherk->add_option("--alpha", sk.alpha, "corner angle in (0,pi)");
  scherk->add_option("--w", sk.w, "strip width (< pi)");
  scherk->add_option("--h-list", sk.h_list, "increasing surrogate heights");
  scherk->add_option("--w-list", sk.w_list, "sweep widths (table mode)");
  scherk->add_option("--grid", sk.grid, "grid NxM (odd x odd)");
  scherk->add_option("--tol", sk.tol, "Newton residual tolerance");
  scherk->add_option("--jobs", sk.jobs, "sweep parallelism limit (reserved)");
  scherk->add_option("--out", sk.out, "output base path")->required();
  scherk->set_config("--config");

  ScherkenoidArgs sn;
  auto* noid = add_sub("scherkenoid", "Truncated scherkenoid patch");
  noid->add_option("--alpha", sn.alpha, "corner angle in (0,pi)");
  noid->add_option("--w", sn.w, "strip width (>= pi)");
  noid->add_option("--trunc", sn.trunc, "truncation length c");
  noid->add_option("--h", sn.h, "slanted-edge boundary value");
  noid->add_option("--grid", sn.grid, "grid NxM");
  noid->add_option("--tol", sn.tol, "Newton residual tolerance");
  noid->add_option("--out", sn.out, "output base path")->required();
  noid->add_option("--format", sn.format, "obj | ply | both");
  noid->add_option("--copies", sn.copies, "assembly copies N1xN2");
  noid->set_config("--config");

  HelicoidArgs hl;
  auto* heli = add_sub("helicoid", "Helicoid-like patch with axis fit");
  heli->add_option("--w", hl.w, "strip width (< pi)");
  heli->add_option("--trunc", hl.trunc, "half-length a");
  heli->add_option("--H", hl.H, "surrogate boundary height");
  heli->add_option("--grid", hl.grid, "grid NxM");
  heli->add_option("--tol", hl.tol, "Newton residual tolerance");
  heli->add_option("--out", hl.out, "output base path")->required();
  heli->add_option("--format", hl.format, "obj | ply | both");
  heli->add_option("--copies", hl.copies, "assembly copies N1xN2");
  heli->set_config("--config");

  PitchforkArgs pf;
  auto* pitch = add_sub("pitchfork", "Truncated pitchfork patch");
  pitch->add_option("--w", pf.w, "strip width (>= pi)");
  pitch->add_option("--trunc", pf.trunc, "half-length a");
  pitch->add_option("--H", pf.H, "surrogate boundary height");
  pitch->add_option("--grid", pf.grid, "grid NxM");
  pitch->add_option("--tol", pf.tol, "Newton residual tolerance");
  pitch->add_option("--out", pf.out, "output base path")->required();
  pitch->add_option("--format", pf.format, "obj | ply | both");
  pitch->set_config("--config");

  DiagnoseArgs dg;
  auto* diag = add_sub("diagnose", "Run checks on a field CSV");
  diag->add_option("--field", dg.field, "field CSV path")->required();
  diag->add_option("--check", dg.checks,
                   "residual-refinement | morse | gauss-image");
  diag->add_option("--level", dg.level, "morse sublevel ('inf' or a number)");
  diag->add_option("--w", dg.w, "strip width for gauss-image");
  diag->add_option("--out", dg.out, "report JSON path (default: stdout)");
  diag->set_config("--config");

  MeshArgs ms;
  auto* mesh = add_sub("mesh", "Triangulate and assemble a field");
  mesh->add_option("--field", ms.field, "field CSV path")->required();
  mesh->add_option("--family", ms.family,
                   "graph | scherk | scherkenoid | helicoid-like");
  mesh->add_option("--xhat", ms.xhat, "axis offset (helicoid-like)");
  mesh->add_option("--copies", ms.copies, "assembly copies N1xN2");
  mesh->add_option("--out", ms.out, "output base path")->required();
  mesh->add_option("--format", ms.format, "obj | ply | both");
  mesh->set_config("--config");

  int rc = 0;
  exact->callback([&] { rc = cmd_exact(ex); });
  scherk->callback([&] { rc = cmd_scherk(sk); });
  noid->callback([&] { rc = cmd_scherkenoid(sn); });
  heli->callback([&] { rc = cmd_helicoid(hl); });
  pitch->callback([&] { rc = cmd_pitchfork(pf); });
  diag->callback([&] { rc = cmd_diagnose(dg); });
  mesh->callback([&] { rc = cmd_mesh(ms); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const mcf::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mcf::FixedPointDivergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mcf::BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mcf::MonotonicityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mcf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
