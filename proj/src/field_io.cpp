#include "mcf/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mcf/errors.hpp"

namespace mcf {

void write_field_csv(const ScalarField& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "x,y,u\n";
  char line[128];
  for (int j = 0; j < u.nt(); ++j)
    for (int i = 0; i < u.ns(); ++i) {
      const Vec2 xy = u.node_xy(i, j);
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", xy.x(), xy.y(),
                    u.at(i, j));
      out << line;
    }
  if (!out) throw Error("write failed: " + path);
}

ScalarField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,u")
    throw Error("bad CSV header in " + path + " (expected x,y,u)");
  std::vector<double> xs, ys, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, u;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &u) != 3)
      throw Error("bad CSV row in " + path + ": " + line);
    xs.push_back(x);
    ys.push_back(y);
    us.push_back(u);
  }
  if (xs.size() < 9) throw Error("CSV holds fewer than 9 nodes: " + path);

  // Rows share y; the first row's length gives ns.
  size_t ns = 1;
  while (ns < ys.size() && ys[ns] == ys[0]) ++ns;
  if (ns < 3 || xs.size() % ns != 0)
    throw Error("CSV rows are not a rectangular grid: " + path);
  const size_t nt = xs.size() / ns;
  if (nt < 3) throw Error("CSV needs at least 3 rows: " + path);
  for (size_t j = 0; j < nt; ++j)
    for (size_t i = 0; i < ns; ++i)
      if (ys[j * ns + i] != ys[j * ns])
        throw Error("CSV row has drifting y: " + path);

  const double ht = (ys[(nt - 1) * ns] - ys[0]) / static_cast<double>(nt - 1);
  if (!(ht > 0)) throw Error("CSV rows are not increasing in y: " + path);
  const double shear = (xs[ns] - xs[0]) / ht;

  PlanarDomain dom;
  dom.kind = std::abs(shear) < 1e-14 ? DomainKind::TruncatedStrip
                                     : DomainKind::Parallelogram;
  dom.shear = shear;
  dom.alpha = std::atan2(1.0, shear);
  dom.width = ys[(nt - 1) * ns] - ys[0];
  dom.length = xs[ns - 1] - xs[0];
  dom.origin = {xs[0], ys[0]};
  ScalarField f = build_grid(dom, static_cast<int>(ns), static_cast<int>(nt));
  for (size_t j = 0; j < nt; ++j)
    for (size_t i = 0; i < ns; ++i)
      f.at(static_cast<int>(i), static_cast<int>(j)) = us[j * ns + i];
  return f;
}

nlohmann::json make_report(const std::string& cmd) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["command"] = cmd;
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mcf
