#include "mcf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "mcf/errors.hpp"

namespace mcf {

SurfaceMesh graph_to_mesh(const ScalarField& u) {
  SurfaceMesh m;
  const int ns = u.ns(), nt = u.nt();
  m.vertices.reserve(static_cast<size_t>(ns) * nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) {
      const Vec2 xy = u.node_xy(i, j);
      m.vertices.push_back({xy.x(), xy.y(), u.at(i, j)});
    }
  auto vid = [ns](int i, int j) { return j * ns + i; };
  for (int j = 0; j + 1 < nt; ++j)
    for (int i = 0; i + 1 < ns; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      const double d_main = (m.vertices[v00] - m.vertices[v11]).norm();
      const double d_anti = (m.vertices[v10] - m.vertices[v01]).norm();
      if (d_main <= d_anti) {
        m.triangles.push_back({v00, v10, v11});
        m.triangles.push_back({v00, v11, v01});
      } else {
        m.triangles.push_back({v00, v10, v01});
        m.triangles.push_back({v10, v11, v01});
      }
    }
  m.vertex_piece.assign(m.vertices.size(), 0);
  m.pieces.push_back({});
  for (const Vec2& c : u.domain().corners()) m.corner_axes.push_back(c);
  return m;
}

namespace {

int find_axis(const SurfaceMesh& m, const Vec2& p) {
  for (size_t k = 0; k < m.corner_axes.size(); ++k) {
    const Vec2& a = m.corner_axes[k];
    if ((p - a).norm() <= 1e-9 * (1 + a.norm())) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

SurfaceMesh schwarz_reflect(const SurfaceMesh& piece, const Vec2& axis_point) {
  const int k = find_axis(piece, axis_point);
  if (k < 0)
    throw AxisNotOnBoundary("reflection axis is not a recorded corner line");
  const Vec2 a = piece.corner_axes[k];

  SurfaceMesh m = piece;
  for (Vec3& v : m.vertices) {
    v.x() = 2 * a.x() - v.x();
    v.y() = 2 * a.y() - v.y();
  }
  for (Vec2& c : m.corner_axes) c = 2 * a - c;
  for (PieceInfo& p : m.pieces) {
    p.word.push_back(k);
    p.sign = -p.sign;
    p.offset = 2 * a - p.offset;
  }
  return m;
}

namespace {

struct Transform {
  int sign = +1;
  Vec2 offset = Vec2::Zero();
  std::vector<int> word;
};

}  // namespace

SurfaceMesh assemble_periodic(const SurfaceMesh& piece, FamilyKind family,
                              int n1, int n2) {
  const size_t n_axes = piece.corner_axes.size();
  if (family == FamilyKind::Scherk && n_axes != 4)
    throw FamilyMismatch("scherk assembly needs 4 corner axes");
  if (family != FamilyKind::Scherk && n_axes != 2)
    throw FamilyMismatch("singly periodic assembly needs 2 corner axes");
  if (n1 < 1 || n2 < 1) throw FamilyMismatch("copy counts must be >= 1");

  const int depth =
      family == FamilyKind::Scherk ? n1 + n2 - 1 : 2 * std::max(n1, n2);

  // BFS over composed reflections; each child reflects the current copy
  // about one of its (transformed) corner lines:
  //   T(v) = s v + o,  child = (-s, o + 2 s a_k).
  double scale = 1.0;
  for (const Vec2& a : piece.corner_axes) scale = std::max(scale, a.norm());
  const double q = 1e-6 * scale;
  auto key = [&](int s, const Vec2& o) {
    return std::make_tuple(s, std::llround(o.x() / q), std::llround(o.y() / q));
  };

  std::vector<Transform> kept;
  std::map<std::tuple<int, long long, long long>, int> seen;
  std::deque<std::pair<Transform, int>> queue;  // transform, generation
  Transform id;
  seen[key(1, Vec2::Zero())] = 0;
  kept.push_back(id);
  queue.push_back({id, 0});
  while (!queue.empty()) {
    auto [T, gen] = queue.front();
    queue.pop_front();
    if (gen >= depth) continue;
    for (size_t k = 0; k < n_axes; ++k) {
      Transform child;
      child.sign = -T.sign;
      child.offset = T.offset + 2.0 * T.sign * piece.corner_axes[k];
      child.word = T.word;
      child.word.push_back(static_cast<int>(k));
      const auto ck = key(child.sign, child.offset);
      if (seen.count(ck)) continue;
      seen[ck] = static_cast<int>(kept.size());
      kept.push_back(child);
      queue.push_back({child, gen + 1});
      if (kept.size() > 2000)
        throw FamilyMismatch("assembly exceeds the copy budget; reduce copies");
    }
  }

  SurfaceMesh out;
  out.corner_axes = piece.corner_axes;
  const size_t nv = piece.vertices.size();
  for (size_t p = 0; p < kept.size(); ++p) {
    const Transform& T = kept[p];
    for (const Vec3& v : piece.vertices)
      out.vertices.push_back(
          {T.sign * v.x() + T.offset.x(), T.sign * v.y() + T.offset.y(), v.z()});
    const int base = static_cast<int>(p * nv);
    for (const auto& t : piece.triangles)
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    out.vertex_piece.insert(out.vertex_piece.end(), nv, static_cast<int>(p));
    PieceInfo info;
    info.word = T.word;
    info.sign = T.sign;
    info.offset = T.offset;
    out.pieces.push_back(info);
  }

  const auto& ax = piece.corner_axes;
  if (family == FamilyKind::Scherk) {
    const Vec2 p1 = 2.0 * (ax[1] - ax[0]), p2 = 2.0 * (ax[3] - ax[0]);
    out.periods.push_back({p1.x(), p1.y(), 0.0});
    out.periods.push_back({p2.x(), p2.y(), 0.0});
  } else {
    const Vec2 p1 = 2.0 * (ax[1] - ax[0]);
    out.periods.push_back({p1.x(), p1.y(), 0.0});
  }
  return out;
}

double periodicity_defect(const SurfaceMesh& mesh, const Vec3& period) {
  if (std::abs(period.z()) > 0)
    throw FamilyMismatch("period vectors are horizontal");
  const Vec2 T(period.x(), period.y());
  const double tol = 0.25 * T.norm();
  // Pair pieces whose transforms differ by the period, then measure on the
  // actual vertices of each paired copy.
  std::vector<std::vector<int>> piece_vertices(mesh.pieces.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    piece_vertices[mesh.vertex_piece[v]].push_back(static_cast<int>(v));

  double defect = -1;
  for (size_t a = 0; a < mesh.pieces.size(); ++a)
    for (size_t b = 0; b < mesh.pieces.size(); ++b) {
      if (a == b) continue;
      if (mesh.pieces[a].sign != mesh.pieces[b].sign) continue;
      const Vec2 d = mesh.pieces[b].offset - mesh.pieces[a].offset;
      if ((d - T).norm() > tol) continue;
      if (piece_vertices[a].size() != piece_vertices[b].size()) continue;
      double worst = 0;
      for (size_t i = 0; i < piece_vertices[a].size(); ++i) {
        const Vec3& va = mesh.vertices[piece_vertices[a][i]];
        const Vec3& vb = mesh.vertices[piece_vertices[b][i]];
        worst = std::max(worst, (va + period - vb).norm());
      }
      defect = std::max(defect, worst);
    }
  if (defect < 0)
    throw FamilyMismatch("no piece pair realizes the requested period");
  return defect;
}

double seam_z_spread(const SurfaceMesh& mesh) {
  const double q = 1e-9;
  std::map<std::pair<long long, long long>, std::pair<double, double>> range;
  for (const Vec3& v : mesh.vertices) {
    const long long ix = std::llround(v.x() / q), iy = std::llround(v.y() / q);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = range.find({ix + dx, iy + dy});
        if (it == range.end()) continue;
        it->second.first = std::min(it->second.first, v.z());
        it->second.second = std::max(it->second.second, v.z());
      }
    auto [it, fresh] = range.try_emplace({ix, iy}, v.z(), v.z());
    if (!fresh) {
      it->second.first = std::min(it->second.first, v.z());
      it->second.second = std::max(it->second.second, v.z());
    }
  }
  double spread = 0;
  for (const auto& [k, r] : range) spread = std::max(spread, r.second - r.first);
  return spread;
}

void export_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  char line[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(line, sizeof line, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << line;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(line, sizeof line, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out << line;
  }
  if (!out) throw Error("write failed: " + path);
}

SurfaceMesh import_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  SurfaceMesh m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> t{};
      ss >> t[0] >> t[1] >> t[2];
      for (int& i : t) --i;
      m.triangles.push_back(t);
    }
  }
  m.vertex_piece.assign(m.vertices.size(), 0);
  m.pieces.push_back({});
  return m;
}

void export_ply(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (const Vec3& v : mesh.vertices) {
    const double xyz[3] = {v.x(), v.y(), v.z()};
    out.write(reinterpret_cast<const char*>(xyz), sizeof xyz);
  }
  for (const auto& t : mesh.triangles) {
    const std::uint8_t n = 3;
    const std::int32_t idx[3] = {t[0], t[1], t[2]};
    out.write(reinterpret_cast<const char*>(&n), 1);
    out.write(reinterpret_cast<const char*>(idx), sizeof idx);
  }
  if (!out) throw Error("write failed: " + path);
}

SurfaceMesh import_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  size_t nv = 0, nf = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "element") {
      std::string what;
      size_t count;
      ss >> what >> count;
      if (what == "vertex") nv = count;
      if (what == "face") nf = count;
    } else if (tag == "end_header") {
      break;
    }
  }
  SurfaceMesh m;
  m.vertices.resize(nv);
  for (Vec3& v : m.vertices) {
    double xyz[3];
    in.read(reinterpret_cast<char*>(xyz), sizeof xyz);
    v = {xyz[0], xyz[1], xyz[2]};
  }
  m.triangles.resize(nf);
  for (auto& t : m.triangles) {
    std::uint8_t n;
    std::int32_t idx[3];
    in.read(reinterpret_cast<char*>(&n), 1);
    in.read(reinterpret_cast<char*>(idx), sizeof idx);
    if (n != 3) throw Error("non-triangular face in " + path);
    t = {idx[0], idx[1], idx[2]};
  }
  if (!in) throw Error("truncated PLY: " + path);
  m.vertex_piece.assign(m.vertices.size(), 0);
  m.pieces.push_back({});
  return m;
}

}  // namespace mcf
